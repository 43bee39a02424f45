#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("fillin-cli-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
};

std::string cli() {
  const char* p = std::getenv("FILLIN_CLI");
  REQUIRE_MESSAGE(p != nullptr, "FILLIN_CLI is not set");
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Result {
  int code;
  std::string out;
};

Result run(const Sandbox& box, const std::string& args) {
  const fs::path log = box.dir / "stdout.txt";
  const std::string cmd = "\"" + cli() + "\" " + args + " > \"" + log.string() + "\" 2> \"" + (box.dir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(log)};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string c; std::getline(in, c, ',');) out.push_back(c);
  return out;
}

}  // namespace

TEST_CASE("list is complete, ordered and stable") {
  Sandbox box;
  const auto a = run(box, "--list");
  const auto b = run(box, "--list");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto names = lines(a.out);
  const std::vector<std::string> expected{"qs-collar",     "ah-mass",       "schwarzschild-by", "cobordism",
                                          "spin-bound",    "embed-steiner", "prop51-corpus",    "stability-2d",
                                          "ricci-path",    "monotone-path-sandwich"};
  CHECK(names == expected);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
}

TEST_CASE("configuration errors exit with code 2") {
  Sandbox box;
  const auto out = " --out \"" + (box.dir / "o").string() + "\"";
  CHECK(run(box, "").code == 2);
  CHECK(run(box, "no-such-scenario" + out).code == 2);
  CHECK(run(box, "schwarzschild-by --config \"" + (box.dir / "missing.json").string() + "\"" + out).code == 2);

  const auto malformed = box.write("malformed.json", "{\"m\": 1,,}");
  CHECK(run(box, "schwarzschild-by --config \"" + malformed.string() + "\"" + out).code == 2);
  const auto unknown = box.write("unknown.json", R"({"mass": 1})");
  CHECK(run(box, "schwarzschild-by --config \"" + unknown.string() + "\"" + out).code == 2);
  const auto wrong_type = box.write("type.json", R"({"m": "one"})");
  CHECK(run(box, "schwarzschild-by --config \"" + wrong_type.string() + "\"" + out).code == 2);
  const auto bad_int = box.write("int.json", R"({"grid_n": 64.5})");
  CHECK(run(box, "schwarzschild-by --config \"" + bad_int.string() + "\"" + out).code == 2);
  const auto range = box.write("range.json", R"({"grid_n": 3})");
  CHECK(run(box, "schwarzschild-by --config \"" + range.string() + "\"" + out).code == 2);
  const auto negative = box.write("neg.json", R"({"tol": -1})");
  CHECK(run(box, "schwarzschild-by --config \"" + negative.string() + "\"" + out).code == 2);
  const auto not_object = box.write("array.json", "[1, 2]");
  CHECK(run(box, "schwarzschild-by --config \"" + not_object.string() + "\"" + out).code == 2);
  CHECK(run(box, "schwarzschild-by --grid-n abc" + out).code == 2);
  CHECK_FALSE(fs::exists(box.dir / "o" / "schwarzschild-by-summary.json"));
}

TEST_CASE("schwarzschild run writes tables and summary") {
  Sandbox box;
  const auto cfg = box.write("cfg.json", R"({"m": 1.0, "r_list": [10, 100, 1000]})");
  const auto o = box.dir / "o";
  const auto r = run(box, "schwarzschild-by --config \"" + cfg.string() + "\" --out \"" + o.string() + "\" --grid-n 32");
  CHECK(r.code == 0);
  CHECK(r.out.find("schwarzschild-by: pass") != std::string::npos);

  const auto rows = lines(slurp(o / "schwarzschild-by-by.csv"));
  REQUIRE(rows.size() == 4);
  const auto header = split(rows[0]);
  REQUIRE(header.size() == 6);
  CHECK(header[0] == "r");
  CHECK(header[2] == "m_by");
  const double radii[] = {10, 100, 1000};
  for (int i = 0; i < 3; ++i) {
    const auto cells = split(rows[i + 1]);
    REQUIRE(cells.size() == 6);
    const double rr = std::stod(cells[0]);
    CHECK(rr == radii[i]);
    // mean curvature 2/r sqrt(1-2m/r) against the Euclidean 2/r; the difference
    // of two O(r) integrals loses about log10(r) digits
    const double oracle = rr * (1 - std::sqrt(1 - 2 / rr));
    CHECK(std::abs(std::stod(cells[2]) - oracle) <= 1e-11 * rr * oracle);
    CHECK(std::abs(std::stod(cells[3]) - oracle) <= 1e-11 * rr * oracle);
    // round trip of the printed value is exact at 17 digits
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::stod(cells[2]));
    CHECK(std::string(buf) == cells[2]);
  }

  const json s = json::parse(slurp(o / "schwarzschild-by-summary.json"));
  CHECK(s["scenario"] == "schwarzschild-by");
  CHECK(s["passed"] == true);
  CHECK(s["config"]["grid_n"] == 32);
  CHECK(s["config"]["m"] == 1.0);
  CHECK(s["environment"]["grid_n"] == 32);
  CHECK(s["environment"].contains("version"));
  CHECK(s["environment"].contains("compiler"));
  CHECK(s["checks"].is_array());
  CHECK(s["checks"].size() >= 4);
  for (const auto& c : s["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("value"));
    CHECK(c["pass"] == true);
  }
  CHECK(s["runtime_seconds"].get<double>() >= 0);
}

TEST_CASE("repeated runs give byte-identical tables") {
  Sandbox box;
  const auto a = box.dir / "a", b = box.dir / "b";
  REQUIRE(run(box, "schwarzschild-by --out \"" + a.string() + "\"").code == 0);
  REQUIRE(run(box, "schwarzschild-by --out \"" + b.string() + "\"").code == 0);
  int compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++compared;
  }
  CHECK(compared >= 1);
}

TEST_CASE("output directory from config and override precedence") {
  Sandbox box;
  const auto from_cfg = box.dir / "cfg-out";
  const auto cfg = box.write("cfg.json", json{{"output", from_cfg.string()}}.dump());
  REQUIRE(run(box, "schwarzschild-by --config \"" + cfg.string() + "\"").code == 0);
  CHECK(fs::exists(from_cfg / "schwarzschild-by-summary.json"));
  const auto flag = box.dir / "flag-out";
  REQUIRE(run(box, "schwarzschild-by --config \"" + cfg.string() + "\" --out \"" + flag.string() + "\"").code == 0);
  CHECK(fs::exists(flag / "schwarzschild-by-summary.json"));
}

TEST_CASE("failed checks exit with code 1") {
  Sandbox box;
  const auto cfg = box.write("tight.json", R"({"slope_tol": 1e-12})");
  const auto o = box.dir / "o";
  const auto r = run(box, "schwarzschild-by --config \"" + cfg.string() + "\" --out \"" + o.string() + "\"");
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL log_log_slope") != std::string::npos);
  const json s = json::parse(slurp(o / "schwarzschild-by-summary.json"));
  CHECK(s["passed"] == false);
}

TEST_CASE("numerical breakdown exits with code 3 and leaves a summary") {
  Sandbox box;
  const auto cfg = box.write("blowup.json", R"({"f": 50, "eps": 2, "grid_n": 17})");
  const auto o = box.dir / "o";
  CHECK(run(box, "qs-collar --config \"" + cfg.string() + "\" --out \"" + o.string() + "\"").code == 3);
  const json s = json::parse(slurp(o / "qs-collar-summary.json"));
  CHECK(s["passed"] == false);
  CHECK(s["error"]["kind"] == "numerical");
  CHECK_FALSE(s["error"]["message"].get<std::string>().empty());
}

TEST_CASE("inline profile tables are accepted") {
  Sandbox box;
  // unit sphere as a table: f = 1, h = sin x
  const int n = 33;
  json x = json::array(), f = json::array(), h = json::array();
  for (int i = 0; i < n; ++i) {
    const double t = M_PI * i / (n - 1);
    x.push_back(t);
    f.push_back(1.0);
    h.push_back(std::sin(t));
  }
  const json cfg{{"grid_n", n},
                 {"samples", 257},
                 {"continuity_steps", 2},
                 {"profiles", json::array({json{{"name", "table-sphere"}, {"x", x}, {"f", f}, {"h", h}}})}};
  const auto path = box.write("profiles.json", cfg.dump());
  const auto o = box.dir / "o";
  const auto r = run(box, "embed-steiner --config \"" + path.string() + "\" --out \"" + o.string() + "\"");
  CHECK(r.code != 2);
  CHECK(r.code != 3);
  bool found = false;
  for (const auto& e : fs::directory_iterator(o))
    if (slurp(e.path()).find("table-sphere") != std::string::npos) found = true;
  CHECK(found);

  json bad = cfg;
  bad["profiles"][0]["f"].erase(0);
  const auto bad_path = box.write("bad.json", bad.dump());
  CHECK(run(box, "embed-steiner --config \"" + bad_path.string() + "\" --out \"" + o.string() + "\"").code == 2);
  CHECK(run(box, "embed-steiner --config \"" + box.write("preset.json", R"({"profiles": ["no-such-preset"]})").string() +
                     "\" --out \"" + o.string() + "\"")
            .code == 2);
}
