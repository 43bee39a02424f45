#include "fillin/scenarios.hpp"
#include "fillin/sphere_grid.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

void write_failure(const std::filesystem::path& out, const std::string& scenario, const std::string& module,
                   const std::string& message) {
  try {
    std::filesystem::create_directories(out);
    std::ofstream f(out / (scenario + "-summary.json"));
    f << nlohmann::json{{"scenario", scenario},
                        {"passed", false},
                        {"error", {{"kind", "numerical"}, {"module", module}, {"message", message}}}}
             .dump(2)
      << "\n";
  } catch (const std::exception&) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on fill-ins and quasi-local mass"};
  std::string scenario, config_path, out_dir = "out";
  std::optional<int> grid_n;
  std::optional<double> tol;
  bool list = false;
  app.add_option("scenario", scenario, "Scenario to run");
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--grid-n", grid_n, "Grid size override");
  app.add_option("--tol", tol, "Tolerance override");
  app.add_flag("--list", list, "List scenarios and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  if (list) {
    for (const auto& s : fillin::list_scenarios()) std::cout << s << "\n";
    return kPass;
  }
  if (scenario.empty()) {
    std::cerr << "error: no scenario given (see --list)\n";
    return kConfigError;
  }

  nlohmann::json config = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read config " << config_path << "\n";
      return kConfigError;
    }
    try {
      config = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: malformed config: " << e.what() << "\n";
      return kConfigError;
    }
  }
  if (config.is_object() && config.contains("output")) {
    if (!config["output"].is_string()) {
      std::cerr << "error: output must be a string\n";
      return kConfigError;
    }
    if (app.count("--out") == 0) out_dir = config["output"].get<std::string>();
  }

  try {
    const auto report = fillin::run_scenario(scenario, config, {grid_n, tol});
    fillin::write_report(report, out_dir);
    for (const auto& c : report.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << fillin::format_number(c.value) << "\n";
    std::cout << scenario << ": " << (report.passed() ? "pass" : "FAIL") << "\n";
    return report.passed() ? kPass : kCheckFailure;
  } catch (const fillin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fillin::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    write_failure(out_dir, scenario, scenario, e.what());
    return kNumericalFailure;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}
