#include "fillin/scenarios.hpp"

#include "fillin/collar_builder.hpp"
#include "fillin/convex_revolution.hpp"
#include "fillin/mass.hpp"
#include "fillin/quasi_spherical.hpp"
#include "fillin/ricci_paths.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace fillin {

using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Reads typed values from a config object and remembers the effective ones.
class Params {
 public:
  Params(const json& cfg, json& echo) : cfg_(cfg), echo_(echo) {}

  double real(const std::string& key, double def) {
    const double v = cfg_.contains(key) ? number(key, cfg_.at(key)) : def;
    echo_[key] = v;
    return v;
  }
  double positive(const std::string& key, double def) {
    const double v = real(key, def);
    if (!(v > 0)) throw ConfigError(key + ": must be positive");
    return v;
  }
  int integer(const std::string& key, int def, int lo, int hi) {
    int v = def;
    if (cfg_.contains(key)) {
      used_.insert(key);
      const json& j = cfg_.at(key);
      if (!j.is_number_integer()) throw ConfigError(key + ": expected an integer");
      const auto w = j.get<long long>();
      if (w < lo || w > hi) throw ConfigError(key + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      v = static_cast<int>(w);
    }
    echo_[key] = v;
    return v;
  }
  std::vector<double> reals(const std::string& key, std::vector<double> def) {
    if (cfg_.contains(key)) {
      used_.insert(key);
      const json& j = cfg_.at(key);
      if (!j.is_array() || j.empty()) throw ConfigError(key + ": expected a non-empty array of numbers");
      def.clear();
      for (const auto& e : j) def.push_back(number(key, e));
    }
    echo_[key] = def;
    return def;
  }
  const json* raw(const std::string& key) {
    if (!cfg_.contains(key)) return nullptr;
    used_.insert(key);
    echo_[key] = cfg_.at(key);
    return &cfg_.at(key);
  }
  void finish() const {
    for (const auto& [k, v] : cfg_.items())
      if (!used_.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }

 private:
  double number(const std::string& key, const json& j) {
    used_.insert(key);
    if (!j.is_number()) throw ConfigError(key + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(key + ": must be finite");
    return v;
  }

  const json& cfg_;
  json& echo_;
  std::set<std::string> used_{"scenario", "output"};
};

void expect(Report& r, std::string name, int criterion, double value, std::optional<double> lo, std::optional<double> hi) {
  bool pass = std::isfinite(value);
  if (lo) pass = pass && value >= *lo;
  if (hi) pass = pass && value <= *hi;
  r.checks.push_back({std::move(name), criterion, value, lo, hi, pass});
}
void expect_max(Report& r, std::string name, int criterion, double value, double hi) {
  expect(r, std::move(name), criterion, value, std::nullopt, hi);
}
void expect_min(Report& r, std::string name, int criterion, double value, double lo) {
  expect(r, std::move(name), criterion, value, lo, std::nullopt);
}

Table& table(Report& r, std::string name, std::vector<std::string> columns) {
  r.tables.push_back({std::move(name), std::move(columns), {}, {}});
  return r.tables.back();
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

PathPtr share(MetricPath p) { return std::make_shared<const MetricPath>(std::move(p)); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct NamedMetric {
  std::string name;
  WarpedMetric metric;
};

// Presets by corpus name, or inline tables {name, x, f, h} with x on the uniform grid.
std::vector<NamedMetric> metric_list(Params& p, int n) {
  std::vector<NamedProfile> corpus = convex_corpus();
  auto grid = build_grid(2, n);
  std::vector<NamedMetric> out;
  const json* spec = p.raw("profiles");
  if (!spec) {
    for (const auto& c : corpus) out.push_back({c.name, WarpedMetric::from_profile(grid, c.profile)});
    return out;
  }
  if (!spec->is_array() || spec->empty()) throw ConfigError("profiles: expected a non-empty array");
  for (const auto& e : *spec) {
    if (e.is_string()) {
      const auto name = e.get<std::string>();
      auto it = std::find_if(corpus.begin(), corpus.end(), [&](const NamedProfile& c) { return c.name == name; });
      if (it == corpus.end()) throw ConfigError("profiles: unknown preset '" + name + "'");
      out.push_back({name, WarpedMetric::from_profile(grid, it->profile)});
    } else if (e.is_object()) {
      for (const char* k : {"name", "x", "f", "h"})
        if (!e.contains(k)) throw ConfigError(std::string("profiles: inline table needs '") + k + "'");
      for (const auto& [k, v] : e.items())
        if (k != "name" && k != "x" && k != "f" && k != "h") throw ConfigError("profiles: unknown table key '" + k + "'");
      if (!e["name"].is_string()) throw ConfigError("profiles: table name must be a string");
      auto column = [&](const char* k) {
        const json& c = e[k];
        if (!c.is_array()) throw ConfigError(std::string("profiles: column ") + k + " must be an array");
        Field v(static_cast<int>(c.size()));
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (!c[i].is_number()) throw ConfigError(std::string("profiles: column ") + k + " must hold numbers");
          v[static_cast<int>(i)] = c[i].get<double>();
        }
        return v;
      };
      const Field x = column("x"), f = column("f"), h = column("h");
      if (x.size() != f.size() || x.size() != h.size() || x.size() < 16)
        throw ConfigError("profiles: columns x, f, h need equal lengths of at least 16");
      auto tg = build_grid(2, static_cast<int>(x.size()));
      if ((x - tg->nodes()).cwiseAbs().maxCoeff() > 1e-9)
        throw ConfigError("profiles: x must be uniform on [0, pi] including both ends");
      try {
        out.push_back({e["name"].get<std::string>(), WarpedMetric::from_table(tg, f, h)});
      } catch (const PreconditionError& err) {
        throw ConfigError(std::string("profiles: ") + err.what());
      }
    } else {
      throw ConfigError("profiles: entries are preset names or inline tables");
    }
  }
  return out;
}

void environment(Report& r, int grid_n, double dt) {
  r.environment = {{"version", kVersion}, {"grid_n", grid_n}, {"dt", dt},
#ifdef __VERSION__
                   {"compiler", __VERSION__}
#else
                   {"compiler", "unknown"}
#endif
  };
}

// ---------------------------------------------------------------------------

void qs_collar(Params& p, Report& r) {
  const int n = p.integer("grid_n", 33, 16, 4097);
  const double tol = p.positive("tol", 1e-8);
  const double a = p.positive("a", 1.0), b = p.positive("b", 2.0);
  const double f = p.real("f", 0.1);
  const double eps = p.positive("eps", 0.01);
  const auto sweep = p.reals("eps_sweep", {1e-1, 1e-2, 1e-3});
  const double dt_max = p.positive("dt_max", 1e-3);
  const int stations = p.integer("stations", 11, 2, 100000);
  p.finish();
  if (!(b > a)) throw ConfigError("b must exceed a");
  for (double e : sweep)
    if (!(e > 0)) throw ConfigError("eps_sweep: entries must be positive");
  environment(r, n, dt_max);

  auto grid = build_grid(2, n);
  SolverOptions o;
  o.stations = stations;
  o.dt_max = dt_max;
  const auto sol = solve_generic(share(MetricPath::round_scaling(grid, a, b)), TargetCurvature::constant(f),
                                 Field::Constant(n, eps), o);
  if (!sol.ok()) throw NumericalError("qs-collar: " + sol.message);

  // the lapse stays constant on round slices and obeys a scalar ODE
  namespace odeint = boost::numeric::odeint;
  auto ode = [&](double t1) {
    std::vector<double> y{eps};
    auto sys = [&](const std::vector<double>& x, std::vector<double>& dx, double t) {
      const double r2 = (1 - t) * a * a + t * b * b, k = 0.5 * (b * b - a * a) / r2;
      const double H = 2 * k, R = 2 / r2, Rbg = R - H * H - 2 * k * k + 8 * k * k;
      dx[0] = (0.5 * (f - R) * x[0] * x[0] * x[0] + 0.5 * (R - Rbg) * x[0]) / H;
    };
    if (t1 > 0)
      odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<std::vector<double>>>(1e-15, 1e-15),
                                 sys, y, 0.0, t1, 1e-4);
    return y[0];
  };
  Table& t = table(r, "ode", {"t", "u_mean", "u_spread", "u_oracle", "relative_error"});
  double worst = 0, spread = 0;
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    const Field& u = sol.u[k];
    const double mean = u.mean(), ref = ode(sol.t[k]);
    const double rel = std::abs(mean - ref) / ref;
    t.add({sol.t[k], mean, u.maxCoeff() - u.minCoeff(), ref, rel});
    worst = std::max(worst, rel);
    spread = std::max(spread, (u.maxCoeff() - u.minCoeff()) / mean);
  }
  expect_max(r, "ode_reduction_relative_error", 3, worst, tol);
  expect_max(r, "round_lapse_relative_spread", 0, spread, 1e-6);

  Table& bt = table(r, "bounds", {"eps", "M", "eps0", "min_u", "max_u", "lower", "upper"});
  const PathPtr lin = share(MetricPath::linear_warped(WarpedMetric::round(grid, a), WarpedMetric::round(grid, b)));
  for (double e : sweep) {
    const auto s = solve_generic(lin, TargetCurvature::constant(f), Field::Constant(n, e));
    if (!s.ok()) throw NumericalError("qs-collar: " + s.message);
    const double M = s.bounds.M, lower = 0.5 * std::exp(-M) * e, upper = std::exp(M) * e;
    bt.add({e, M, std::exp(-M / 2), s.bounds.min_u, s.bounds.max_u, lower, upper});
    const std::string tag = "eps=" + short_number(e);
    expect_max(r, "eps_admissible " + tag, 4, e, std::exp(-M / 2));
    expect_min(r, "lapse_lower_margin " + tag, 4, s.bounds.min_u / lower, 1.0);
    expect_max(r, "lapse_upper_ratio " + tag, 4, s.bounds.max_u / upper, 1.0);
  }
}

void ah_mass(Params& p, Report& r) {
  const int n = p.integer("grid_n", 33, 16, 1025);
  const double tol = p.positive("tol", 1e-4);
  const double lambda = p.positive("lambda", 1.0);
  const double r_max = p.positive("r_max", 8.0);
  const auto spacings = p.reals("spacings", {0.01, 0.005});
  const double limit_tol = p.positive("limit_tol", 0.01);
  const double increase_tol = p.positive("increase_tol", 1e-8);
  const double run_limit = p.positive("run_seconds", 60.0);
  p.finish();
  for (std::size_t i = 0; i < spacings.size(); ++i)
    if (!(spacings[i] > 0) || (i > 0 && !(spacings[i] < spacings[i - 1])))
      throw ConfigError("spacings: must be positive and decreasing");
  environment(r, n, spacings.back());

  auto grid = build_grid(2, n);
  const double c = 2 * std::sqrt(1 + lambda * lambda) / lambda;   // geodesic sphere of radius asinh λ
  Field cosine(n);
  for (int i = 0; i < n; ++i) cosine[i] = c * (1 + 0.1 * std::cos(grid->nodes()[i]));
  const std::vector<std::pair<std::string, Field>> cases{{"constant-0.9", Field::Constant(n, 0.9 * c)},
                                                         {"cos-0.1", cosine}};
  Table& ref = table(r, "refinement", {"case", "spacing", "identity_residual", "max_increase", "limit",
                                       "limit_from_v", "limit_relative_error", "resolvable"});
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& [name, H] = cases[ci];
    MassCurve last;
    for (double sp : spacings) {
      HyperbolicOptions o;
      o.station_spacing = sp;
      const auto t0 = std::chrono::steady_clock::now();
      const auto sol = solve_hyperbolic(grid, H, lambda, r_max, o);
      if (!sol.collar.ok()) throw NumericalError("ah-mass: " + sol.collar.message);
      last = ah_mass_curve(sol);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ref.add({static_cast<double>(ci), sp, last.max_identity_residual, last.max_increase, last.limit,
               last.limit_from_v, last.limit_relative_error, static_cast<double>(last.resolvable_count)},
              name);
      const std::string tag = name + " spacing=" + short_number(sp);
      expect_max(r, "mass_increase " + tag, 2, last.max_increase, increase_tol);
      expect_max(r, "limit_relative_error " + tag, 2, last.limit_relative_error, limit_tol);
      expect_max(r, "runtime_seconds " + tag, 2, secs, run_limit);
    }
    expect_max(r, "identity_residual_finest " + name, 2, last.max_identity_residual, tol);
    Table& t = table(r, name, {"r", "m", "dm_formula", "resolvable"});
    Table& fd = table(r, name + "-differences", {"r", "dm_formula", "dm_fd"});
    for (std::size_t k = 0; k < last.r.size(); ++k) {
      t.add({last.r[k], last.m[k], last.dm_formula[k], static_cast<double>(last.resolvable[k])});
      // five-point differences exist away from the ends
      if (std::isfinite(last.dm_fd[k])) fd.add({last.r[k], last.dm_formula[k], last.dm_fd[k]});
    }
  }
}

void schwarzschild_by(Params& p, Report& r) {
  const int N = p.integer("grid_n", 64, 16, 4097);
  const double tol = p.positive("tol", 1e-6);
  const int n = p.integer("n", 3, 3, 7);
  const double m = p.real("m", 1.0);
  const auto radii = p.reals("r_list", {10, 100, 1000});
  const double slope_tol = p.positive("slope_tol", 0.2);
  p.finish();
  environment(r, N, 0.0);
  LargeSphereSeries s;
  try {
    s = by_large_sphere_limit(n, m, radii);
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("r_list: ") + e.what());
  }
  auto grid = build_grid(n - 1, N);
  Table& t = table(r, "by", {"r", "rho", "m_by", "m_by_grid", "reference", "relative_error"});
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    const double rho = isotropic_radius(n, m, s.r[i]);
    const auto sphere = schwarzschild_sphere(n, m, rho);
    const double grid_value =
        brown_york(schwarzschild_sphere_data(grid, m, rho), lambda_plus_round(n, sphere.areal_radius)).m_by;
    const double ref = s.reference[i];
    const double scale = ref != 0 ? std::abs(ref) : 1.0;
    const double err = std::max(std::abs(s.m_by[i] - ref), std::abs(grid_value - ref)) / scale;
    t.add({s.r[i], rho, s.m_by[i], grid_value, ref, err});
    expect_max(r, "relative_error r=" + short_number(s.r[i]), 1, err, tol);
  }
  if (m != 0 && s.r.size() >= 2) {
    const double target = -(n - 2.0);
    expect(r, "log_log_slope", 1, s.slope, target - slope_tol, target + slope_tol);
  }
}

void cobordism(Params& p, Report& r) {
  std::vector<double> sizes = p.reals("grid_list", {64, 128, 256});
  const json* gn = p.raw("grid_n");
  if (gn) {
    if (!gn->is_number_integer() || gn->get<long long>() < 16 || gn->get<long long>() > 2048)
      throw ConfigError("grid_n: expected an integer in [16, 2048]");
    const double base = gn->get<double>();
    sizes = {base, 2 * base, 4 * base};
  }
  const double tol = p.positive("tol", 1e-9);
  const double a = p.positive("a", 1.0), b = p.positive("b", 2.0);
  const double delta = p.real("delta", 0.1);
  const double eps = p.positive("eps", 0.1);
  const double order_min = p.positive("order_min", 1.8);
  const auto sweep = p.reals("eps_sweep", {1e-1, 1e-2, 1e-3});
  const int sweep_n = p.integer("sweep_grid_n", 33, 16, 1025);
  p.finish();
  if (!(b > a)) throw ConfigError("b must exceed a");
  if (sizes.size() < 2) throw ConfigError("grid_list: need at least two sizes");
  for (double s : sizes)
    if (s != std::floor(s) || s < 16 || s > 8193) throw ConfigError("grid_list: sizes must be integers in [16, 8193]");
  environment(r, static_cast<int>(sizes.back()), 1.0 / (sizes.back() - 1));

  Table& conv = table(r, "convergence", {"N", "residual", "M", "min_h1"});
  std::vector<double> res;
  for (double s : sizes) {
    const int n = static_cast<int>(s);
    CobordismOptions o;
    o.stations = n;
    o.reconstruction_order = 2;
    const auto c = build_psc_cobordism(build_grid(2, n), RoundMetric{2, a}, RoundMetric{2, b}, delta, Field::Zero(n), eps, o);
    if (!c.collar.ok()) throw NumericalError("cobordism: " + c.collar.message);
    conv.add({s, c.residual, c.M, c.min_h1});
    res.push_back(c.residual);
  }
  Table& ord = table(r, "order", {"N_coarse", "N_fine", "order"});
  for (std::size_t i = 1; i < res.size(); ++i) {
    const double q = std::log(res[i - 1] / res[i]) / std::log(sizes[i] / sizes[i - 1]);
    ord.add({sizes[i - 1], sizes[i], q});
    expect_min(r, "residual_order N=" + short_number(sizes[i - 1]) + "->" + short_number(sizes[i]), 3, q, order_min);
  }

  Table& bl = table(r, "blowup", {"eps", "M", "min_h1", "min_h1_times_eps", "lower", "admissible"});
  auto g = build_grid(2, sweep_n);
  for (double e : sweep) {
    if (!(e > 0)) throw ConfigError("eps_sweep: entries must be positive");
    const auto c = build_psc_cobordism(g, RoundMetric{2, a}, RoundMetric{2, b}, delta, Field::Zero(sweep_n), e);
    if (!c.collar.ok()) throw NumericalError("cobordism: " + c.collar.message);
    const double lower = std::exp(-c.M) * c.collar.path->slice(1.0).H.minCoeff();
    const bool admissible = e <= std::exp(-c.M / 2);
    bl.add({e, c.M, c.min_h1, c.min_h1 * e, lower, admissible ? 1.0 : 0.0});
    const std::string tag = "eps=" + short_number(e);
    expect_min(r, "blowup_law " + tag, 4, c.min_h1 * e / lower, 1 - tol);
    expect_max(r, "eps_admissible " + tag, 4, e, std::exp(-c.M / 2));
  }
}

void spin(Params& p, Report& r) {
  const int N = p.integer("grid_n", 33, 16, 1025);
  const double tol = p.positive("tol", 1e-10);
  const auto dims = p.reals("n_list", {3, 4});
  const auto radii = p.reals("radii", {0.5, 1.0, 1.7});
  const auto masses = p.reals("masses", {0.1, 0.5, 1.0});
  const auto rhos = p.reals("rho_list", {2.0, 5.0, 10.0});
  const auto factors = p.reals("lambda_factors", {1.05, 2.0});
  const auto Ks = p.reals("K_list", {-0.1, -1.0, -10.0});
  p.finish();
  for (double d : dims)
    if (d != std::floor(d) || d < 3 || d > 7) throw ConfigError("n_list: entries must be integers in [3, 7]");
  for (double m : masses)
    if (m < 0) throw ConfigError("masses: the bound is checked for m >= 0");
  for (double f : factors)
    if (!(f > 1)) throw ConfigError("lambda_factors: entries must exceed 1");
  for (double K : Ks)
    if (!(K <= 0)) throw ConfigError("K_list: entries must be non-positive");
  environment(r, N, 0.0);

  const double spot = spin_bound_value(3, 2.0, -1.0), exact = 16 * kPi * std::sqrt(5.0 / 3.0);
  expect_max(r, "closed_form_spot n=3 lambda=2 K=-1", 8, std::abs(spot - exact), tol);
  const double grid_spot = spin_bound(build_grid(2, N), RoundMetric{2, 1.0}, 2.0, -1.0);
  expect_max(r, "grid_spot n=3 lambda=2 K=-1", 8, std::abs(grid_spot - exact), tol);

  Table& t = table(r, "corpus", {"n", "mass", "areal_radius", "lambda", "K", "total_mean_curvature", "bound", "ratio"});
  double worst = 0;
  for (double dn : dims) {
    const int n = static_cast<int>(dn);
    auto grid = build_grid(n - 1, N);
    auto run = [&](double mass, double areal, double total, const std::string& label) {
      for (double fac : factors)
        for (double K : Ks) {
          const double lam = fac * areal;
          const double bound = spin_bound(grid, RoundMetric{n - 1, areal}, lam, K);
          t.add({dn, mass, areal, lam, K, total, bound, total / bound}, label);
          worst = std::max(worst, total / bound);
        }
    };
    for (double rad : radii) run(0.0, rad, (n - 1) * sphere_volume(n - 1) * std::pow(rad, n - 2), "flat-ball");
    for (double m : masses)
      for (double rho : rhos) {
        // ρ^{n−2} = m/2 is the horizon; keep a factor of two away from it
        if (!(std::pow(rho, n - 2) > m)) throw ConfigError("rho_list: sphere too close to the horizon");
        const auto s = schwarzschild_sphere(n, m, rho);
        run(m, s.areal_radius, s.total_mean_curvature, "schwarzschild");
      }
  }
  expect_max(r, "max_total_over_bound", 8, worst, 1.0);
}

void embed_steiner(Params& p, Report& r) {
  const int n = p.integer("grid_n", 129, 17, 4097);
  const double tol = p.positive("tol", 1e-4);
  const int samples = p.integer("samples", 2049, 65, 100001);
  const double step = p.positive("steiner_step", 0.1);
  const double gb_tol = p.positive("gauss_bonnet_tol", 1e-6);
  const double cyl_l = p.positive("cylinder_l", 2.0), cyl_e1 = p.positive("cylinder_eps1", 0.1),
               cyl_e2 = p.positive("cylinder_eps2", 0.05);
  const double amp = p.positive("continuity_amplitude", 0.3);
  const int steps = p.integer("continuity_steps", 7, 2, 20);
  const double noise = p.positive("continuity_noise", 1e-3);
  const double final_gap = p.positive("continuity_final_gap", 0.05);
  auto metrics = metric_list(p, n);
  p.finish();
  if (!(cyl_l > 2 * cyl_e1)) throw ConfigError("cylinder_l must exceed 2 cylinder_eps1");
  environment(r, n, 0.0);
  auto grid = build_grid(2, n);

  const double unit = total_mean_curvature(embed(WarpedMetric::round(grid, 1.0), samples));
  expect_max(r, "unit_sphere_lambda_plus", 5, std::abs(unit - 8 * kPi), 1e-10);
  const double cyl = total_mean_curvature(
      embed(WarpedMetric::from_profile(grid, profiles::capped_cylinder_from_box(cyl_l, cyl_e1, cyl_e2)), samples));
  expect_max(r, "capped_cylinder_total_mean_curvature", 5,
             std::abs(cyl - (2 * kPi * (cyl_l - 2 * cyl_e1) + 8 * kPi * cyl_e2)), 1e-6);

  Table& c = table(r, "corpus", {"area", "total_mean_curvature", "total_gauss_curvature", "steiner_c0", "steiner_c1",
                                 "steiner_c2", "steiner_relative_error", "min_principal_curvature"});
  double steiner_worst = 0, gb_worst = 0;
  for (const auto& [name, m] : metrics) {
    RevolutionProfile prof;
    try {
      prof = embed(m, samples);
    } catch (const EmbeddingError& e) {
      throw ConfigError("profile '" + name + "' has no convex embedding: " + e.what());
    }
    const auto fit = steiner_fit(prof, step);
    const double tgc = total_gauss_curvature(prof);
    c.add({fit.area, fit.total_mean_curvature, tgc, fit.c0, fit.c1, fit.c2, fit.max_relative_error,
           min_principal_curvature(prof)},
          name);
    steiner_worst = std::max(steiner_worst, fit.max_relative_error);
    gb_worst = std::max(gb_worst, std::abs(tgc - 4 * kPi));
  }
  expect_max(r, "steiner_max_relative_error", 5, steiner_worst, tol);
  expect_max(r, "gauss_bonnet_max_error", 5, gb_worst, gb_tol);
  expect_min(r, "corpus_size", 0, static_cast<double>(metrics.size()), 1);

  Table& nt = table(r, "nested", {"nested", "area_inner", "area_outer", "tmc_inner", "tmc_outer"});
  int failures = 0;
  for (const auto& pair : nested_corpus()) {
    const auto rep = enclosure_check(embed(WarpedMetric::from_profile(grid, pair.inner), samples),
                                     embed(WarpedMetric::from_profile(grid, pair.outer), samples));
    nt.add({rep.nested ? 1.0 : 0.0, rep.area_inner, rep.area_outer, rep.tmc_inner, rep.tmc_outer}, pair.name);
    if (!(rep.nested && rep.area_monotone && rep.tmc_monotone)) ++failures;
  }
  expect_max(r, "enclosure_monotonicity_failures", 5, failures, 0);

  const auto std1 = WarpedMetric::round(grid, 1.0);
  Table& ct = table(r, "continuity", {"k", "amplitude", "dilation", "gap", "min_gauss_curvature"});
  double prev_dil = kInf, prev_gap = kInf, dil_rise = -kInf, gap_rise = -kInf, min_k = kInf, gap = 0;
  for (int k = 0; k < steps; ++k) {
    const double a = amp * std::pow(0.5, k);
    const auto m = WarpedMetric::from_profile(grid, profiles::conformal_cos2(a));
    const double dil = dilation(m, std1).value;
    gap = std::abs(total_mean_curvature(embed(m, samples)) - 8 * kPi);
    const double kmin = gauss_curvature(m).minCoeff();
    ct.add({static_cast<double>(k), a, dil, gap, kmin});
    if (k > 0) {
      dil_rise = std::max(dil_rise, dil - prev_dil);
      gap_rise = std::max(gap_rise, gap - prev_gap);
    }
    min_k = std::min(min_k, kmin);
    prev_dil = dil;
    prev_gap = gap;
  }
  expect_max(r, "dilation_strictly_decreasing", 6, dil_rise, 0);
  expect_max(r, "gap_monotone_within_noise", 6, gap_rise, noise);
  expect_max(r, "final_gap", 6, gap, final_gap);
  expect_min(r, "family_min_gauss_curvature", 6, min_k, 0);
}

void prop51(Params& p, Report& r) {
  const int n = p.integer("grid_n", 129, 17, 4097);
  const int fm = p.integer("fm_n", 512, 32, 4096);
  const int sources = p.integer("sources", 17, 1, 1025);
  const double tol = p.positive("tol", 1.0);   // margins must exceed tol × error estimate
  auto metrics = metric_list(p, n);
  p.finish();
  environment(r, n, kPi / (fm - 1));

  DiameterOptions o;
  o.nx = o.nphi = fm;
  o.sources = sources;
  Table& t = table(r, "prop51", {"two_diam", "lambda_plus", "twelve_pi_diam", "diameter_error_estimate", "pass"});
  int fails = 0, margin_fails = 0;
  for (const auto& [name, m] : metrics) {
    Prop51Check c;
    try {
      c = prop51_check(m, o);
    } catch (const EmbeddingError& e) {
      throw ConfigError("profile '" + name + "' has no convex embedding: " + e.what());
    }
    t.add({c.two_diam, c.lambda_plus, c.twelve_pi_diam, c.diameter.error_estimate, c.pass ? 1.0 : 0.0}, name);
    if (!c.pass) ++fails;
    const double err = tol * c.diameter.error_estimate;
    if (!(c.lambda_plus - c.two_diam > 2 * err && c.twelve_pi_diam - c.lambda_plus > 12 * kPi * err)) ++margin_fails;
  }
  expect_max(r, "strict_ordering_failures", 5, fails, 0);
  expect_max(r, "ordering_margin_below_error_estimate", 5, margin_fails, 0);
}

SurfaceMetric cos_surface(GridPtr g, double a) {
  return SurfaceMetric::conformal(std::move(g), [a](double x) { return a * std::cos(x); });
}

SurfaceMetric mobius_surface(GridPtr g, double t) {
  return SurfaceMetric::conformal(std::move(g), [t](double x) { return -std::log(std::cosh(t) - std::sinh(t) * std::cos(x)); });
}

void stability(Params& p, Report& r) {
  const int n = p.integer("grid_n", 65, 17, 1025);
  const int dn = p.integer("decay_grid_n", 129, 33, 1025);
  const double tol = p.positive("tol", 1e-8);
  const double dt = p.positive("dt", 1e-4);
  const double T = p.positive("T", 0.4);
  const auto radii = p.reals("radii", {1.0, 1.5});
  const double bound_tol = p.positive("bound_tol", 1e-6);
  const double equality_tol = p.positive("equality_tol", 1e-10);
  const double eps = p.positive("decay_eps", 0.02);
  const int modes = p.integer("decay_modes", 5, 1, 6);
  p.finish();
  for (double c : radii)
    if (!(c > 0) || !(T < 0.5 * c * c * (1 - 1e-9))) throw ConfigError("radii: T must precede extinction c^2/2");
  environment(r, n, dt);
  auto grid = build_grid(2, n);

  FlowOptions o;
  o.dt = dt;
  o.stations = 9;
  Table& rt = table(r, "round", {"radius", "t", "max_error"});
  double worst = 0;
  for (double c : radii) {
    const auto path = ricci_flow(SurfaceMetric::round(grid, c), T, o);
    for (std::size_t k = 0; k < path.t.size(); ++k) {
      const double ex = 0.5 * std::log(c * c - 2 * path.t[k]);
      const double e = std::max((path.metrics[k].u.array() - ex).abs().maxCoeff(), (path.metrics[k].v.array() - ex).abs().maxCoeff());
      rt.add({c, path.t[k], e});
      worst = std::max(worst, e);
    }
  }
  expect_max(r, "round_flow_max_error", 7, worst, tol);

  SurfaceMetric nc = cos_surface(grid, 0.2);
  for (int i = 0; i < n; ++i) nc.u[i] += 0.15 * std::pow(std::sin(grid->nodes()[i]), 2);
  const std::vector<std::pair<std::string, SurfaceMetric>> corpus{
      {"cos-0.45", cos_surface(grid, 0.45)}, {"non-conformal", nc}, {"mobius-0.8", mobius_surface(grid, 0.8)}};
  FlowOptions lo;
  lo.stations = 17;
  Table& lb = table(r, "lower_bound", {"kappa", "max_violation", "rdt_max_violation"});
  Table& eq = table(r, "equality", {"t", "c0_flow_vs_rdt", "c0_rdt_vs_background"});
  double viol = -kInf, eqw = 0;
  for (const auto& [name, g] : corpus) {
    const auto a = ricci_flow(g, 0.15, lo);
    const auto b = ricci_deturck_flow(g, SurfaceMetric::round(grid), 0.15, BackgroundKind::RicciFlow, lo);
    lb.add({a.kappa, a.max_bound_violation, b.max_bound_violation}, name);
    viol = std::max({viol, a.max_bound_violation, b.max_bound_violation});
    const auto c = ricci_deturck_flow(g, g, 0.15, BackgroundKind::RicciFlow, lo);
    for (std::size_t k = 0; k < a.t.size(); ++k) {
      const double d1 = c0_distance(a.metrics[k], c.metrics[k], g), d2 = c0_distance(c.metrics[k], c.background[k], g);
      eq.add({a.t[k], d1, d2}, name);
      eqw = std::max({eqw, d1, d2});
    }
  }
  expect_max(r, "lower_bound_violation", 7, viol, bound_tol);
  expect_max(r, "station_equality", 7, eqw, equality_tol);

  auto dgrid = build_grid(2, dn);
  FlowOptions fo;
  for (int k = 12; k >= 3; --k) fo.station_times.push_back(std::ldexp(1.0, -k));
  auto rough = [&](double e) {
    return SurfaceMetric::conformal(dgrid, [e, modes](double x) {
      double s = 0;
      for (int j = 1; j <= modes; ++j) s += std::cos(std::ldexp(1.0, j) * x);
      return e / modes * s;
    });
  };
  std::vector<std::vector<double>> c1(2);
  for (int e = 0; e < 2; ++e) {
    const auto path = ricci_deturck_flow(rough(eps / (1 << e)), SurfaceMetric::round(dgrid), fo.station_times.back(),
                                         BackgroundKind::RicciFlow, fo);
    for (std::size_t k = 1; k < path.t.size(); ++k) c1[e].push_back(c1_distance(path.metrics[k], path.background[k]));
  }
  Table& dt_ = table(r, "decay", {"t", "c1_eps", "c1_half_eps", "amplitude_exponent"});
  double amp_dev = 0;
  std::vector<double> lt, lc;
  for (std::size_t k = 0; k < c1[0].size(); ++k) {
    const double ae = std::log2(c1[0][k] / c1[1][k]);
    dt_.add({fo.station_times[k], c1[0][k], c1[1][k], ae});
    amp_dev = std::max(amp_dev, std::abs(ae - 1));
    if (k + 1 < c1[0].size()) {
      lt.push_back(std::log(fo.station_times[k]));
      lc.push_back(std::log(c1[0][k]));
    }
  }
  expect_max(r, "amplitude_exponent_deviation", 0, amp_dev, 0.15);
  expect(r, "gradient_time_exponent", 0, fit_slope(lt, lc), -0.65, -0.35);
}

void ricci_path(Params& p, Report& r) {
  const int n = p.integer("grid_n", 65, 17, 1025);
  const double T = p.positive("T", 0.05);
  const int per_leg = p.integer("stations_per_leg", 17, 3, 1025);
  const double amp = p.real("amplitude", 0.3);
  const auto near = p.reals("amplitudes", {0.1, 0.2, 0.3, 0.4, 0.45});
  const auto far = p.reals("mobius_strengths", {0.25, 0.5, 0.75, 1.0, 1.25});
  const double exp_min = p.real("exponent_min", -1.1);
  const double tol = p.positive("tol", 1e-12);   // floor for min K along the path
  p.finish();
  environment(r, n, 0.0);
  auto grid = build_grid(2, n);
  const auto round = SurfaceMetric::round(grid);
  ConnectingPathOptions o;
  o.T = T;
  o.stations_per_leg = per_leg;

  auto psc_or_config = [&](const SurfaceMetric& g, const std::string& what) {
    if (!(g.gauss_curvature().minCoeff() > 0)) throw ConfigError(what + " is not PSC");
  };
  const auto gamma = cos_surface(grid, amp);
  psc_or_config(gamma, "amplitude " + short_number(amp));
  const auto path = psc_connecting_path(gamma, round, o);
  Table& pt = table(r, "path", {"t", "leg", "min_gauss_curvature", "derivative_norm"});
  for (std::size_t k = 0; k < path.t.size(); ++k)
    pt.add({path.t[k], static_cast<double>(path.leg[k]), path.min_curvature[k], path.derivative_norm[k]});
  expect_min(r, "path_min_gauss_curvature", 7, *std::min_element(path.min_curvature.begin(), path.min_curvature.end()), tol);
  expect_min(r, "derivative_exponent", 7, std::isnan(path.derivative_exponent) ? 0.0 : path.derivative_exponent, exp_min);

  Table& st = table(r, "sweep", {"family", "parameter", "c0_distance", "ok", "min_gauss_curvature", "exponent",
                                 "failure_s_or_minus1"});
  int near_fail = 0;
  for (double a : near) {
    const auto g = cos_surface(grid, a);
    psc_or_config(g, "amplitude " + short_number(a));
    const auto q = psc_connecting_path(g, round, o);
    const double mk = *std::min_element(q.min_curvature.begin(), q.min_curvature.end());
    st.add({0, a, c0_distance(g, round, round), q.ok ? 1.0 : 0.0, mk, q.derivative_exponent, q.ok ? -1.0 : q.failure_s}, "cos");
    if (!q.ok || !(mk > 0) || q.derivative_exponent < exp_min) ++near_fail;
  }
  expect_max(r, "near_pairs_failing", 7, near_fail, 0);

  // opposite conformal dilations of the round sphere: PSC endpoints at growing distance
  std::vector<std::pair<double, bool>> seen;
  double threshold = 0;
  int reported = 0;
  for (double t : far) {
    const auto a = mobius_surface(grid, t), b = mobius_surface(grid, -t);
    const auto q = psc_connecting_path(a, b, o);
    const double d = c0_distance(a, b, b);
    const double mk = *std::min_element(q.min_curvature.begin(), q.min_curvature.end());
    st.add({1, t, d, q.ok ? 1.0 : 0.0, mk, std::isnan(q.derivative_exponent) ? 0.0 : q.derivative_exponent,
            q.ok ? -1.0 : q.failure_s},
           "mobius");
    seen.push_back({d, q.ok});
    if (q.ok) threshold = std::max(threshold, d);
    if (!q.ok && q.failure_s > 0 && q.failure_s < 1 && std::isfinite(q.failure_distance)) ++reported;
  }
  std::sort(seen.begin(), seen.end());
  int out_of_order = 0;
  for (std::size_t i = 1; i < seen.size(); ++i)
    if (seen[i].second && !seen[i - 1].second) ++out_of_order;
  r.config["empirical_threshold"] = threshold;
  expect_max(r, "threshold_not_monotone", 0, out_of_order, 0);
  expect_min(r, "far_failures_reported", 0, reported, 1);
}

void monotone_sandwich(Params& p, Report& r) {
  const int n = p.integer("grid_n", 65, 17, 1025);
  const double tol = p.positive("tol", 1e-10);
  const double eps = p.positive("eps_tilde", 0.05);
  const int N = p.integer("n_exp", 5, 1, 20);
  const double s0_start = p.positive("s0_start", 0.5);
  const int stations = p.integer("stations", 33, 3, 4097);
  const double a1 = p.real("monotone_a1", 0.1), a2 = p.real("monotone_a2", 0.05);
  const double sa = p.real("sandwich_amplitude", 0.01);
  const double slack = p.positive("sandwich_slack", 1e-3);
  p.finish();
  environment(r, n, 1e-3);
  auto grid = build_grid(2, n);
  MonotonePathOptions o;
  o.stations = stations;

  auto two_mode = [&](double b1, double b2) {
    return SurfaceMetric::conformal(grid, [b1, b2](double x) { return b1 * std::cos(x) + b2 * std::cos(2 * x); });
  };
  const auto search = find_monotone_s0(two_mode(a1, a2), eps, s0_start, N, o);
  Table& mt = table(r, "monotone", {"s", "min_eigenvalue", "min_gauss_curvature"});
  for (std::size_t k = 0; k < search.path.t.size(); ++k)
    mt.add({search.path.t[k], search.path.derivative_norm[k], search.path.min_curvature[k]});
  r.config["s0_found"] = search.s0;
  expect_min(r, "monotone_min_eigenvalue",
             7, *std::min_element(search.path.derivative_norm.begin(), search.path.derivative_norm.end()), -tol);

  const auto sw = sandwich_check(two_mode(sa, sa), eps, N, o);
  Table& st = table(r, "sandwich", {"s0", "lambda_gamma", "lambda_step1", "lambda_flowed", "lambda_step2", "lambda_std",
                                    "step1_min_eigenvalue", "step2_min_eigenvalue"});
  st.add({sw.s0, sw.lambda_gamma, sw.lambda_step1, sw.lambda_flowed, sw.lambda_step2, sw.lambda_std,
          sw.step1_min_eigenvalue, sw.step2_min_eigenvalue});
  expect_max(r, "sandwich_ratio", 7, sw.lambda_gamma / ((1 + eps) * sw.lambda_std), 1 + slack);
  expect_max(r, "lambda_std_vs_round_oracle", 7, std::abs(sw.lambda_std - 8 * kPi), 1e-9);
  expect_min(r, "sandwich_step1_min_eigenvalue", 7, sw.step1_min_eigenvalue, -tol);
  expect_min(r, "sandwich_step2_min_eigenvalue", 0, sw.step2_min_eigenvalue, 0);
  expect_min(r, "sandwich_chain", 0, sw.chain_holds ? 1.0 : 0.0, 1);
}

struct Entry {
  const char* name;
  std::function<void(Params&, Report&)> run;
  int criterion;          // criterion of the runtime check, 0 for none
  double runtime_limit;   // seconds
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"qs-collar", qs_collar, 3, 60},
      {"ah-mass", ah_mass, 0, kInf},
      {"schwarzschild-by", schwarzschild_by, 1, 10},
      {"cobordism", cobordism, 3, 60},
      {"spin-bound", spin, 0, kInf},
      {"embed-steiner", embed_steiner, 5, 120},
      {"prop51-corpus", prop51, 5, 120},
      {"stability-2d", stability, 0, kInf},
      {"ricci-path", ricci_path, 0, kInf},
      {"monotone-path-sandwich", monotone_sandwich, 0, kInf},
  };
  return entries;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

void Table::add(std::vector<double> row, std::string label) {
  if (row.size() != columns.size()) throw NumericalError("table " + name + ": row width mismatch");
  for (double v : row)
    if (!std::isfinite(v)) throw NumericalError("table " + name + ": non-finite entry");
  rows.push_back(std::move(row));
  if (!label.empty() || !labels.empty()) {
    labels.resize(rows.size() - 1);
    labels.push_back(std::move(label));
  }
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json Report::summary() const {
  json checks_json = json::array();
  for (const auto& c : checks) {
    json j{{"name", c.name}, {"criterion", c.criterion}, {"value", c.value}, {"pass", c.pass}};
    if (c.min) j["min"] = *c.min;
    if (c.max) j["max"] = *c.max;
    checks_json.push_back(std::move(j));
  }
  json tables_json = json::array();
  for (const auto& t : tables)
    tables_json.push_back({{"name", t.name}, {"file", scenario + "-" + t.name + ".csv"}, {"rows", t.rows.size()}});
  return {{"scenario", scenario}, {"config", config},        {"environment", environment},
          {"tables", tables_json}, {"checks", checks_json}, {"passed", passed()},
          {"runtime_seconds", runtime_seconds}};
}

std::vector<std::string> list_scenarios() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.push_back(e.name);
  return names;
}

Report run_scenario(const std::string& name, const json& config, const RunOverrides& overrides) {
  const auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return name == e.name; });
  if (it == reg.end()) throw ConfigError("unknown scenario '" + name + "'");
  if (!config.is_object()) throw ConfigError("config must be an object");
  if (config.contains("scenario") && config["scenario"] != name)
    throw ConfigError("config is for scenario " + config["scenario"].dump() + ", not '" + name + "'");
  json cfg = config;
  if (overrides.grid_n) cfg["grid_n"] = *overrides.grid_n;
  if (overrides.tol) cfg["tol"] = *overrides.tol;

  Report r;
  r.scenario = name;
  r.config = json::object();
  Params p(cfg, r.config);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    it->run(p, r);
  } catch (const PreconditionError& e) {
    throw ConfigError(name + ": " + e.what());
  }
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (std::isfinite(it->runtime_limit)) expect_max(r, "runtime_seconds", it->criterion, r.runtime_seconds, it->runtime_limit);
  return r;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_report(const Report& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& t : report.tables) {
    std::ofstream f(out_dir / (report.scenario + "-" + t.name + ".csv"));
    const bool labelled = !t.labels.empty();
    if (labelled) f << "label,";
    for (std::size_t j = 0; j < t.columns.size(); ++j) f << (j ? "," : "") << t.columns[j];
    f << "\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (labelled) f << csv_field(t.labels[i]) << ",";
      for (std::size_t j = 0; j < t.rows[i].size(); ++j) f << (j ? "," : "") << format_number(t.rows[i][j]);
      f << "\n";
    }
    if (!f) throw std::runtime_error("cannot write " + (out_dir / (report.scenario + "-" + t.name + ".csv")).string());
  }
  std::ofstream s(out_dir / (report.scenario + "-summary.json"));
  s << report.summary().dump(2) << "\n";
  if (!s) throw std::runtime_error("cannot write summary for " + report.scenario);
}

}  // namespace fillin
