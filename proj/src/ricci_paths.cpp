#include "fillin/ricci_paths.hpp"

#include "fillin/convex_revolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fillin {

namespace {

constexpr double kPi = std::numbers::pi;

void require_surface(const SurfaceMetric& g, const char* what) {
  if (!g.grid || g.grid->dim() != 2) throw PreconditionError(std::string(what) + " needs a grid on S^2");
  g.grid->check_field(g.u, what);
  g.grid->check_field(g.v, what);
}

void require_same_grid(const SurfaceMetric& a, const SurfaceMetric& b) {
  if (a.grid->size() != b.grid->size()) throw PreconditionError("metrics live on different grids");
}

Field curvature(const SphereGrid& grid, const Field& u, const Field& v) {
  const int n = grid.size();
  const Field u1 = grid.d1_even() * u, u2 = grid.d2_even() * u;
  const Field v1 = grid.d1_even() * v, v2 = grid.d2_even() * v;
  Field K(n);
  for (int i = 1; i < n - 1; ++i) {
    const double c = grid.cot()[i];
    K[i] = std::exp(-2 * u[i]) * (1 - v2[i] - v1[i] * (v1[i] - u1[i]) - (2 * v1[i] - u1[i]) * c);
  }
  // v′cotθ → v″ and u′cotθ → u″ at both poles
  for (int i : {0, n - 1}) K[i] = std::exp(-2 * u[i]) * (1 - 3 * v2[i] + u2[i]);
  return K;
}

Field deturck(const SphereGrid& grid, const Field& u, const Field& v, const Field& ub, const Field& vb) {
  const int n = grid.size();
  const Field u1 = grid.d1_even() * u, v1 = grid.d1_even() * v;
  const Field ub1 = grid.d1_even() * ub, vb1 = grid.d1_even() * vb;
  Field X = Field::Zero(n);
  for (int i = 1; i < n - 1; ++i) {
    const double e = std::exp(-2 * u[i]);
    const double eb = std::exp(2 * (vb[i] - v[i]) - 2 * ub[i]);
    X[i] = e * (ub1[i] - u1[i] + v1[i]) - eb * vb1[i] + grid.cot()[i] * (e - eb);
  }
  return X;
}

enum class Mode { Ricci, DeTurckFixed, DeTurckRicci };

struct State {
  Field u, v, ub, vb;
};

struct Rates {
  Field du, dv, dub, dvb;
};

Rates rates(const SphereGrid& grid, const State& s, Mode mode) {
  Rates r;
  const Field K = curvature(grid, s.u, s.v);
  r.du = -K;
  r.dv = -K;
  if (mode != Mode::Ricci) {
    const int n = grid.size();
    const Field X = deturck(grid, s.u, s.v, s.ub, s.vb);
    const Field Xp = grid.d1_odd() * X;
    const Field u1 = grid.d1_even() * s.u, v1 = grid.d1_even() * s.v;
    for (int i = 0; i < n; ++i) {
      const double xcot = (i == 0 || i == n - 1) ? Xp[i] : X[i] * grid.cot()[i];
      r.du[i] -= X[i] * u1[i] + Xp[i];
      r.dv[i] -= X[i] * v1[i] + xcot;
    }
  }
  if (mode == Mode::DeTurckRicci) {
    const Field Kb = curvature(grid, s.ub, s.vb);
    r.dub = -Kb;
    r.dvb = -Kb;
  } else {
    r.dub = Field::Zero(s.ub.size());
    r.dvb = Field::Zero(s.vb.size());
  }
  return r;
}

State axpy(const State& s, double h, const Rates& r) {
  return {s.u + h * r.du, s.v + h * r.dv, s.ub + h * r.dub, s.vb + h * r.dvb};
}

double spectral_radius(const SphereGrid& grid) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(grid.laplacian(), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// pointwise norm of a diagonal tensor diag(P, Q·sin²θ) measured by e^{2u}dθ² + e^{2v}sin²θdφ²
double diag_norm(double P, double Q, double u, double v) {
  return std::max(std::abs(P) * std::exp(-2 * u), std::abs(Q) * std::exp(-2 * v));
}

// ‖∂_tγ‖ for ∂u, ∂v measured by ref
double rate_norm(const SurfaceMetric& g, const Field& du, const Field& dv, const SurfaceMetric& ref) {
  double m = 0;
  for (int i = 0; i < g.u.size(); ++i)
    m = std::max(m, diag_norm(2 * du[i] * std::exp(2 * g.u[i]), 2 * dv[i] * std::exp(2 * g.v[i]), ref.u[i], ref.v[i]));
  return m;
}

std::vector<double> station_list(double T, const FlowOptions& o) {
  std::vector<double> ts = o.station_times;
  if (ts.empty()) {
    const int m = std::max(o.stations, 2);
    for (int k = 0; k < m; ++k) ts.push_back(T * k / (m - 1));
    ts.back() = T;
  }
  if (ts.front() != 0.0) ts.insert(ts.begin(), 0.0);
  for (std::size_t k = 1; k < ts.size(); ++k)
    if (!(ts[k] > ts[k - 1])) throw PreconditionError("station times must increase from 0");
  return ts;
}

void check_extinction(const SurfaceMetric& g, double T, const char* what) {
  const double ext = g.area() / (8 * kPi);
  if (!(T < ext * (1 - 1e-10))) {
    std::ostringstream os;
    os << what << ": T = " << T << " is not before the extinction time " << ext;
    throw PreconditionError(os.str());
  }
}

FlowPath integrate(const SurfaceMetric& g0, const SurfaceMetric& gb0, Mode mode, double T, const FlowOptions& o) {
  if (!(T > 0)) throw PreconditionError("flow needs T > 0");
  if (!(o.dt > 0)) throw PreconditionError("flow needs dt > 0");
  const SphereGrid& grid = *g0.grid;
  check_extinction(g0, T, "flow");
  if (mode == Mode::DeTurckRicci) check_extinction(gb0, T, "background flow");
  const std::vector<double> ts = station_list(T, o);
  if (ts.back() > T * (1 + 1e-14)) throw PreconditionError("station beyond T");
  const double rho = spectral_radius(grid);

  FlowPath path;
  State s{g0.u, g0.v, gb0.u, gb0.v};
  const double kappa = 2 * curvature(grid, g0.u, g0.v).minCoeff();
  path.kappa = kappa;
  path.max_bound_violation = -std::numeric_limits<double>::infinity();
  auto record = [&](double t) {
    const Rates r = rates(grid, s, mode);
    SurfaceMetric m{g0.grid, s.u, s.v};
    const double minK = curvature(grid, s.u, s.v).minCoeff();
    path.t.push_back(t);
    path.derivative_norm.push_back(rate_norm(m, r.du, r.dv, g0));
    path.min_curvature.push_back(minK);
    path.leg.push_back(0);
    if (mode != Mode::Ricci) path.background.push_back({g0.grid, s.ub, s.vb});
    path.metrics.push_back(std::move(m));
    if (kappa * t < 1) path.max_bound_violation = std::max(path.max_bound_violation, kappa / (1 - kappa * t) - 2 * minK);
  };
  record(0.0);
  double t = 0;
  for (std::size_t k = 1; k < ts.size(); ++k) {
    while (t < ts[k]) {
      // the principal part is e^{−2u}Δ up to the cot-weighted first-order terms
      const double scale = std::exp(-2 * std::min({s.u.minCoeff(), s.v.minCoeff(), s.ub.minCoeff(), s.vb.minCoeff()}));
      const double lim = o.dt_safety * 2.6 / (2.0 * rho * scale);
      if (!(lim > 1e-12 * T)) {
        std::ostringstream os;
        os << "time step collapsed at t = " << t << "; the metric is close to extinction";
        throw NumericalError(os.str());
      }
      double h = std::min(o.dt, lim);
      if (t + h >= ts[k] - 1e-14 * std::max(1.0, ts[k])) h = ts[k] - t;
      const Rates k1 = rates(grid, s, mode);
      const Rates k2 = rates(grid, axpy(s, 0.5 * h, k1), mode);
      const Rates k3 = rates(grid, axpy(s, 0.5 * h, k2), mode);
      const Rates k4 = rates(grid, axpy(s, h, k3), mode);
      s.u += h / 6 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du);
      s.v += h / 6 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv);
      s.ub += h / 6 * (k1.dub + 2 * k2.dub + 2 * k3.dub + k4.dub);
      s.vb += h / 6 * (k1.dvb + 2 * k2.dvb + 2 * k3.dvb + k4.dvb);
      t = (h == ts[k] - t) ? ts[k] : t + h;
      ++path.steps;
      if (!s.u.allFinite() || !s.v.allFinite() || !s.ub.allFinite() || !s.vb.allFinite()) {
        std::ostringstream os;
        os << "flow became non-finite at t = " << t;
        throw NumericalError(os.str());
      }
    }
    record(ts[k]);
  }
  return path;
}

double min_eigen_ratio(const SurfaceMetric& a, const SurfaceMetric& b, double factor) {
  // smallest eigenvalue of factor·b − a relative to a
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.u.size(); ++i)
    m = std::min({m, factor * std::exp(2 * (b.u[i] - a.u[i])) - 1, factor * std::exp(2 * (b.v[i] - a.v[i])) - 1});
  return m;
}

double lambda_plus_2d(const SurfaceMetric& g) { return total_mean_curvature(embed(g.to_warped())); }

}  // namespace

SurfaceMetric SurfaceMetric::conformal(GridPtr grid, const Field& phi) {
  grid->check_field(phi, "conformal factor");
  return {grid, phi, phi};
}

SurfaceMetric SurfaceMetric::conformal(GridPtr grid, const std::function<double(double)>& phi) {
  Field p(grid->size());
  for (int i = 0; i < grid->size(); ++i) p[i] = phi(grid->nodes()[i]);
  return conformal(std::move(grid), p);
}

SurfaceMetric SurfaceMetric::round(GridPtr grid, double lambda) {
  if (!(lambda > 0)) throw PreconditionError("round metric needs lambda > 0");
  const Field c = Field::Constant(grid->size(), std::log(lambda));
  return {grid, c, c};
}

SurfaceMetric SurfaceMetric::from_warped(const WarpedMetric& m) {
  if (m.dim() != 2) throw PreconditionError("surface metrics live on S^2");
  const SphereGrid& grid = m.grid();
  const int n = grid.size();
  SurfaceMetric g{m.grid_ptr(), m.f().array().log().matrix(), Field(n)};
  for (int i = 1; i < n - 1; ++i) g.v[i] = std::log(m.h()[i] / grid.sin()[i]);
  g.v[0] = std::log(std::abs(m.hx()[0]));
  g.v[n - 1] = std::log(std::abs(m.hx()[n - 1]));
  return g;
}

WarpedMetric SurfaceMetric::to_warped() const {
  const int n = grid->size();
  Field f = u.array().exp().matrix();
  Field h(n);
  for (int i = 0; i < n; ++i) h[i] = std::exp(v[i]) * grid->sin()[i];
  h[0] = 0;
  h[n - 1] = 0;
  return WarpedMetric::from_table(grid, f, h);
}

bool SurfaceMetric::is_conformal(double tol) const { return (u - v).cwiseAbs().maxCoeff() <= tol; }

Field SurfaceMetric::gauss_curvature() const {
  require_surface(*this, "gauss_curvature");
  return curvature(*grid, u, v);
}

double SurfaceMetric::area() const {
  return grid->integrate((u + v).array().exp().matrix());
}

SurfaceMetric SurfaceMetric::scaled(double c) const {
  if (!(c > 0)) throw PreconditionError("scale factor must be positive");
  const double s = 0.5 * std::log(c);
  return {grid, (u.array() + s).matrix(), (v.array() + s).matrix()};
}

bool FlowPath::psc() const {
  return std::all_of(min_curvature.begin(), min_curvature.end(), [](double k) { return k > 0; });
}

Field deturck_field(const SurfaceMetric& g, const SurfaceMetric& gbar) {
  require_surface(g, "deturck_field");
  require_surface(gbar, "deturck_field");
  require_same_grid(g, gbar);
  return deturck(*g.grid, g.u, g.v, gbar.u, gbar.v);
}

double c0_distance(const SurfaceMetric& g, const SurfaceMetric& h, const SurfaceMetric& ref) {
  require_same_grid(g, h);
  require_same_grid(g, ref);
  double m = 0;
  for (int i = 0; i < g.u.size(); ++i)
    m = std::max(m, diag_norm(std::exp(2 * g.u[i]) - std::exp(2 * h.u[i]), std::exp(2 * g.v[i]) - std::exp(2 * h.v[i]),
                              ref.u[i], ref.v[i]));
  return m;
}

double c1_distance(const SurfaceMetric& g, const SurfaceMetric& gbar) {
  require_same_grid(g, gbar);
  const SphereGrid& grid = *g.grid;
  const int n = grid.size();
  // relative differences p = (A − Ā)/Ā and q = (B − B̄)/B̄ are even functions
  Field p(n), q(n);
  for (int i = 0; i < n; ++i) {
    p[i] = std::expm1(2 * (g.u[i] - gbar.u[i]));
    q[i] = std::expm1(2 * (g.v[i] - gbar.v[i]));
  }
  const Field p1 = grid.d1_even() * p, q1 = grid.d1_even() * q, vb1 = grid.d1_even() * gbar.v;
  double m = 0;
  for (int i = 0; i < n; ++i) {
    double mixed = 0;
    if (i > 0 && i < n - 1) mixed = 2 * std::pow((vb1[i] + grid.cot()[i]) * (p[i] - q[i]), 2);
    const double sq = (p1[i] * p1[i] + q1[i] * q1[i] + mixed) * std::exp(-2 * gbar.u[i]);
    m = std::max(m, std::sqrt(sq));
  }
  return m;
}

FlowPath ricci_flow(const SurfaceMetric& g0, double T, const FlowOptions& opts) {
  require_surface(g0, "ricci_flow");
  return integrate(g0, g0, Mode::Ricci, T, opts);
}

FlowPath ricci_deturck_flow(const SurfaceMetric& g0, const SurfaceMetric& gbar0, double T, BackgroundKind kind,
                            const FlowOptions& opts) {
  require_surface(g0, "ricci_deturck_flow");
  require_surface(gbar0, "ricci_deturck_flow background");
  require_same_grid(g0, gbar0);
  return integrate(g0, gbar0, kind == BackgroundKind::Fixed ? Mode::DeTurckFixed : Mode::DeTurckRicci, T, opts);
}

FlowPath psc_connecting_path(const SurfaceMetric& gamma, const SurfaceMetric& gamma0, const ConnectingPathOptions& o) {
  require_surface(gamma, "psc_connecting_path");
  require_surface(gamma0, "psc_connecting_path");
  require_same_grid(gamma, gamma0);
  if (!(gamma.gauss_curvature().minCoeff() > 0)) throw PreconditionError("gamma is not PSC");
  if (!(gamma0.gauss_curvature().minCoeff() > 0)) throw PreconditionError("gamma0 is not PSC");
  const int m = std::max(o.stations_per_leg, 3);
  const SphereGrid& grid = *gamma.grid;

  FlowPath path;
  auto push = [&](double t, const SurfaceMetric& g, double dnorm, int leg) {
    path.t.push_back(t);
    path.min_curvature.push_back(g.gauss_curvature().minCoeff());
    path.derivative_norm.push_back(dnorm);
    path.leg.push_back(leg);
    path.metrics.push_back(g);
  };

  if (gamma.u == gamma0.u && gamma.v == gamma0.v) {
    for (int k = 0; k < 3 * m - 2; ++k) push(static_cast<double>(k) / (3 * m - 3), gamma, 0.0, k * 3 / (3 * m - 2));
    path.derivative_exponent = 0;
    path.derivative_constant = 0;
    return path;
  }

  const double T = o.T;
  FlowOptions fo = o.flow;
  fo.station_times.clear();
  fo.stations = m;
  const FlowPath rdt = ricci_deturck_flow(gamma, gamma0, T, BackgroundKind::RicciFlow, fo);
  path.kappa = rdt.kappa;
  path.max_bound_violation = rdt.max_bound_violation;
  path.steps = rdt.steps;

  // leg 1: η(t) = γ(3Tt)
  for (int k = 0; k < m; ++k) {
    const State s{rdt.metrics[k].u, rdt.metrics[k].v, rdt.background[k].u, rdt.background[k].v};
    const Rates r = rates(grid, s, Mode::DeTurckRicci);
    push(rdt.t[k] / (3 * T), rdt.metrics[k], 3 * T * rate_norm(rdt.metrics[k], r.du, r.dv, gamma0), 1);
  }
  // leg 2: linear segment between γ(T) and γ̄(T) in the metric coefficients
  const SurfaceMetric& a = rdt.metrics.back();
  const SurfaceMetric& b = rdt.background.back();
  const double seg = 3 * c0_distance(a, b, gamma0);
  auto blend = [&](double s) {
    SurfaceMetric g{gamma.grid, Field(grid.size()), Field(grid.size())};
    for (int i = 0; i < grid.size(); ++i) {
      g.u[i] = 0.5 * std::log((1 - s) * std::exp(2 * a.u[i]) + s * std::exp(2 * b.u[i]));
      g.v[i] = 0.5 * std::log((1 - s) * std::exp(2 * a.v[i]) + s * std::exp(2 * b.v[i]));
    }
    return g;
  };
  const int fine = 4 * (m - 1);
  for (int k = 0; k <= fine; ++k) {
    const double s = static_cast<double>(k) / fine;
    const SurfaceMetric g = blend(s);
    const double minK = g.gauss_curvature().minCoeff();
    if (!(minK > 0) && path.ok) {
      path.ok = false;
      path.failure_s = s;
      path.failure_distance = c0_distance(a, b, gamma0);
      std::ostringstream os;
      os << "linear segment loses PSC at s = " << s << " (min K = " << minK
         << ", C0 distance " << path.failure_distance << ")";
      path.message = os.str();
    }
    if (k % 4 == 0) push(1.0 / 3 + s / 3, g, seg, 2);
  }
  // leg 3: η(t) = γ̄(3T − 3Tt)
  for (int k = m - 1; k >= 0; --k) {
    const SurfaceMetric& g = rdt.background[k];
    const Field K = g.gauss_curvature();
    push(2.0 / 3 + (1 - rdt.t[k] / T) / 3, g, 3 * T * rate_norm(g, -K, -K, gamma0), 3);
  }

  // fit ‖η′(t)‖ ≈ Ct^a on the first leg
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  path.derivative_constant = 0;
  for (std::size_t k = 0; k < path.t.size(); ++k) {
    if (path.t[k] <= 0) continue;
    path.derivative_constant = std::max(path.derivative_constant, path.t[k] * path.derivative_norm[k]);
    if (path.leg[k] != 1 || !(path.derivative_norm[k] > 0)) continue;
    const double x = std::log(path.t[k]), y = std::log(path.derivative_norm[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) path.derivative_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return path;
}

FlowPath monotone_scaled_path(const SurfaceMetric& gamma, double eps_tilde, double s0, int n_exp,
                              const MonotonePathOptions& o) {
  require_surface(gamma, "monotone_scaled_path");
  if (!(eps_tilde > 0)) throw PreconditionError("monotone path needs eps_tilde > 0");
  if (!(s0 > 0)) throw PreconditionError("monotone path needs s0 > 0");
  if (n_exp < 1) throw PreconditionError("monotone path needs N >= 1");
  const int m = std::max(o.stations, 3);
  const SphereGrid& grid = *gamma.grid;
  std::vector<double> s(m), tau(m);
  for (int k = 0; k < m; ++k) {
    s[k] = s0 * k / (m - 1);
    tau[k] = std::pow(s[k], n_exp);
  }
  s.back() = s0;
  tau.back() = std::pow(s0, n_exp);
  // distinct τ stations; for N ≥ 1 and k ≥ 1 they increase strictly
  FlowOptions fo = o.flow;
  fo.station_times.assign(tau.begin() + 1, tau.end());
  const SurfaceMetric round = SurfaceMetric::round(gamma.grid, 1.0);
  const FlowPath rdt = ricci_deturck_flow(gamma, round, tau.back(), BackgroundKind::Fixed, fo);

  FlowPath path;
  path.kappa = rdt.kappa;
  path.max_bound_violation = rdt.max_bound_violation;
  path.steps = rdt.steps;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const SurfaceMetric& g = rdt.metrics[k];
    const double B = 1 + eps_tilde * s[k] / s0;
    const State st{g.u, g.v, round.u, round.v};
    const Rates r = rates(grid, st, Mode::DeTurckFixed);
    const double chain = n_exp * std::pow(s[k], n_exp - 1);
    double lam = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
      lam = std::min(lam, eps_tilde / (s0 * B) + 2 * chain * r.du[i]);
      lam = std::min(lam, eps_tilde / (s0 * B) + 2 * chain * r.dv[i]);
    }
    worst = std::min(worst, lam);
    const SurfaceMetric g1 = g.scaled(B);
    path.t.push_back(s[k]);
    path.min_curvature.push_back(g1.gauss_curvature().minCoeff());
    path.derivative_norm.push_back(lam);
    path.leg.push_back(1);
    path.metrics.push_back(g1);
  }
  if (worst < -1e-10) {
    path.ok = false;
    std::ostringstream os;
    os << "scaled path is not monotone (min eigenvalue " << worst << "); s0 = " << s0 << " is too large";
    path.message = os.str();
  }
  return path;
}

MonotoneSearch find_monotone_s0(const SurfaceMetric& gamma, double eps_tilde, double s0_start, int n_exp,
                                const MonotonePathOptions& opts) {
  MonotoneSearch out;
  double s0 = s0_start;
  for (int attempt = 0; attempt < 40; ++attempt, s0 *= 0.5) {
    out.tried.push_back(s0);
    try {
      FlowPath p = monotone_scaled_path(gamma, eps_tilde, s0, n_exp, opts);
      if (p.ok) {
        out.s0 = s0;
        out.path = std::move(p);
        return out;
      }
    } catch (const PreconditionError&) {
      // s0^N beyond the extinction time
    }
  }
  throw NumericalError("no monotone s0 found");
}

SandwichReport sandwich_check(const SurfaceMetric& gamma, double eps_tilde, int n_exp, const MonotonePathOptions& opts) {
  SandwichReport rep;
  const MonotoneSearch search = find_monotone_s0(gamma, eps_tilde, 0.5, n_exp, opts);
  rep.s0 = search.s0;
  const double tau = std::pow(rep.s0, n_exp);
  rep.step1_min_eigenvalue = *std::min_element(search.path.derivative_norm.begin(), search.path.derivative_norm.end());
  const SurfaceMetric end1 = search.path.metrics.back();              // (1+ε̃)γ(τ)
  const SurfaceMetric flowed = end1.scaled(1 / (1 + eps_tilde));      // γ(τ)
  const SurfaceMetric bar = SurfaceMetric::round(gamma.grid, std::sqrt(1 - 2 * tau));
  rep.step2_min_eigenvalue = min_eigen_ratio(flowed, bar, 1 + eps_tilde);
  rep.lambda_gamma = lambda_plus_2d(gamma);
  rep.lambda_step1 = lambda_plus_2d(end1);
  rep.lambda_flowed = lambda_plus_2d(flowed);
  rep.lambda_step2 = lambda_plus_2d(bar.scaled(1 + eps_tilde));
  rep.lambda_std = lambda_plus_2d(SurfaceMetric::round(gamma.grid, 1.0));
  rep.chain_holds = rep.lambda_gamma <= rep.lambda_step1 * (1 + 1e-9) && rep.lambda_flowed <= rep.lambda_step2 * (1 + 1e-9);
  rep.bound_holds = rep.lambda_gamma <= (1 + eps_tilde) * rep.lambda_std * (1 + 1e-3);
  return rep;
}

}  // namespace fillin
