#include "fillin/quasi_spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace fillin {

TargetCurvature TargetCurvature::constant(double value) { return TargetCurvature(value); }
TargetCurvature TargetCurvature::field(Field values) { return TargetCurvature(std::move(values)); }
TargetCurvature TargetCurvature::background() { return TargetCurvature(Background{}); }

Field TargetCurvature::at(const Slice& slice) const {
  if (auto* c = std::get_if<double>(&v_)) return Field::Constant(slice.R.size(), *c);
  if (auto* f = std::get_if<Field>(&v_)) {
    if (f->size() != slice.R.size()) throw PreconditionError("target curvature field has the wrong size");
    return *f;
  }
  return slice.Rbg;
}

double TargetCurvature::constant_value() const {
  if (auto* c = std::get_if<double>(&v_)) return *c;
  throw PreconditionError("target curvature is not a constant");
}

std::string TargetCurvature::describe() const {
  if (auto* c = std::get_if<double>(&v_)) {
    std::ostringstream os;
    os << "constant " << *c;
    return os.str();
  }
  if (std::holds_alternative<Field>(v_)) return "field";
  return "background";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Ok: return "ok";
    case SolveStatus::PositivityLoss: return "positivity-loss";
    case SolveStatus::StepUnderflow: return "step-underflow";
  }
  return "unknown";
}

namespace {

std::vector<double> make_stations(double t0, double t1, const SolverOptions& opts) {
  std::vector<double> ts = opts.station_times;
  if (ts.empty()) {
    if (opts.stations < 2) throw PreconditionError("need at least two stations");
    ts.resize(opts.stations);
    for (int k = 0; k < opts.stations; ++k) ts[k] = t0 + (t1 - t0) * k / (opts.stations - 1);
    ts.back() = t1;
  }
  const double tol = 1e-12 * (t1 - t0);
  if (std::abs(ts.front() - t0) > tol) throw PreconditionError("first station must be the path start");
  for (std::size_t k = 1; k < ts.size(); ++k)
    if (!(ts[k] > ts[k - 1])) throw PreconditionError("stations must be strictly increasing");
  if (ts.back() > t1 + tol) throw PreconditionError("stations leave the path domain");
  return ts;
}

void require_positive_mean_curvature(const Slice& s) {
  const double m = s.H.minCoeff();
  if (!(m > 0)) {
    std::ostringstream os;
    os << "mean curvature of the foliation is not positive at t = " << s.t << " (min " << m << ")";
    throw PreconditionError(os.str());
  }
}

// Derivative at xs[c] of the interpolating polynomial through (xs[j], ys[j]), j ∈ idx.
template <class Y>
Y lagrange_derivative(const std::vector<double>& xs, const std::vector<Y>& ys, const std::vector<int>& idx,
                      int c) {
  const double x = xs[c];
  Y acc = ys[idx[0]] * 0.0;
  for (int j : idx) {
    // l_j'(x) = Σ_{m≠j} 1/(x_j − x_m) Π_{k≠j,m} (x − x_k)/(x_j − x_k)
    double dl = 0.0;
    for (int m : idx) {
      if (m == j) continue;
      double p = 1.0 / (xs[j] - xs[m]);
      for (int k : idx) {
        if (k == j || k == m) continue;
        p *= (x - xs[k]) / (xs[j] - xs[k]);
      }
      dl += p;
    }
    acc = acc + dl * ys[j];
  }
  return acc;
}

std::vector<int> stencil(int k, int count, int width) {
  int lo = k - width / 2;
  lo = std::max(0, std::min(lo, count - width));
  std::vector<int> idx(width);
  for (int j = 0; j < width; ++j) idx[j] = lo + j;
  return idx;
}

// Cached slice evaluation: RK4 revisits the same t at the start of each step.
class SliceCache {
 public:
  explicit SliceCache(const MetricPath& p) : path_(p) {}
  const Slice& at(double t) {
    for (auto& e : entries_)
      if (e.valid && e.s.t == t) return e.s;
    Entry& e = entries_[next_];
    next_ = (next_ + 1) % entries_.size();
    e.s = path_.slice(t);
    e.s.t = t;
    e.valid = true;
    require_positive_mean_curvature(e.s);
    return e.s;
  }

 private:
  struct Entry {
    Slice s;
    bool valid = false;
  };
  const MetricPath& path_;
  std::array<Entry, 3> entries_{};
  std::size_t next_ = 0;
};

struct Rhs {
  const SphereGrid& grid;
  const TargetCurvature& f;
  Field operator()(const Slice& s, const Field& u) const {
    const Field fs = f.at(s);
    const Field lap = apply_laplacian(grid, s, u);
    const Field u2 = u.cwiseAbs2();
    Field out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double r = 0.5 * (fs[i] - s.R[i]) * u2[i] * u[i] + 0.5 * (s.R[i] - s.Rbg[i]) * u[i];
      out[i] = (u2[i] * lap[i] + r) / s.H[i];
    }
    return out;
  }
  // Bound on the spectral radius of the linearization.
  double stiffness(const Slice& s, const Field& u, bool diffusion) const {
    const double K = grid.size() - 1;
    const Field fs = f.at(s);
    double lam = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double u2 = u[i] * u[i];
      double l = std::abs(1.5 * (fs[i] - s.R[i]) * u2 + 0.5 * (s.R[i] - s.Rbg[i]));
      if (diffusion) l += u2 * (std::abs(s.lap_a2[i]) * K * K + std::abs(s.lap_a1[i]) * K);
      lam = std::max(lam, l / s.H[i]);
    }
    return lam;
  }
};

bool positive_finite(const Field& u) {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!(u[i] > 0) || !std::isfinite(u[i])) return false;
  return true;
}

}  // namespace

double compute_M(const MetricPath& path, const TargetCurvature& f, const std::vector<double>& times) {
  double M = 0.0;
  for (double t : times) {
    const Slice s = path.slice(t);
    require_positive_mean_curvature(s);
    const Field fs = f.at(s);
    for (Eigen::Index i = 0; i < s.R.size(); ++i)
      M = std::max(M, (std::abs(s.R[i]) + std::abs(s.Rbg[i]) + std::abs(fs[i])) / s.H[i]);
  }
  return M;
}

ComparisonValues comparison_bounds(double M, double eps, double t) {
  if (!(M >= 0)) throw PreconditionError("comparison bounds need M >= 0");
  if (!(eps > 0)) throw PreconditionError("comparison bounds need eps > 0");
  if (t < 0 || t > 1) throw PreconditionError("comparison bounds are stated for t in [0,1]");
  const double a = 1.0 + eps * eps;
  const double e2 = eps * eps;
  const double dv = a * std::exp(M * t) - e2;
  const double dw = a * std::exp(-M * t) - e2;
  if (!(dw > 0)) {
    std::ostringstream os;
    os << "upper comparison solution blows up before t = " << t << "; need eps <= eps0 = exp(-M/2) = "
       << std::exp(-0.5 * M);
    throw PreconditionError(os.str());
  }
  return {eps / std::sqrt(dv), eps / std::sqrt(dw)};
}

CollarSolution solve_generic(PathPtr path, const TargetCurvature& f, const Field& u0, const SolverOptions& opts) {
  if (!path) throw PreconditionError("solve_generic needs a path");
  const SphereGrid& grid = path->grid();
  grid.check_field(u0, "initial lapse");
  if (!positive_finite(u0)) throw PreconditionError("initial lapse must be positive");
  if (!(opts.dt_safety > 0 && opts.dt_safety <= 1)) throw PreconditionError("dt_safety must lie in (0,1]");
  if (!(opts.tolerance > 0)) throw PreconditionError("tolerance must be positive");

  const double t0 = path->t_begin(), t1 = path->t_end();
  CollarSolution sol;
  sol.path = path;
  sol.f = f;
  const std::vector<double> stations = make_stations(t0, t1, opts);

  // Comparison sandwich bookkeeping.
  {
    BoundCheck& b = sol.bounds;
    b.M = compute_M(*path, f, stations);
    const double lo = u0.minCoeff(), hi = u0.maxCoeff();
    b.eps = lo;
    const bool constant = (hi - lo) <= 1e-14 * hi;
    const bool unit_span = (stations.back() - t0) <= 1.0 + 1e-12;
    b.applicable = constant && unit_span && lo <= std::exp(-0.5 * b.M);
    b.lower = 0.5 * std::exp(-b.M) * lo;
    b.upper = std::exp(b.M) * lo;
  }

  const Rhs rhs{grid, f};
  SliceCache cache(*path);
  const double span = t1 - t0;
  const double dt_floor = opts.dt_min * span;
  sol.min_dt = std::numeric_limits<double>::infinity();
  sol.max_dt = 0.0;

  Field u = u0;
  sol.t.push_back(stations.front());
  sol.u.push_back(u);
  const bool implicit = opts.scheme == Scheme::ImplicitDiffusion;
  const int n = grid.size();
  const Eigen::MatrixXd& D1 = grid.d1_even();
  const Eigen::MatrixXd& D2 = grid.d2_even();

  auto fail = [&](SolveStatus st, double t, const std::string& why) {
    sol.status = st;
    std::ostringstream os;
    os << why << " at t = " << t << "; last valid station t = " << sol.t.back();
    sol.message = os.str();
  };

  double t = stations.front();
  for (std::size_t k = 1; k < stations.size() && sol.ok(); ++k) {
    const double target = stations[k];
    while (t < target && sol.ok()) {
      if (sol.steps >= opts.max_steps) {
        fail(SolveStatus::StepUnderflow, t, "step budget exhausted");
        break;
      }
      const Slice& s0 = cache.at(t);
      const double lam = rhs.stiffness(s0, u, !implicit);
      double dt = target - t;
      if (lam > 0) dt = std::min(dt, opts.dt_safety * (implicit ? 1.0 : 2.6) / lam);
      if (opts.dt_max > 0) dt = std::min(dt, opts.dt_max);
      if (dt < dt_floor) {
        fail(SolveStatus::StepUnderflow, t, "step size underflow (stiff or blowing up)");
        break;
      }
      // Land exactly on the station; split a short remainder evenly.
      const double rem = target - t;
      if (dt >= rem * (1 - 1e-9)) dt = rem;
      else if (2 * dt > rem) dt = 0.5 * rem;
      const double tn = (dt == rem) ? target : t + dt;

      Field un;
      if (!implicit) {
        const Field k1 = rhs(s0, u);
        const Slice& sh = cache.at(t + 0.5 * dt);
        const Field k2 = rhs(sh, u + 0.5 * dt * k1);
        const Field k3 = rhs(sh, u + 0.5 * dt * k2);
        const Slice& s1 = cache.at(tn);
        const Field k4 = rhs(s1, u + dt * k3);
        un = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } else {
        // Backward Euler on the diffusion with the coefficient u²/H̄ lagged; reaction explicit.
        const Slice& s1 = cache.at(tn);
        const Field fs = f.at(s0);
        Field rhs_v(n);
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
        for (int i = 0; i < n; ++i) {
          const double u2 = u[i] * u[i];
          const double r = 0.5 * (fs[i] - s0.R[i]) * u2 * u[i] + 0.5 * (s0.R[i] - s0.Rbg[i]) * u[i];
          rhs_v[i] = u[i] + dt * r / s0.H[i];
          const double c = dt * u2 / s1.H[i];
          A.row(i) -= c * (s1.lap_a2[i] * D2.row(i) + s1.lap_a1[i] * D1.row(i));
        }
        un = A.partialPivLu().solve(rhs_v);
      }
      ++sol.steps;
      if (!positive_finite(un)) {
        fail(SolveStatus::PositivityLoss, tn, "lapse lost positivity");
        break;
      }
      sol.min_dt = std::min(sol.min_dt, dt);
      sol.max_dt = std::max(sol.max_dt, dt);
      u = std::move(un);
      t = tn;
    }
    if (sol.ok()) {
      sol.t.push_back(target);
      sol.u.push_back(u);
    }
  }

  BoundCheck& b = sol.bounds;
  b.min_u = std::numeric_limits<double>::infinity();
  b.max_u = 0.0;
  for (const Field& v : sol.u) {
    b.min_u = std::min(b.min_u, v.minCoeff());
    b.max_u = std::max(b.max_u, v.maxCoeff());
  }
  b.satisfied = b.applicable && b.min_u >= b.lower * (1 - 1e-12) && b.max_u <= b.upper * (1 + 1e-12);
  return sol;
}

Reconstruction reconstruct_scalar_curvature(const CollarSolution& sol, int order) {
  if (order != 2 && order != 4) throw PreconditionError("reconstruction order must be 2 or 4");
  const int K = static_cast<int>(sol.t.size());
  if (K < order + 1) throw PreconditionError("too few stations for the requested difference order");
  const SphereGrid& grid = sol.grid();
  Reconstruction out;
  out.R.resize(K);
  for (int k = 0; k < K; ++k) {
    const Field ut = lagrange_derivative(sol.t, sol.u, stencil(k, K, order + 1), k);
    const Slice s = sol.path->slice(sol.t[k]);
    const Field& u = sol.u[k];
    const Field lap = apply_laplacian(grid, s, u);
    const Field fs = sol.f.at(s);
    Field R(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double ui = 1.0 / u[i];
      R[i] = ui * ui * s.Rbg[i] + (1 - ui * ui) * s.R[i] + 2 * ui * ui * ui * ut[i] * s.H[i] - 2 * ui * lap[i];
    }
    const double res = (R - fs).cwiseAbs().maxCoeff();
    out.max_residual_all = std::max(out.max_residual_all, res);
    if (k > 0 && k < K - 1) out.max_residual = std::max(out.max_residual, res);
    out.R[k] = std::move(R);
  }
  return out;
}

Field slice_mean_curvature(const CollarSolution& sol, int station) {
  if (station < 0 || station >= static_cast<int>(sol.t.size())) throw PreconditionError("station out of range");
  const Slice s = sol.path->slice(sol.t[station]);
  return s.H.cwiseQuotient(sol.u[station]);
}

MeanCurvatureSeries total_mean_curvature_evolution(const CollarSolution& sol) {
  const int K = static_cast<int>(sol.t.size());
  if (K < 5) throw PreconditionError("mean curvature evolution needs at least five stations");
  const SphereGrid& grid = sol.grid();
  MeanCurvatureSeries out;
  out.t = sol.t;
  out.total.resize(K);
  out.predicted.resize(K);
  for (int k = 0; k < K; ++k) {
    const Slice s = sol.path->slice(sol.t[k]);
    const Field& u = sol.u[k];
    const Field fs = sol.f.at(s);
    Field tot(u.size()), pred(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      tot[i] = s.H[i] / u[i] * s.J[i];
      pred[i] = 0.5 * ((s.H[i] * s.H[i] - s.Asq[i]) / u[i] + (s.R[i] - fs[i]) * u[i]) * s.J[i];
    }
    out.total[k] = grid.integrate(tot);
    out.predicted[k] = grid.integrate(pred);
  }
  out.measured.resize(K);
  for (int k = 0; k < K; ++k) out.measured[k] = lagrange_derivative(out.t, out.total, stencil(k, K, 5), k);
  double scale = 0.0;
  for (double p : out.predicted) scale = std::max(scale, std::abs(p));
  for (int k = 2; k < K - 2; ++k)
    out.max_relative_mismatch =
        std::max(out.max_relative_mismatch, std::abs(out.measured[k] - out.predicted[k]) / std::max(scale, 1e-300));
  return out;
}

HyperbolicSolution solve_hyperbolic(GridPtr gridp, const Field& H, double lambda, double r_max,
                                    const HyperbolicOptions& opts) {
  if (!gridp) throw PreconditionError("solve_hyperbolic needs a grid");
  const SphereGrid& grid = *gridp;
  grid.check_field(H, "mean curvature");
  if (!(H.minCoeff() > 0)) throw PreconditionError("boundary mean curvature must be positive");
  if (!(lambda > 0)) throw PreconditionError("lambda must be positive");
  const int n = grid.dim() + 1;
  const double r0 = std::asinh(lambda);
  if (!(r_max > r0)) throw PreconditionError("r_max must exceed arcsinh(lambda)");
  if (!(opts.station_spacing > 0) || !(opts.dt_safety > 0 && opts.dt_safety <= 1))
    throw PreconditionError("invalid hyperbolic solver options");

  HyperbolicSolution out;
  out.r0 = r0;
  CollarSolution& sol = out.collar;
  sol.path = std::make_shared<const MetricPath>(MetricPath::hyperbolic(gridp, r0, r_max));
  sol.f = TargetCurvature::constant(-double(n) * (n - 1));

  const Eigen::MatrixXd& L = grid.laplacian();
  const double K = grid.size() - 1;
  const double spec = K * (K + n - 2);
  const double cdiff = 2.0 / (n - 1);
  auto rhs = [&](double r, const Field& w) {
    const double sh = std::sinh(r);
    const double a = n * sh * sh + n - 2;
    const Field Lw = L * w;
    Field out(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double u = 1 + w[i];
      out[i] = (cdiff * u * u * Lw[i] - a * w[i] * u * (2 + w[i])) / std::sinh(2 * r);
    }
    return out;
  };
  auto stiffness = [&](double r, const Field& w) {
    const double sh = std::sinh(r);
    const double a = n * sh * sh + n - 2;
    double lam = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double u = 1 + w[i];
      lam = std::max(lam, cdiff * u * u * spec + a * std::abs(3 * u * u - 1));
    }
    return lam / std::sinh(2 * r);
  };

  const int nst = std::max(2, static_cast<int>(std::ceil((r_max - r0) / opts.station_spacing)) + 1);
  std::vector<double> stations(nst);
  for (int k = 0; k < nst; ++k) stations[k] = r0 + (r_max - r0) * k / (nst - 1);
  stations.back() = r_max;

  Field w(grid.size());
  for (int i = 0; i < grid.size(); ++i) w[i] = (n - 1) / std::tanh(r0) / H[i] - 1.0;
  if (!(w.array() > -1).all()) throw PreconditionError("initial lapse must be positive");
  out.w.push_back(w);
  sol.t.push_back(r0);
  sol.u.push_back(w.array() + 1.0);
  sol.min_dt = std::numeric_limits<double>::infinity();
  double r = r0;
  for (int k = 1; k < nst && sol.ok(); ++k) {
    const double target = stations[k];
    while (r < target) {
      double dt = std::min(target - r, opts.dt_safety * 2.6 / stiffness(r, w));
      if (dt < 1e-12) {
        sol.status = SolveStatus::StepUnderflow;
        sol.message = "step size underflow";
        break;
      }
      const double rem = target - r;
      if (dt >= rem * (1 - 1e-9)) dt = rem;
      else if (2 * dt > rem) dt = 0.5 * rem;
      const double rn = (dt == rem) ? target : r + dt;
      const Field k1 = rhs(r, w);
      const Field k2 = rhs(r + 0.5 * dt, w + 0.5 * dt * k1);
      const Field k3 = rhs(r + 0.5 * dt, w + 0.5 * dt * k2);
      const Field k4 = rhs(rn, w + dt * k3);
      Field wn = w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ++sol.steps;
      if (!((wn.array() > -1).all() && wn.allFinite())) {
        sol.status = SolveStatus::PositivityLoss;
        std::ostringstream os;
        os << "lapse lost positivity at r = " << rn << "; last valid station r = " << sol.t.back();
        sol.message = os.str();
        break;
      }
      sol.min_dt = std::min(sol.min_dt, dt);
      sol.max_dt = std::max(sol.max_dt, dt);
      w = std::move(wn);
      r = rn;
    }
    if (!sol.ok()) break;
    out.w.push_back(w);
    sol.t.push_back(target);
    sol.u.push_back(w.array() + 1.0);
  }
  if (!sol.ok()) return out;

  // Least-squares fit q = w e^{nr} ≈ v + c e^{−2r} over the last window.
  std::vector<int> win;
  for (int k = 0; k < static_cast<int>(sol.t.size()); ++k)
    if (sol.t[k] >= r_max - opts.fit_window - 1e-12) win.push_back(k);
  if (win.size() < 3) throw PreconditionError("fit window holds fewer than three stations");
  Eigen::MatrixXd A(win.size(), 2);
  for (std::size_t j = 0; j < win.size(); ++j) {
    A(j, 0) = 1.0;
    A(j, 1) = std::exp(-2.0 * (sol.t[win[j]] - r_max));  // rescaled for conditioning
  }
  const auto qr = A.colPivHouseholderQr();
  out.v.resize(grid.size());
  out.c.resize(grid.size());
  out.fit_residual = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    Eigen::VectorXd q(win.size());
    for (std::size_t j = 0; j < win.size(); ++j) q[j] = out.w[win[j]][i] * std::exp(n * sol.t[win[j]]);
    const Eigen::VectorXd coef = qr.solve(q);
    out.v[i] = coef[0];
    out.c[i] = coef[1] * std::exp(2.0 * r_max);
    out.fit_residual = std::max(out.fit_residual, (A * coef - q).cwiseAbs().maxCoeff());
  }
  out.fit_ok = out.fit_residual < opts.fit_tolerance;
  return out;
}

}  // namespace fillin
