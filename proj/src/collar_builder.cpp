#include "fillin/collar_builder.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fillin {

namespace {

PathPtr share(MetricPath p) { return std::make_shared<const MetricPath>(std::move(p)); }

std::vector<double> uniform(double t0, double t1, int count) {
  std::vector<double> ts(count);
  for (int k = 0; k < count; ++k) ts[k] = t0 + (t1 - t0) * k / (count - 1);
  ts.back() = t1;
  return ts;
}

}  // namespace

bool metric_dominates(const WarpedMetric& g1, const WarpedMetric& g0) {
  const int n = g0.grid().size();
  if (g1.grid().size() != n || g1.dim() != g0.dim()) return false;
  for (int i = 0; i < n; ++i) {
    if (!(g1.f()[i] * g1.f()[i] > g0.f()[i] * g0.f()[i])) return false;
    const bool pole = (i == 0 || i == n - 1);
    const double a = pole ? g1.hx()[i] : g1.h()[i];
    const double b = pole ? g0.hx()[i] : g0.h()[i];
    if (!(a * a > b * b)) return false;
  }
  return true;
}

CobordismResult build_psc_cobordism(const WarpedMetric& g0, const WarpedMetric& g1, double delta,
                                    const Field& h_target, double eps, const CobordismOptions& opts) {
  if (!(delta > 0)) throw PreconditionError("cobordism needs delta > 0");
  if (!(eps > 0)) throw PreconditionError("cobordism needs eps > 0");
  if (!metric_dominates(g1, g0)) throw PreconditionError("outer metric does not dominate the inner metric");
  const SphereGrid& grid = g0.grid();
  grid.check_field(h_target, "target mean curvature");

  PathPtr path = share(MetricPath::linear_warped(g0, g1));
  SolverOptions so = opts.solver;
  so.station_times.clear();
  so.stations = opts.stations > 0 ? opts.stations : 8 * (grid.size() - 1) + 1;
  const auto f = TargetCurvature::constant(delta);

  CobordismResult res;
  res.delta = delta;
  res.epsilon = eps;
  res.M = compute_M(*path, f, uniform(0.0, 1.0, so.stations));
  if (eps > std::exp(-0.5 * res.M)) {
    std::ostringstream os;
    os << "eps = " << eps << " exceeds eps0 = exp(-M/2) = " << std::exp(-0.5 * res.M) << " (M = " << res.M << ")";
    throw PreconditionError(os.str());
  }
  res.collar = solve_generic(path, f, Field::Constant(grid.size(), eps), so);
  if (!res.collar.ok()) throw NumericalError("cobordism collar failed: " + res.collar.message);

  const int last = static_cast<int>(res.collar.t.size()) - 1;
  res.h0 = -slice_mean_curvature(res.collar, 0);
  res.h1 = slice_mean_curvature(res.collar, last);
  res.residual = reconstruct_scalar_curvature(res.collar, opts.reconstruction_order).max_residual;
  res.min_h1 = res.h1.minCoeff();
  res.h1_lower_bound = std::exp(-res.M) * path->slice(1.0).H.minCoeff() / eps;
  res.h1_exceeds_target = (res.h1 - h_target).minCoeff() > 0;
  return res;
}

CobordismResult build_psc_cobordism(GridPtr grid, const RoundMetric& g0, const RoundMetric& g1, double delta,
                                    const Field& h_target, double eps, const CobordismOptions& opts) {
  return build_psc_cobordism(to_warped(grid, g0), to_warped(grid, g1), delta, h_target, eps, opts);
}

MonotoneCollarReport monotone_increase_collar(PathPtr path, double eps, const Field& H, const SolverOptions& opts) {
  if (!path) throw PreconditionError("monotone collar needs a path");
  if (!(eps > 0)) throw PreconditionError("monotone collar needs eps > 0");
  const SphereGrid& grid = path->grid();
  grid.check_field(H, "boundary mean curvature");
  if (!(H.minCoeff() > 0)) throw PreconditionError("boundary mean curvature must be positive");

  const int samples = std::max(opts.stations, 9);
  for (double t : uniform(path->t_begin(), path->t_end(), samples)) {
    const Slice s = path->slice(t);
    if (s.R.minCoeff() < -1e-10) {
      std::ostringstream os;
      os << "path is not NNSC at t = " << t << " (min R = " << s.R.minCoeff() << ")";
      throw PreconditionError(os.str());
    }
    if (std::min(s.kx.minCoeff(), s.kh.minCoeff()) < -1e-12) {
      std::ostringstream os;
      os << "path is not monotone increasing at t = " << t;
      throw PreconditionError(os.str());
    }
  }

  PathPtr wrapped = share(MetricPath::exponential_scaled(path, eps));
  const Slice s0 = path->slice(path->t_begin());
  const Slice w0 = wrapped->slice(wrapped->t_begin());
  const Field u0 = w0.H.cwiseQuotient(H);

  MonotoneCollarReport rep;
  rep.collar = solve_generic(wrapped, TargetCurvature::constant(0.0), u0, opts);
  if (!rep.collar.ok()) throw NumericalError("monotone collar failed: " + rep.collar.message);
  rep.total_initial = grid.integrate(H.cwiseProduct(s0.J));
  const int last = static_cast<int>(rep.collar.t.size()) - 1;
  const Slice w1 = wrapped->slice(rep.collar.t[last]);
  rep.total_final = grid.integrate(slice_mean_curvature(rep.collar, last).cwiseProduct(w1.J));
  rep.strict_increase = rep.total_final > rep.total_initial;
  if (rep.collar.t.size() >= 5) rep.series = total_mean_curvature_evolution(rep.collar);
  return rep;
}

double minimal_round_scale(const WarpedMetric& g) {
  const int n = g.grid().size();
  double lam2 = 0.0;
  for (int i = 0; i < n; ++i) {
    lam2 = std::max(lam2, g.f()[i] * g.f()[i]);
    const double r = (i == 0 || i == n - 1) ? g.hx()[i] : g.h()[i] / g.grid().sin()[i];
    lam2 = std::max(lam2, r * r);
  }
  return std::sqrt(lam2);
}

ThresholdSample no_fill_in_threshold_at(const WarpedMetric& g, double lambda0, double delta, double eps,
                                        const CobordismOptions& opts) {
  if (g.dim() != 2) throw PreconditionError("the threshold construction is implemented for surfaces");
  const WarpedMetric outer = WarpedMetric::round(g.grid_ptr(), lambda0);
  if (!metric_dominates(outer, g)) {
    std::ostringstream os;
    os << "lambda0 = " << lambda0 << " does not give lambda0^2 gamma_std > gamma";
    throw PreconditionError(os.str());
  }
  ThresholdSample s;
  s.lambda0 = lambda0;
  s.euclidean_H = 2.0 / lambda0;
  const Field target = Field::Constant(g.grid().size(), s.euclidean_H);
  try {
    const CobordismResult c = build_psc_cobordism(g, outer, delta, target, eps, opts);
    s.M = c.M;
    s.admissible = true;
    s.C = (-c.h0).maxCoeff();
    s.min_h1 = c.min_h1;
    s.h1_exceeds_euclidean = c.h1_exceeds_target;
    s.residual = c.residual;
  } catch (const PreconditionError&) {
    // ε above the existence threshold for this λ₀
    PathPtr path = share(MetricPath::linear_warped(g, outer));
    s.M = compute_M(*path, TargetCurvature::constant(delta), uniform(0.0, 1.0, 33));
    s.admissible = false;
    s.C = std::numeric_limits<double>::infinity();
  }
  return s;
}

ThresholdResult no_fill_in_threshold(const WarpedMetric& g, double delta, double eps, const ThresholdOptions& opts) {
  const double lmin = minimal_round_scale(g);
  ThresholdResult out;
  out.C = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= opts.sweep_points; ++k) {
    const double lam = lmin * std::pow(2.0, k / 4.0);
    ThresholdSample s = no_fill_in_threshold_at(g, lam, delta, eps, opts.cobordism);
    if (s.admissible && s.C < out.C) {
      out.C = s.C;
      out.lambda0 = lam;
    }
    out.sweep.push_back(s);
  }
  return out;
}

double spin_bound_value(int n, double lambda, double K) {
  if (!(K < 0)) throw PreconditionError("spin bound assumes K < 0");
  if (!(lambda > 0)) throw PreconditionError("spin bound needs lambda > 0");
  return (n - 1) * sphere_volume(n - 1) * std::pow(lambda, n - 2) * std::sqrt(1.0 - K * lambda * lambda / (n * (n - 1.0)));
}

double spin_bound(const WarpedMetric& g, double lambda, double K, int path_samples) {
  if (!(K < 0)) throw PreconditionError("spin bound assumes K < 0");
  const WarpedMetric outer = WarpedMetric::round(g.grid_ptr(), lambda);
  if (!metric_dominates(outer, g)) throw PreconditionError("lambda^2 gamma_std does not dominate gamma");
  const MetricPath path = MetricPath::linear_warped(g, outer);
  double minR = std::numeric_limits<double>::infinity();
  for (double t : uniform(0.0, 1.0, std::max(path_samples, 2))) minR = std::min(minR, path.slice(t).R.minCoeff());
  if (K > minR - 1e-8) {
    std::ostringstream os;
    os << "K = " << K << " is not below the sampled minimum " << minR << " of R along the path";
    throw PreconditionError(os.str());
  }
  return spin_bound_value(g.dim() + 1, lambda, K);
}

double spin_bound(GridPtr grid, const RoundMetric& g, double lambda, double K) {
  return spin_bound(to_warped(grid, g), lambda, K);
}

}  // namespace fillin
