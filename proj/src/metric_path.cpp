#include "fillin/metric_path.hpp"

#include <cmath>
#include <sstream>

namespace fillin {

namespace {

void finish(Slice& s, int d) {
  s.H = s.kx + (d - 1) * s.kh;
  s.Asq = s.kx.cwiseAbs2() + (d - 1) * s.kh.cwiseAbs2();
  s.dH = s.dkx + (d - 1) * s.dkh;
  s.Rbg = s.R - s.H.cwiseAbs2() - s.Asq - 2.0 * s.dH;
}

// Slice of ρ(t)²γ_std with ρ'/ρ = kappa and dkappa = d/dt(ρ'/ρ).
Slice round_slice(const SphereGrid& grid, double t, double rho, double kappa, double dkappa) {
  const int n = grid.size(), d = grid.dim();
  const double r2 = rho * rho;
  Slice s;
  s.t = t;
  s.F = Field::Constant(n, rho);
  s.G = rho * grid.sin();
  s.R = Field::Constant(n, d * (d - 1) / r2);
  s.lap_a2 = Field::Constant(n, 1.0 / r2);
  s.lap_a2[0] = d / r2;
  s.lap_a2[n - 1] = d / r2;
  s.lap_a1 = (d - 1) * grid.cot() / r2;
  s.kx = Field::Constant(n, kappa);
  s.kh = s.kx;
  s.dkx = Field::Constant(n, dkappa);
  s.dkh = s.dkx;
  s.J = Field::Constant(n, std::pow(rho, d));
  finish(s, d);
  return s;
}

Slice linear_slice(const MetricPath::LinearWarped& p, double t) {
  const WarpedMetric& a = p.g0;
  const WarpedMetric& b = p.g1;
  const SphereGrid& grid = a.grid();
  const int n = grid.size(), d = grid.dim();
  Slice s;
  s.t = t;
  const Field P = (1 - t) * a.f().cwiseAbs2() + t * b.f().cwiseAbs2();
  const Field Q = (1 - t) * a.h().cwiseAbs2() + t * b.h().cwiseAbs2();
  for (int i = 0; i < n; ++i) {
    if (!(P[i] > 0) || ((i > 0 && i < n - 1) && !(Q[i] > 0))) {
      std::ostringstream os;
      os << "degenerate slice metric at t = " << t << ", node " << i;
      throw PreconditionError(os.str());
    }
  }
  s.F = P.cwiseSqrt();
  s.G = Q.cwiseSqrt();
  const Field Fx = ((1 - t) * a.f().cwiseProduct(a.fx()) + t * b.f().cwiseProduct(b.fx())).cwiseQuotient(s.F);
  Field Gx(n), Gxx(n);
  const Field Qx2 = (1 - t) * a.h().cwiseProduct(a.hx()) + t * b.h().cwiseProduct(b.hx());
  const Field Qxx2 = (1 - t) * (a.hx().cwiseAbs2() + a.h().cwiseProduct(a.hxx())) +
                     t * (b.hx().cwiseAbs2() + b.h().cwiseProduct(b.hxx()));
  for (int i = 1; i < n - 1; ++i) {
    Gx[i] = Qx2[i] / s.G[i];
    Gxx[i] = (Qxx2[i] - Gx[i] * Gx[i]) / s.G[i];
  }
  for (int i : {0, n - 1}) {
    const double sign = (i == 0) ? 1.0 : -1.0;
    Gx[i] = sign * std::sqrt((1 - t) * a.hx()[i] * a.hx()[i] + t * b.hx()[i] * b.hx()[i]);
    Gxx[i] = 0.0;
  }
  s.R = warped_scalar_curvature(d, s.F, Fx, s.G, Gx, Gxx);
  s.lap_a2.resize(n);
  s.lap_a1.resize(n);
  for (int i = 1; i < n - 1; ++i) {
    s.lap_a2[i] = 1.0 / P[i];
    s.lap_a1[i] = ((d - 1) * Gx[i] / s.G[i] - Fx[i] / s.F[i]) / P[i];
  }
  for (int i : {0, n - 1}) {
    s.lap_a2[i] = d / P[i];
    s.lap_a1[i] = 0.0;
  }
  s.kx = 0.5 * (b.f().cwiseAbs2() - a.f().cwiseAbs2()).cwiseQuotient(P);
  s.kh.resize(n);
  for (int i = 1; i < n - 1; ++i) s.kh[i] = 0.5 * (b.h()[i] * b.h()[i] - a.h()[i] * a.h()[i]) / Q[i];
  for (int i : {0, n - 1}) {
    const double ha = a.hx()[i] * a.hx()[i], hb = b.hx()[i] * b.hx()[i];
    s.kh[i] = 0.5 * (hb - ha) / ((1 - t) * ha + t * hb);
  }
  s.dkx = -2.0 * s.kx.cwiseAbs2();
  s.dkh = -2.0 * s.kh.cwiseAbs2();
  s.J.resize(n);
  for (int i = 1; i < n - 1; ++i) s.J[i] = s.F[i] * std::pow(s.G[i] / grid.sin()[i], d - 1);
  for (int i : {0, n - 1}) s.J[i] = s.F[i] * std::pow(std::abs(Gx[i]), d - 1);
  finish(s, d);
  return s;
}

}  // namespace

Field apply_laplacian(const SphereGrid& grid, const Slice& slice, const Field& u) {
  const Field u1 = grid.d1_even() * u;
  const Field u2 = grid.d2_even() * u;
  return slice.lap_a2.cwiseProduct(u2) + slice.lap_a1.cwiseProduct(u1);
}

MetricPath::MetricPath(GridPtr grid, Variant v, double t0, double t1)
    : grid_(std::move(grid)), v_(std::move(v)), t0_(t0), t1_(t1) {}

MetricPath MetricPath::linear_warped(const WarpedMetric& g0, const WarpedMetric& g1) {
  if (g0.grid_ptr() != g1.grid_ptr() &&
      (g0.grid().size() != g1.grid().size() || g0.grid().dim() != g1.grid().dim()))
    throw PreconditionError("linear path endpoints live on different grids");
  return MetricPath(g0.grid_ptr(), LinearWarped{g0, g1}, 0.0, 1.0);
}

MetricPath MetricPath::round_scaling(GridPtr grid, double a, double b) {
  if (!(a > 0 && b > 0)) throw PreconditionError("round scaling needs a, b > 0");
  return MetricPath(std::move(grid), RoundScaling{a, b}, 0.0, 1.0);
}

MetricPath MetricPath::exponential_scaled(std::shared_ptr<const MetricPath> inner, double eps) {
  if (!inner) throw PreconditionError("exponential wrap needs an inner path");
  const double t0 = inner->t_begin(), t1 = inner->t_end();
  GridPtr g = inner->grid_ptr();
  return MetricPath(std::move(g), ExponentialScaled{std::move(inner), eps}, t0, t1);
}

MetricPath MetricPath::euclidean(GridPtr grid, double r0, double r1) {
  if (!(r0 > 0 && r1 > r0)) throw PreconditionError("Euclidean foliation needs 0 < r0 < r1");
  return MetricPath(std::move(grid), EuclideanFoliation{}, r0, r1);
}

MetricPath MetricPath::hyperbolic(GridPtr grid, double r0, double r1) {
  if (!(r0 > 0 && r1 > r0)) throw PreconditionError("hyperbolic foliation needs 0 < r0 < r1");
  return MetricPath(std::move(grid), HyperbolicFoliation{}, r0, r1);
}

std::string MetricPath::name() const {
  struct Namer {
    std::string operator()(const LinearWarped&) const { return "linear-warped"; }
    std::string operator()(const RoundScaling&) const { return "round-scaling"; }
    std::string operator()(const ExponentialScaled& e) const { return "exponential(" + e.inner->name() + ")"; }
    std::string operator()(const EuclideanFoliation&) const { return "euclidean"; }
    std::string operator()(const HyperbolicFoliation&) const { return "hyperbolic"; }
  };
  return std::visit(Namer{}, v_);
}

Slice MetricPath::slice(double t) const {
  const double span = t1_ - t0_;
  if (t < t0_ - 1e-12 * span || t > t1_ + 1e-12 * span) {
    std::ostringstream os;
    os << "t = " << t << " outside the path domain [" << t0_ << ", " << t1_ << "]";
    throw PreconditionError(os.str());
  }
  const SphereGrid& grid = *grid_;
  const int d = grid.dim();
  if (auto* p = std::get_if<LinearWarped>(&v_)) return linear_slice(*p, t);
  if (auto* p = std::get_if<RoundScaling>(&v_)) {
    const double r2 = (1 - t) * p->a * p->a + t * p->b * p->b;
    const double k = 0.5 * (p->b * p->b - p->a * p->a) / r2;
    return round_slice(grid, t, std::sqrt(r2), k, -2.0 * k * k);
  }
  if (std::holds_alternative<EuclideanFoliation>(v_)) return round_slice(grid, t, t, 1.0 / t, -1.0 / (t * t));
  if (std::holds_alternative<HyperbolicFoliation>(v_)) {
    const double sh = std::sinh(t);
    return round_slice(grid, t, sh, std::cosh(t) / sh, -1.0 / (sh * sh));
  }
  const auto& e = std::get<ExponentialScaled>(v_);
  Slice s = e.inner->slice(t);
  const double scale = std::exp(e.eps * t);
  const double s2 = scale * scale;
  s.F *= scale;
  s.G *= scale;
  s.R /= s2;
  s.lap_a2 /= s2;
  s.lap_a1 /= s2;
  s.kx.array() += e.eps;
  s.kh.array() += e.eps;
  s.J *= std::pow(scale, d);
  finish(s, d);
  return s;
}

SliceGeometry slice_geometry(const MetricPath& path, double t) {
  Slice s = path.slice(t);
  return {s.H, s.Asq, s.dH};
}

Field background_scalar_curvature(const MetricPath& path, double t) { return path.slice(t).Rbg; }

}  // namespace fillin
