#include "fillin/mass.hpp"

#include <boost/math/differentiation/finite_difference.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace fillin {

BartnikTriple round_triple(GridPtr grid, double lambda, double H) {
  const int n = grid->size();
  return {WarpedMetric::round(std::move(grid), lambda), Field::Constant(n, H)};
}

double lambda_plus_round(int n, double lambda) {
  if (n < 3 || n > 7) throw PreconditionError("lambda_plus_round needs 3 <= n <= 7");
  if (!(lambda > 0)) throw PreconditionError("lambda must be positive");
  return (n - 1) * sphere_volume(n - 1) * std::pow(lambda, n - 2);
}

double lambda_plus_kappa_round(int n, double lambda, double kappa) {
  if (!(kappa < 0)) throw PreconditionError("lambda_plus_kappa_round needs kappa < 0; use lambda_plus_round for 0");
  return lambda_plus_round(n, lambda) * std::sqrt(1.0 - kappa * lambda * lambda);
}

ByReport brown_york(const BartnikTriple& data, double lambda_plus, const std::string& provenance) {
  data.metric.grid().check_field(data.H, "mean curvature");
  if (!(data.H.minCoeff() > 0)) throw PreconditionError("Brown-York mass needs H > 0");
  const int n = data.n();
  ByReport r;
  r.lambda_plus = lambda_plus;
  r.provenance = provenance;
  r.total_mean_curvature = integrate_metric(data.metric, data.H);
  r.m_by = (lambda_plus - r.total_mean_curvature) / ((n - 1) * sphere_volume(n - 1));
  return r;
}

namespace {

void check_schwarzschild(int n, double m, double rho) {
  if (n < 3 || n > 7) throw PreconditionError("Schwarzschild data needs 3 <= n <= 7");
  if (!(rho > 0)) throw PreconditionError("radius must be positive");
  // twice the horizon (m > 0) or singular (m < 0) isotropic radius
  if (!(std::pow(rho, n - 2) > std::abs(m))) {
    std::ostringstream os;
    os << "isotropic radius " << rho << " is inside the horizon-scale regime for m = " << m;
    throw PreconditionError(os.str());
  }
}

}  // namespace

SchwarzschildSphere schwarzschild_sphere(int n, double m, double rho) {
  check_schwarzschild(n, m, rho);
  const double k = n - 2.0;
  auto phi = [&](double x) { return 1.0 + m / (2.0 * std::pow(x, k)); };
  auto psi = [&](double x) { return std::pow(phi(x), 4.0 / k); };  // g = ψ δ
  SchwarzschildSphere s;
  s.n = n;
  s.m = m;
  s.rho = rho;
  const double p = phi(rho);
  const double sq = std::sqrt(psi(rho));
  s.areal_radius = rho * sq;
  // outward unit normal ψ^{−1/2}∂_ρ; H = (n−1)/(ρ√ψ)·(1 + ρψ′/(2ψ))
  const double dpsi = boost::math::differentiation::finite_difference_derivative<decltype(psi), double, 8>(psi, rho);
  s.H = (n - 1) / (rho * sq) * (1.0 + rho * dpsi / (2.0 * psi(rho)));
  s.H_closed = (n - 1) * (1.0 - m / (std::pow(rho, k) * p)) / s.areal_radius;
  s.H_expansion = (n - 1) / rho * (1.0 - (n - 1) / k * m / std::pow(rho, k));
  s.total_mean_curvature = s.H * sphere_volume(n - 1) * std::pow(s.areal_radius, n - 1);
  s.m_by_exact = m + m * m / (2.0 * std::pow(rho, k));
  return s;
}

double isotropic_radius(int n, double m, double areal_radius) {
  if (n < 3 || n > 7) throw PreconditionError("Schwarzschild data needs 3 <= n <= 7");
  const double k = n - 2.0;
  const double Rk = std::pow(areal_radius, k);
  if (!(Rk > 2 * m)) throw PreconditionError("areal radius inside the horizon");
  // R^{k/2} = s + m/(2s) with s = ρ^{k/2}
  const double s = 0.5 * (std::sqrt(Rk) + std::sqrt(Rk - 2 * m));
  return std::pow(s, 2.0 / k);
}

BartnikTriple schwarzschild_sphere_data(GridPtr grid, double m, double rho) {
  const int n = grid->dim() + 1;
  const SchwarzschildSphere s = schwarzschild_sphere(n, m, rho);
  return round_triple(std::move(grid), s.areal_radius, s.H);
}

LargeSphereSeries by_large_sphere_limit(int n, double m, const std::vector<double>& areal_radii) {
  LargeSphereSeries out;
  for (std::size_t i = 0; i < areal_radii.size(); ++i) {
    if (i > 0 && !(areal_radii[i] > areal_radii[i - 1])) throw PreconditionError("radii must increase");
    const double R = areal_radii[i];
    const double rho = isotropic_radius(n, m, R);
    const SchwarzschildSphere s = schwarzschild_sphere(n, m, rho);
    // Λ₊ of the round sphere of areal radius R; ∫H dμ of the coordinate sphere
    const double lp = lambda_plus_round(n, s.areal_radius);
    const double mby = (lp - s.total_mean_curvature) / ((n - 1) * sphere_volume(n - 1));
    out.r.push_back(R);
    out.m_by.push_back(mby);
    out.reference.push_back(n == 3 ? R * (1.0 - std::sqrt(1.0 - 2.0 * m / R)) : s.m_by_exact);
    out.C = std::max(out.C, R * std::abs(mby - m));
  }
  // least-squares slope of log|m_BY − m| against log r
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    const double e = std::abs(out.m_by[i] - m);
    if (!(e > 0)) continue;
    const double x = std::log(out.r[i]), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  out.slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

MassCurve ah_mass_curve(const HyperbolicSolution& sol, double window) {
  const CollarSolution& c = sol.collar;
  const SphereGrid& grid = c.grid();
  const int n = grid.dim() + 1;
  const double om = sphere_volume(n - 1);
  const int K = static_cast<int>(c.t.size());
  if (K < 5) throw PreconditionError("mass curve needs at least five stations");
  MassCurve mc;
  mc.r = c.t;
  mc.m.resize(K);
  mc.dm_formula.resize(K);
  for (int k = 0; k < K; ++k) {
    const double r = c.t[k];
    const double sh = std::sinh(r), ch = std::cosh(r);
    const Field& w = sol.w[k];
    const Field a = w.cwiseQuotient((w.array() + 1.0).matrix());                        // 1 − u⁻¹
    const Field b = w.cwiseAbs2().cwiseQuotient((w.array() + 1.0).matrix());            // u⁻¹(u − 1)²
    mc.m[k] = std::pow(sh, n - 2) * ch * ch * grid.integrate(a) / om;
    mc.dm_formula[k] = -0.5 * std::pow(sh, n - 3) * ch * (n * sh * sh + n - 2) * grid.integrate(b) / om;
  }
  mc.m0_unnormalized = mc.m[0] * om;

  // five-point derivative on the (uniform) stations
  mc.dm_fd.assign(K, std::numeric_limits<double>::quiet_NaN());
  mc.resolvable.assign(K, 0);
  double dmax = 0;
  for (double v : mc.dm_formula) dmax = std::max(dmax, std::abs(v));
  for (int k = 2; k < K - 2; ++k) {
    const double h = 0.5 * (c.t[k + 1] - c.t[k - 1]);
    mc.dm_fd[k] = (mc.m[k - 2] - 8 * mc.m[k - 1] + 8 * mc.m[k + 1] - mc.m[k + 2]) / (12 * h);
    // far out m′ decays like e^{−(n+1)r} while the integration error in m does not
    if (std::abs(mc.dm_formula[k]) >= window * dmax && dmax > 0) {
      mc.resolvable[k] = 1;
      ++mc.resolvable_count;
      const double rel = std::abs(mc.dm_fd[k] - mc.dm_formula[k]) / std::abs(mc.dm_formula[k]);
      mc.max_identity_residual = std::max(mc.max_identity_residual, rel);
    }
  }
  for (int k = 0; k + 1 < K; ++k) mc.max_increase = std::max(mc.max_increase, mc.m[k + 1] - mc.m[k]);
  mc.limit = mc.m.back();
  if (sol.v.size() == grid.size()) {
    mc.limit_from_v = std::pow(2.0, -n) * grid.integrate(sol.v) / om;
    mc.limit_relative_error = std::abs(mc.limit - mc.limit_from_v) / std::max(std::abs(mc.limit_from_v), 1e-300);
  }
  return mc;
}

AhBoundaryValue ah_boundary_value(const SphereGrid& grid, double lambda, const Field& H) {
  grid.check_field(H, "mean curvature");
  if (!(H.minCoeff() > 0)) throw PreconditionError("boundary mean curvature must be positive");
  if (!(lambda > 0)) throw PreconditionError("lambda must be positive");
  const int n = grid.dim() + 1;
  AhBoundaryValue out;
  out.total = std::pow(lambda, n - 1) * grid.integrate(H);
  out.bound = (n - 1) * sphere_volume(n - 1) * std::pow(lambda, n - 2) * std::sqrt(1.0 + lambda * lambda);
  out.within = out.total <= out.bound * (1 + 1e-14);
  return out;
}

}  // namespace fillin
