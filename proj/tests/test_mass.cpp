#include "doctest.h"
#include "fillin/mass.hpp"

#include <cmath>
#include <numbers>

using namespace fillin;
using std::numbers::pi;

namespace {

Field cos_field(const SphereGrid& g, double base, double amp) {
  Field H(g.size());
  for (int i = 0; i < g.size(); ++i) H[i] = base * (1 + amp * std::cos(g.nodes()[i]));
  return H;
}

}  // namespace

TEST_CASE("round Lambda_plus closed forms") {
  CHECK(lambda_plus_round(3, 1.0) == doctest::Approx(8 * pi).epsilon(1e-15));
  CHECK(lambda_plus_round(3, 2.0) == doctest::Approx(16 * pi).epsilon(1e-15));
  CHECK(lambda_plus_round(4, 1.0) == doctest::Approx(6 * pi * pi).epsilon(1e-15));
  for (int n = 3; n <= 7; ++n)
    for (double lam : {0.3, 2.5}) CHECK(lambda_plus_round(n, lam) == lambda_plus_round(n, 1.0) * std::pow(lam, n - 2));
  CHECK_THROWS_AS(lambda_plus_round(2, 1.0), PreconditionError);
  CHECK_THROWS_AS(lambda_plus_round(3, -1.0), PreconditionError);
}

TEST_CASE("hyperbolic Lambda_plus closed forms") {
  CHECK(lambda_plus_kappa_round(3, 1.0, -1.0) == doctest::Approx(8 * pi * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lambda_plus_kappa_round(3, 2.0, -1.0) == doctest::Approx(16 * pi * std::sqrt(5.0)).epsilon(1e-15));
  CHECK(std::abs(lambda_plus_kappa_round(3, 1.0, -1e-8) - 8 * pi) < 1e-6);
  CHECK(std::abs(lambda_plus_kappa_round(5, 1.7, -1e-8) / lambda_plus_round(5, 1.7) - 1) < 1e-7);
  CHECK_THROWS_AS(lambda_plus_kappa_round(3, 1.0, 0.0), PreconditionError);
}

TEST_CASE("Brown-York mass of round data") {
  auto g = build_grid(2, 33);
  for (double r : {0.5, 1.0, 3.0}) {
    auto rep = brown_york(round_triple(g, r, 2.0 / r), lambda_plus_round(3, r));
    CHECK(std::abs(rep.m_by) < 1e-12);
    CHECK(rep.total_mean_curvature == doctest::Approx(8 * pi * r).epsilon(1e-13));
  }
  auto neg = brown_york(round_triple(g, 2.0, 2.0 / 2.0 + 1.0), lambda_plus_round(3, 2.0));
  CHECK(neg.m_by < 0);
  CHECK(neg.m_by == doctest::Approx(-2.0).epsilon(1e-12));  // −|S²(2)|/(8π) = −16π/(8π)
  CHECK_THROWS_AS(brown_york(round_triple(g, 1.0, -1.0), 8 * pi), PreconditionError);
}

TEST_CASE("Schwarzschild coordinate spheres") {
  auto flat = schwarzschild_sphere(3, 0.0, 7.0);
  CHECK(std::abs(flat.H - 2.0 / 7.0) < 1e-14);
  CHECK(flat.areal_radius == 7.0);

  auto s = schwarzschild_sphere(3, 1.0, 10.0);
  CHECK(s.areal_radius == doctest::Approx(11.025).epsilon(1e-14));
  CHECK(std::abs(s.H - s.H_closed) < 1e-12 * s.H_closed);
  // areal closed form H = (2/R)√(1 − 2m/R)
  CHECK(std::abs(s.H - 2.0 / s.areal_radius * std::sqrt(1 - 2.0 / s.areal_radius)) < 1e-12);
  // expansion remainder is O(ρ⁻³)
  double prev = 0;
  for (double rho : {10.0, 20.0, 40.0, 80.0}) {
    auto t = schwarzschild_sphere(3, 1.0, rho);
    const double scaled = std::abs(t.H - t.H_expansion) * rho * rho * rho;
    CHECK(scaled < 10.0);
    if (prev > 0) CHECK(std::abs(scaled / prev - 1) < 0.2);
    prev = scaled;
  }
  CHECK_THROWS_AS(schwarzschild_sphere(3, 1.0, 0.4), PreconditionError);
  CHECK_THROWS_AS(schwarzschild_sphere(3, -1.0, 0.9), PreconditionError);
}

TEST_CASE("total mean curvature of n = 4 Schwarzschild spheres") {
  double prev = 0;
  for (double rho : {20.0, 40.0, 80.0}) {
    auto s = schwarzschild_sphere(4, 1.0, rho);
    const double res = std::abs(s.total_mean_curvature - 3 * 2 * pi * pi * rho * rho);
    CHECK(res * rho < 3.0 * 2 * pi * pi);
    if (prev > 0) CHECK(res * rho < prev);
    prev = res * rho;
  }
}

TEST_CASE("isotropic radius inverts the areal radius") {
  for (int n : {3, 4, 6})
    for (double m : {-0.5, 0.0, 1.0})
      for (double rho : {3.0, 11.0}) {
        auto s = schwarzschild_sphere(n, m, rho);
        CHECK(isotropic_radius(n, m, s.areal_radius) == doctest::Approx(rho).epsilon(1e-13));
      }
}

TEST_CASE("Brown-York of a Schwarzschild sphere on a grid") {
  auto g = build_grid(2, 33);
  const double rho = isotropic_radius(3, 1.0, 10.0);
  auto data = schwarzschild_sphere_data(g, 1.0, rho);
  auto rep = brown_york(data, lambda_plus_round(3, 10.0));
  CHECK(std::abs(rep.m_by - 10 * (1 - std::sqrt(0.8))) < 1e-9);
  CHECK(std::abs(rep.m_by - 1.05573) < 1e-5);
}

TEST_CASE("large-sphere Brown-York limit") {
  auto s = by_large_sphere_limit(3, 1.0, {10, 100, 1000});
  for (std::size_t i = 0; i < 3; ++i) {
    const double r = s.r[i];
    const double ref = r * (1 - std::sqrt(1 - 2.0 / r));
    CHECK(std::abs(s.m_by[i] / ref - 1) < 1e-6);
  }
  CHECK(std::abs(s.m_by[0] - 1.0557) < 1e-4);
  CHECK(std::abs(s.m_by[1] - 1.00504) < 2e-5);
  CHECK(std::abs(s.m_by[2] - 1.00050) < 1e-5);
  CHECK(s.slope >= -1.2);
  CHECK(s.slope <= -0.8);

  auto zero = by_large_sphere_limit(3, 0.0, {10, 100});
  for (double v : zero.m_by) CHECK(std::abs(v) < 1e-12);

  auto negm = by_large_sphere_limit(3, -0.5, {100});
  const double ref = 100 * (1 - std::sqrt(1 + 1.0 / 100));
  CHECK(std::abs(negm.m_by[0] - ref) < 1e-9);
  CHECK(negm.m_by[0] < 0);
  CHECK(std::abs(std::abs(negm.m_by[0] + 0.5) - 0.00125) < 2e-5);
}

TEST_CASE("Brown-York in higher dimensions matches the isotropic closed form") {
  for (int n : {4, 5}) {
    auto s = by_large_sphere_limit(n, 1.0, {5, 10, 20, 40});
    for (std::size_t i = 0; i < s.r.size(); ++i) {
      const double rho = isotropic_radius(n, 1.0, s.r[i]);
      CHECK(std::abs(s.m_by[i] - (1 + 0.5 / std::pow(rho, n - 2))) < 1e-8);
    }
    CHECK(s.slope == doctest::Approx(-(n - 2.0)).epsilon(0.1));
  }
}

TEST_CASE("AH mass: trivial collar") {
  auto g = build_grid(2, 33);
  auto sol = solve_hyperbolic(g, Field::Constant(33, 2 * std::sqrt(2.0)), 1.0, 8.0);
  auto mc = ah_mass_curve(sol);
  for (double m : mc.m) CHECK(std::abs(m) < 1e-12);
}

TEST_CASE("AH mass: constant data decreases to the mass-aspect limit") {
  auto g = build_grid(2, 33);
  HyperbolicOptions o;
  o.station_spacing = 0.005;
  auto sol = solve_hyperbolic(g, Field::Constant(33, 0.9 * 2 * std::sqrt(2.0)), 1.0, 8.0, o);
  auto mc = ah_mass_curve(sol);
  CHECK(mc.m.front() > 0);
  CHECK(mc.max_increase <= 1e-8);
  for (std::size_t k = 0; k + 1 < mc.m.size(); ++k)
    if (mc.resolvable[k]) CHECK(mc.m[k + 1] < mc.m[k]);
  CHECK(mc.limit_relative_error < 0.01);
  CHECK(mc.max_identity_residual < 1e-4);
  CHECK(mc.resolvable_count > 100);
  // in the steep part of the curve the identity holds to 1e-6
  CHECK(ah_mass_curve(sol, 1e-2).max_identity_residual < 1e-6);
  // the bare sphere integral carries the extra factor ω₂ = 4π
  CHECK(mc.m0_unnormalized == doctest::Approx(4 * pi * mc.m.front()).epsilon(1e-14));
}

TEST_CASE("AH mass: derivative identity converges under refinement") {
  auto g = build_grid(2, 33);
  const Field H = cos_field(*g, 2 * std::sqrt(2.0), 0.1);
  std::vector<double> res;
  for (double sp : {0.01, 0.005}) {
    HyperbolicOptions o;
    o.station_spacing = sp;
    auto mc = ah_mass_curve(solve_hyperbolic(g, H, 1.0, 8.0, o));
    CHECK(mc.max_increase <= 1e-8);
    CHECK(mc.limit_relative_error < 0.01);
    res.push_back(mc.max_identity_residual);
  }
  CHECK(res[1] < 1e-4);
  CHECK(res[0] / res[1] > 8);
}

TEST_CASE("AH boundary value and its relation to m(r0)") {
  auto g = build_grid(2, 33);
  const double c = 2 * std::sqrt(2.0);
  auto eq = ah_boundary_value(*g, 1.0, Field::Constant(33, c));
  CHECK(eq.total == doctest::Approx(8 * pi * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(eq.bound == doctest::Approx(8 * pi * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(eq.within);
  auto small = ah_boundary_value(*g, 1.0, Field::Constant(33, 0.9 * c));
  CHECK(small.total == doctest::Approx(0.9 * small.bound).epsilon(1e-14));
  auto odd = ah_boundary_value(*g, 1.0, cos_field(*g, c, 0.1));
  CHECK(odd.total == doctest::Approx(8 * pi * std::sqrt(2.0)).epsilon(1e-14));

  // m(r₀) ≥ 0 exactly when the total stays below the bound
  for (double scale : {0.8, 0.95, 1.05, 1.2}) {
    const Field H = cos_field(*g, scale * c, 0.2);
    auto b = ah_boundary_value(*g, 1.0, H);
    HyperbolicOptions o;
    o.station_spacing = 0.05;
    auto mc = ah_mass_curve(solve_hyperbolic(g, H, 1.0, 3.0, o));
    CHECK((mc.m.front() >= 0) == b.within);
  }
}
