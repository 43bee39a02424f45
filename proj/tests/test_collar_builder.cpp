#include "doctest.h"
#include "fillin/collar_builder.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <numbers>

using namespace fillin;
namespace odeint = boost::numeric::odeint;
using std::numbers::pi;

namespace {

PathPtr share(MetricPath p) { return std::make_shared<const MetricPath>(std::move(p)); }

// u(1) for the round path (1−t)a² + tb² on S², integrated independently.
double round_lapse_at_one(double a, double b, double f, double eps) {
  std::vector<double> y{eps};
  auto sys = [&](const std::vector<double>& x, std::vector<double>& dx, double t) {
    const double r2 = (1 - t) * a * a + t * b * b;
    const double k = 0.5 * (b * b - a * a) / r2;
    const double H = 2 * k, R = 2 / r2;
    const double Rbg = R - H * H - 2 * k * k + 8 * k * k;
    dx[0] = (0.5 * (f - R) * x[0] * x[0] * x[0] + 0.5 * (R - Rbg) * x[0]) / H;
  };
  odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<std::vector<double>>>(1e-15, 1e-15),
                             sys, y, 0.0, 1.0, 1e-4);
  return y[0];
}

}  // namespace

TEST_CASE("round cobordism prescribes delta and meets the mean curvature bound") {
  auto g = build_grid(2, 128);
  const Field target = Field::Constant(128, 1.0);
  auto res = build_psc_cobordism(g, RoundMetric{2, 1.0}, RoundMetric{2, 2.0}, 0.1, target, 0.01);
  CHECK(res.residual < 1e-4);
  CHECK(res.min_h1 >= res.h1_lower_bound);
  CHECK(res.h1_exceeds_target);
  // H̄₁ = 2·(3/2)/4 on the outer sphere
  const double u1 = round_lapse_at_one(1.0, 2.0, 0.1, 0.01);
  CHECK(std::abs(res.min_h1 - 0.75 / u1) < 1e-8 * res.min_h1);
  // orientation: the inner outward normal opposes ∂_t
  CHECK((res.h0.array() + 3.0 / 0.01).abs().maxCoeff() < 1e-9);
}

TEST_CASE("halving eps roughly doubles the outer mean curvature") {
  auto g = build_grid(2, 33);
  const Field target = Field::Zero(33);
  auto a = build_psc_cobordism(g, RoundMetric{2, 1.0}, RoundMetric{2, 2.0}, 0.1, target, 0.02);
  auto b = build_psc_cobordism(g, RoundMetric{2, 1.0}, RoundMetric{2, 2.0}, 0.1, target, 0.01);
  const double ratio = b.min_h1 / a.min_h1;
  CHECK(ratio >= 1.8);
  CHECK(ratio <= 2.2);
}

TEST_CASE("eps scaling law across the sweep") {
  auto g = build_grid(2, 33);
  const auto w0 = WarpedMetric::from_profile(g, profiles::spheroid(1.0, 1.3));
  const auto w1 = WarpedMetric::round(g, 2.0);
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    auto r = build_psc_cobordism(w0, w1, 0.1, Field::Zero(33), eps);
    CHECK(r.min_h1 * eps >= std::exp(-r.M) * r.collar.path->slice(1.0).H.minCoeff());
    CHECK(r.collar.bounds.satisfied);
  }
}

TEST_CASE("cobordism preconditions") {
  auto g = build_grid(2, 17);
  const Field z = Field::Zero(17);
  CHECK_THROWS_AS(build_psc_cobordism(g, RoundMetric{2, 1.0}, RoundMetric{2, 1.0}, 0.1, z, 0.01), PreconditionError);
  CHECK_THROWS_AS(build_psc_cobordism(g, RoundMetric{2, 2.0}, RoundMetric{2, 1.0}, 0.1, z, 0.01), PreconditionError);
  CHECK_THROWS_AS(build_psc_cobordism(g, RoundMetric{2, 1.0}, RoundMetric{2, 2.0}, 0.1, z, 0.9), PreconditionError);
  CHECK_THROWS_AS(build_psc_cobordism(g, RoundMetric{2, 1.0}, RoundMetric{2, 2.0}, -0.1, z, 0.01), PreconditionError);
}

TEST_CASE("monotone collar increases total mean curvature") {
  auto g = build_grid(2, 33);
  PathPtr p = share(MetricPath::round_scaling(g, 1.0, 2.0));
  auto rep = monotone_increase_collar(p, 0.05, Field::Constant(33, 2.0));
  CHECK(rep.strict_increase);
  CHECK(rep.total_initial == doctest::Approx(8 * pi).epsilon(1e-12));
  for (std::size_t k = 1; k + 1 < rep.series.t.size(); ++k) CHECK(rep.series.measured[k] > 0);
}

TEST_CASE("monotone collar on a constant path starts at u = 1") {
  auto g = build_grid(2, 33);
  const auto s = WarpedMetric::round(g);
  PathPtr p = share(MetricPath::linear_warped(s, s));
  PathPtr wrapped = share(MetricPath::exponential_scaled(p, 0.05));
  const Field H = wrapped->slice(0.0).H;
  auto rep = monotone_increase_collar(p, 0.05, H);
  CHECK((rep.collar.u.front().array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK(rep.strict_increase);
}

TEST_CASE("scaling H scales the initial lapse and the initial total") {
  auto g = build_grid(2, 33);
  PathPtr p = share(MetricPath::round_scaling(g, 1.0, 1.5));
  auto a = monotone_increase_collar(p, 0.05, Field::Constant(33, 2.0));
  auto b = monotone_increase_collar(p, 0.05, Field::Constant(33, 6.0));
  CHECK((a.collar.u.front() - 3.0 * b.collar.u.front()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(b.total_initial == doctest::Approx(3.0 * a.total_initial).epsilon(1e-14));
}

TEST_CASE("monotone collar rejects shrinking or negatively curved paths") {
  auto g = build_grid(2, 33);
  PathPtr shrink = share(MetricPath::linear_warped(WarpedMetric::round(g, 2.0), WarpedMetric::round(g, 1.0)));
  CHECK_THROWS_AS(monotone_increase_collar(shrink, 0.05, Field::Constant(33, 2.0)), PreconditionError);
  const auto bumpy = WarpedMetric::from_profile(g, profiles::conformal_cos2(1.5));
  REQUIRE(scalar_curvature(bumpy).minCoeff() < 0);
  PathPtr neg = share(MetricPath::linear_warped(bumpy, bumpy));
  CHECK_THROWS_AS(monotone_increase_collar(neg, 0.05, Field::Constant(33, 2.0)), PreconditionError);
}

TEST_CASE("no-fill-in threshold for round spheres") {
  auto g = build_grid(2, 33);
  const double eps = 0.01;
  auto s = no_fill_in_threshold_at(WarpedMetric::round(g), 2.0, 0.1, eps);
  REQUIRE(s.admissible);
  // H̄₀ = 2·½(4 − 1) along γ_std → 4γ_std
  CHECK(s.C == doctest::Approx(3.0 / eps).epsilon(1e-10));
  CHECK(s.h1_exceeds_euclidean);
  auto s4 = no_fill_in_threshold_at(WarpedMetric::round(g, 2.0), 3.0, 0.1, eps);
  REQUIRE(s4.admissible);
  CHECK(s4.C == doctest::Approx(2 * 0.5 * (9.0 - 4.0) / 4.0 / eps).epsilon(1e-10));
  CHECK(std::isfinite(s4.C));
  CHECK_THROWS_AS(no_fill_in_threshold_at(WarpedMetric::round(g), 1.0, 0.1, eps), PreconditionError);
  // the inner boundary term grows as eps shrinks
  auto s_small = no_fill_in_threshold_at(WarpedMetric::round(g), 2.0, 0.1, eps / 2);
  CHECK(s_small.C > s.C);
}

TEST_CASE("threshold sweep reports the minimum over admissible scales") {
  auto g = build_grid(2, 33);
  const auto gam = WarpedMetric::from_profile(g, profiles::spheroid(1.0, 1.2));
  ThresholdOptions opts;
  opts.sweep_points = 6;
  auto r = no_fill_in_threshold(gam, 0.1, 0.01, opts);
  CHECK(std::isfinite(r.C));
  CHECK(r.lambda0 > minimal_round_scale(gam));
  for (const auto& s : r.sweep)
    if (s.admissible) CHECK(r.C <= s.C);
  CHECK(minimal_round_scale(gam) == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("spin bound closed form and admissibility checks") {
  CHECK(std::abs(spin_bound_value(3, 2.0, -1.0) - 16 * pi * std::sqrt(5.0 / 3.0)) < 1e-10);
  auto g = build_grid(2, 33);
  const double b = spin_bound(g, RoundMetric{2, 1.0}, 2.0, -1.0);
  CHECK(std::abs(b - 16 * pi * std::sqrt(5.0 / 3.0)) < 1e-10);
  // unit flat ball: ∫H dμ = 2·4π
  CHECK(8 * pi < b);
  CHECK_THROWS_AS(spin_bound(g, RoundMetric{2, 1.0}, 0.9, -1.0), PreconditionError);
  CHECK_THROWS_AS(spin_bound(g, RoundMetric{2, 1.0}, 2.0, 0.5), PreconditionError);
  const auto bumpy = WarpedMetric::from_profile(g, profiles::conformal_cos2(1.5));
  const double minR = scalar_curvature(bumpy).minCoeff();
  REQUIRE(minR < 0);
  const double lam = 1.01 * minimal_round_scale(bumpy);
  CHECK_THROWS_AS(spin_bound(bumpy, lam, 0.5 * minR, 33), PreconditionError);
  CHECK_NOTHROW(spin_bound(bumpy, lam, 2.0 * minR - 1.0, 33));
}

TEST_CASE("spin bound dominates flat balls in dimensions three and four") {
  for (int d : {2, 3}) {
    auto g = build_grid(d, 33);
    const int n = d + 1;
    for (double r : {0.5, 1.0, 1.7}) {
      const double total = (n - 1) * sphere_volume(n - 1) * std::pow(r, n - 2);  // H = (n−1)/r
      for (double lam : {1.05 * r, 2.0 * r}) {
        for (double K : {-0.1, -1.0, -10.0}) CHECK(total <= spin_bound(g, RoundMetric{d, r}, lam, K));
      }
    }
  }
}
