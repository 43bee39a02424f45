#include "doctest.h"
#include "fillin/convex_revolution.hpp"
#include "fillin/mass.hpp"

#include <cmath>
#include <numbers>

using namespace fillin;
using std::numbers::pi;

namespace {

WarpedMetric metric_of(const Profile& p, int n = 129) { return WarpedMetric::from_profile(build_grid(2, n), p); }

}  // namespace

TEST_CASE("unit sphere embeds with H = 2") {
  const auto p = embed(metric_of(profiles::round(1.0)));
  CHECK(std::abs(total_mean_curvature(p) - 8 * pi) < 1e-10);
  CHECK(std::abs(surface_area(p) - 4 * pi) < 1e-10);
  CHECK(p.height == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(p.length == doctest::Approx(pi).epsilon(1e-13));
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    CHECK(std::abs(p.k1[i] + p.k2[i] - 2) < 1e-8);
    // meridian of the unit sphere: ρ = sin s, z = 1 − cos s
    CHECK(std::abs(p.rho[i] - std::sin(p.s[i])) < 1e-12);
    CHECK(std::abs(p.z[i] - (1 - std::cos(p.s[i]))) < 1e-12);
  }
}

TEST_CASE("total mean curvature scales linearly") {
  for (double R : {0.3, 2.0, 7.5}) {
    const auto p = embed(metric_of(profiles::round(R)));
    CHECK(total_mean_curvature(p) == doctest::Approx(8 * pi * R).epsilon(1e-12));
    CHECK(std::abs(total_mean_curvature(p) - lambda_plus_round(3, R)) < 1e-8);
  }
  const auto q = embed(metric_of(profiles::spheroid(1.0, 2.0)));
  for (double lam : {0.5, 3.0}) {
    const double a = total_mean_curvature(q.scaled(lam));
    CHECK(std::abs(a / (lam * total_mean_curvature(q)) - 1) < 1e-12);
  }
}

TEST_CASE("capped cylinder total mean curvature") {
  const double l = 2, e1 = 0.1, e2 = 0.05;
  const auto p = embed(metric_of(profiles::capped_cylinder_from_box(l, e1, e2)));
  CHECK(std::abs(total_mean_curvature(p) - (2 * pi * (l - 2 * e1) + 8 * pi * e2)) < 1e-6);
  CHECK(std::abs(total_mean_curvature(p) - 4 * pi) < 1e-6);
  CHECK(p.height == doctest::Approx(l - 2 * e1 + 2 * e2).epsilon(1e-12));
  CHECK(min_principal_curvature(p) >= -1e-8);
  for (std::size_t i = 0; i < p.x.size(); ++i)
    if (p.s[i] > pi * e2 / 2 + 1e-9 && p.s[i] < p.length - pi * e2 / 2 - 1e-9) {
      CHECK(std::abs(p.rho[i] - e2) < 1e-12);
      CHECK(std::abs(p.k1[i]) < 1e-8);
    }
}

TEST_CASE("prolate spheroid round trip") {
  const double a = 1, c = 2;
  const auto p = embed(metric_of(profiles::spheroid(a, c)));
  const auto ic = induced_metric_check(p);
  CHECK(ic.max_f_error < 1e-8);
  CHECK(ic.max_h_error < 1e-8);
  for (std::size_t i = 1; i + 1 < p.x.size(); ++i) {
    const double x = p.x[i];
    const double f = std::sqrt(a * a * std::cos(x) * std::cos(x) + c * c * std::sin(x) * std::sin(x));
    // the meridian is the ellipse (a sin x, −c cos x)
    CHECK(std::abs(p.z[i] - c * (1 - std::cos(x))) < 1e-10);
    CHECK(std::abs(p.k1[i] - a * c / (f * f * f)) < 1e-9);
    CHECK(std::abs(p.k2[i] - c / (a * f)) < 1e-9);
  }
  CHECK(std::abs(p.k1.front() - c / (a * a)) < 1e-6);
}

TEST_CASE("embedding rejects negative curvature and slope obstructions") {
  try {
    // K = e^{−2φ}(1 − a(2 − 6cos²x)) is negative near the equator for a = 0.8
    embed(metric_of(profiles::conformal_cos2(0.8)));
    FAIL("expected rejection");
  } catch (const EmbeddingError& e) {
    CHECK(e.kind == EmbeddingError::Kind::NegativeCurvature);
    CHECK(e.value < 0);
    CHECK(std::abs(e.x - pi / 2) < 0.5);
  }
  // negative curvature at the poles pushes the slope above one first
  try {
    embed(metric_of(profiles::conformal_cos2(-0.8)));
    FAIL("expected rejection");
  } catch (const EmbeddingError& e) {
    CHECK(e.kind == EmbeddingError::Kind::SlopeObstruction);
  }
  Profile pinched{[](double x) {
                    const double s = std::sin(x), c = std::cos(x);
                    return ProfileSample{1 - 0.9 * s * s, -1.8 * s * c, s, c, -s};
                  },
                  {}};
  try {
    embed(metric_of(pinched));
    FAIL("expected rejection");
  } catch (const EmbeddingError& e) {
    CHECK(e.kind == EmbeddingError::Kind::SlopeObstruction);
    CHECK(e.value > 1);
  }
  CHECK_THROWS_AS(embed(WarpedMetric::round(build_grid(3, 33))), PreconditionError);
}

TEST_CASE("corpus invariants") {
  const auto corpus = convex_corpus();
  CHECK(corpus.size() == 10);
  for (const auto& np : corpus) {
    CAPTURE(np.name);
    const auto p = embed(metric_of(np.profile));
    CHECK(std::abs(total_gauss_curvature(p) - 4 * pi) < 1e-6);
    CHECK(min_principal_curvature(p) >= -1e-8);
    const auto ic = induced_metric_check(p);
    CHECK(ic.max_f_error < 1e-8);
    CHECK(ic.max_h_error < 1e-8);
    CHECK(steiner_fit(p).max_relative_error < 1e-4);
    // grid quadrature of K dμ as an independent check
    if (np.profile.breaks.empty()) CHECK(std::abs(gauss_bonnet_integral_grid(metric_of(np.profile)) - 4 * pi) < 1e-6);
  }
}

TEST_CASE("Steiner formula on the unit sphere") {
  const auto p = embed(metric_of(profiles::round(1.0)));
  CHECK(steiner_area(p, 1.0) == doctest::Approx(16 * pi).epsilon(1e-12));
  CHECK(steiner_area(p, 0.5) == doctest::Approx(9 * pi).epsilon(1e-12));
  const auto fit = steiner_fit(p);
  CHECK(fit.c0 == doctest::Approx(4 * pi).epsilon(1e-10));
  CHECK(fit.c1 == doctest::Approx(8 * pi).epsilon(1e-10));
  CHECK(fit.c2 == doctest::Approx(4 * pi).epsilon(1e-10));
  CHECK_THROWS_AS(steiner_area(p, -0.1), PreconditionError);
}

TEST_CASE("Steiner coefficients of the spheroid") {
  const auto p = embed(metric_of(profiles::spheroid(1.0, 2.0)));
  const auto fit = steiner_fit(p, 0.05);
  // prolate spheroid area 2πa²(1 + (c/(a e))asin e), e² = 1 − a²/c²
  const double e = std::sqrt(1 - 0.25);
  const double area = 2 * pi * (1 + 2 / e * std::asin(e));
  CHECK(std::abs(fit.area / area - 1) < 1e-12);
  CHECK(std::abs(fit.c0 / area - 1) < 1e-4);
  CHECK(std::abs(fit.c1 / fit.total_mean_curvature - 1) < 1e-4);
  CHECK(std::abs(fit.c2 / (4 * pi) - 1) < 1e-4);
}

TEST_CASE("radius at height") {
  const auto p = embed(metric_of(profiles::round(1.0)));
  for (double z : {1e-6, 0.01, 0.3, 1.0, 1.7, 1.999}) CHECK(std::abs(p.radius_at_height(z) - std::sqrt(z * (2 - z))) < 1e-12);
  CHECK(p.radius_at_height(-1) == 0.0);
  CHECK(p.radius_at_height(3) == 0.0);
}

TEST_CASE("enclosure monotonicity") {
  const auto g = build_grid(2, 129);
  const auto pairs = nested_corpus();
  CHECK(pairs.size() >= 10);
  for (const auto& pr : pairs) {
    CAPTURE(pr.name);
    const auto r = enclosure_check(embed(WarpedMetric::from_profile(g, pr.inner)),
                                   embed(WarpedMetric::from_profile(g, pr.outer)));
    CHECK(r.nested);
    CHECK(r.area_monotone);
    CHECK(r.tmc_monotone);
  }
  const auto one = embed(WarpedMetric::round(g, 1.0));
  const auto two = embed(WarpedMetric::round(g, 2.0));
  auto r = enclosure_check(one, two);
  CHECK(r.tmc_inner == doctest::Approx(8 * pi).epsilon(1e-12));
  CHECK(r.tmc_outer == doctest::Approx(16 * pi).epsilon(1e-12));
  CHECK(r.max_overlap == doctest::Approx(-1.0).epsilon(1e-9));

  auto bad = enclosure_check(two, one);
  CHECK_FALSE(bad.nested);
  CHECK(std::abs(bad.violating_height) <= 2.0 + 1e-12);
  auto tall = enclosure_check(embed(WarpedMetric::from_profile(g, profiles::spheroid(1.0, 2.0))),
                              embed(WarpedMetric::round(g, 1.5)));
  CHECK_FALSE(tall.nested);
  CHECK(tall.violating_height < -1.5);
}

TEST_CASE("fast marching distances on the round sphere") {
  const auto m = WarpedMetric::round(build_grid(2, 65), 1.0);
  std::vector<double> errs;
  for (int N : {129, 257}) {
    const auto T = geodesic_distance(m, pi / 2, N, N);
    double e = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double x = i * pi / (N - 1), ph = j * pi / (N - 1);
        e = std::max(e, std::abs(T[i][j] - std::acos(std::sin(x) * std::cos(ph))));
      }
    errs.push_back(e);
  }
  CHECK(errs[1] < 1e-2);
  CHECK(errs[0] / errs[1] > 1.7);
  // from a pole every row is at its meridian distance
  const auto P = geodesic_distance(m, 0.0, 65, 65);
  for (int i = 0; i < 65; ++i) CHECK(std::abs(P[i][7] - i * pi / 64) < 1e-12);
}

TEST_CASE("intrinsic diameter") {
  const auto g = build_grid(2, 65);
  DiameterOptions o;
  o.sources = 5;
  const auto d = diameter(WarpedMetric::round(g, 1.0), o);
  CHECK(std::abs(d.diameter - pi) < 1e-3);
  CHECK(std::abs(d.fast_marching - pi) < 1e-3);
  CHECK(d.error_estimate < 1e-3);
  o.nx = o.nphi = 256;
  for (double R : {0.5, 3.0}) CHECK(std::abs(diameter(WarpedMetric::round(g, R), o).diameter - pi * R) < 1e-3 * R);
  const auto cyl = diameter(metric_of(profiles::capped_cylinder_from_box(2.0, 0.1, 0.05)), o);
  CHECK(std::abs(cyl.diameter - (1.8 + 0.05 * pi)) < 1e-3);
  CHECK(cyl.meridian_length == doctest::Approx(1.8 + 0.05 * pi).epsilon(1e-12));
}

TEST_CASE("diameter bounds on total mean curvature") {
  DiameterOptions o;
  o.nx = o.nphi = 256;
  o.sources = 5;
  const auto s = prop51_check(metric_of(profiles::round(1.0)), o);
  CHECK(s.pass);
  CHECK(s.two_diam == doctest::Approx(2 * pi).epsilon(1e-6));
  CHECK(s.lambda_plus == doctest::Approx(8 * pi).epsilon(1e-12));
  CHECK(s.twelve_pi_diam == doctest::Approx(12 * pi * pi).epsilon(1e-6));
  const auto c = prop51_check(metric_of(profiles::capped_cylinder_from_box(2.0, 0.1, 0.05)), o);
  const double diam = 1.8 + 0.05 * pi;
  CHECK(c.pass);
  CHECK(c.two_diam == doctest::Approx(2 * diam).epsilon(1e-6));
  CHECK(c.lambda_plus == doctest::Approx(4 * pi).epsilon(1e-8));
  CHECK(prop51_check(metric_of(profiles::spheroid(1.0, 2.0)), o).pass);
}

TEST_CASE("dilation") {
  const auto g = build_grid(2, 129);
  const auto std1 = WarpedMetric::round(g, 1.0);
  CHECK(dilation(std1, std1).value == doctest::Approx(1.0).epsilon(1e-12));
  const auto sph = metric_of(profiles::spheroid(1.0, 2.0));
  CHECK(dilation(sph, sph).value == doctest::Approx(1.0).epsilon(1e-12));
  for (double lam : {1.3, 2.0}) {
    const auto r = dilation(std1, WarpedMetric::round(g, lam));
    CHECK(r.value == doctest::Approx(lam * lam).epsilon(1e-12));
    for (double c : r.coefficients) CHECK(std::abs(c) < 1e-3);
  }
  double prev = 1e9;
  for (double a : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const auto r = dilation(metric_of(profiles::conformal_cos(a)), std1);
    CHECK(r.value >= 1);
    CHECK(r.value <= r.identity_value);
    CHECK(r.value < prev);
    prev = r.value;
    for (int i = 1; i < r.sigma.size(); ++i) CHECK(r.sigma[i] > r.sigma[i - 1]);
  }
  CHECK(prev < 1.001);
}

TEST_CASE("total mean curvature is continuous under dilation") {
  const auto std1 = WarpedMetric::round(build_grid(2, 129), 1.0);
  double prev_gap = 1e9, prev_dil = 1e9;
  for (int k = 0; k < 7; ++k) {
    const auto m = metric_of(profiles::conformal_cos2(0.3 * std::pow(0.5, k)));
    const double dil = dilation(m, std1).value;
    const double gap = std::abs(total_mean_curvature(embed(m)) - 8 * pi);
    CHECK(dil < prev_dil);
    CHECK(gap < prev_gap + 1e-3);
    prev_gap = gap;
    prev_dil = dil;
  }
  CHECK(prev_gap < 0.05);
}
