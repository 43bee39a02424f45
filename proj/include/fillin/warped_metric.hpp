#pragma once

#include "fillin/sphere_grid.hpp"

#include <functional>
#include <vector>

namespace fillin {

/// λ²γ_std on S^d.
struct RoundMetric {
  int d = 2;
  double lambda = 1.0;
};

/// Meridian data of γ = f(x)²dx² + h(x)²γ_{S^{d−1}} at one parameter value.
struct ProfileSample {
  double f = 0, fx = 0, h = 0, hx = 0, hxx = 0;
};

/// A meridian profile known at every x ∈ [0,π], smooth between the breaks.
struct Profile {
  std::function<ProfileSample(double)> eval;
  std::vector<double> breaks;
};

namespace profiles {
Profile round(double lambda = 1.0);
/// Ellipsoid of revolution with equatorial radius a and polar half-axis c.
Profile spheroid(double a, double c);
/// Cylinder of length `band` and radius r closed by two hemispheres.
Profile capped_cylinder(double band, double r);
/// Same surface in the (l, ε₁, ε₂) parametrization: band l − 2ε₁, radius ε₂.
Profile capped_cylinder_from_box(double l, double eps1, double eps2);
/// e^{2φ}γ_std for an axisymmetric φ given with its first two derivatives.
Profile conformal(std::function<void(double, double&, double&, double&)> phi);
Profile conformal_cos(double amplitude);    // φ = a cos x
Profile conformal_cos2(double amplitude);   // φ = a cos² x
}  // namespace profiles

class WarpedMetric {
 public:
  /// Nodal table: x_j are the grid nodes, f and h sampled there. Derivatives
  /// come from the cosine (f) and sine (h) interpolants.
  static WarpedMetric from_table(GridPtr grid, const Field& f, const Field& h);
  static WarpedMetric from_profile(GridPtr grid, const Profile& profile);
  static WarpedMetric round(GridPtr grid, double lambda = 1.0);

  const SphereGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int dim() const { return grid_->dim(); }

  const Field& f() const { return f_; }
  const Field& fx() const { return fx_; }
  const Field& h() const { return h_; }
  const Field& hx() const { return hx_; }
  const Field& hxx() const { return hxx_; }

  /// Continuous profile: closed form for presets, trigonometric interpolant for tables.
  ProfileSample eval(double x) const { return profile_.eval(x); }
  const Profile& profile() const { return profile_; }

  double meridian_length() const;
  /// The metric λ²γ.
  WarpedMetric scaled(double lambda) const;

 private:
  WarpedMetric(GridPtr grid, Profile profile, Field f, Field fx, Field h, Field hx, Field hxx);
  void validate() const;

  GridPtr grid_;
  Profile profile_;
  Field f_, fx_, h_, hx_, hxx_;
};

WarpedMetric to_warped(GridPtr grid, const RoundMetric& metric);

Field laplace_beltrami(const SphereGrid& grid, const RoundMetric& metric, const Field& F);
Field laplace_beltrami(const WarpedMetric& metric, const Field& F);

Field scalar_curvature(const SphereGrid& grid, const RoundMetric& metric);
Field scalar_curvature(const WarpedMetric& metric);
/// K = R/2 for d = 2.
Field gauss_curvature(const WarpedMetric& metric);

/// Scalar curvature of F²dx² + G²γ_{S^{d−1}} from nodal derivative data;
/// pole values are extrapolated from the interior.
Field warped_scalar_curvature(int d, const Field& F, const Field& Fx, const Field& G,
                              const Field& Gx, const Field& Gxx);

/// dμ_γ = J dω with J = f (h / sin x)^{d−1}.
Field volume_density(const WarpedMetric& metric);
double integrate_metric(const WarpedMetric& metric, const Field& F);
double area(const WarpedMetric& metric);

/// ∫ K dμ for d = 2 by composite Gauss–Legendre on the continuous profile,
/// splitting at the profile breaks.
double gauss_bonnet_integral(const WarpedMetric& metric, int panels_per_piece = 16);
/// Same integral with the grid quadrature.
double gauss_bonnet_integral_grid(const WarpedMetric& metric);

/// Composite 20-point Gauss–Legendre over [0,π] respecting the breaks.
double integrate_profile(const Profile& profile, const std::function<double(double)>& g,
                         int panels_per_piece = 16);

/// Gauss curvature of the continuous profile at an interior x (d = 2).
double profile_gauss_curvature(const ProfileSample& s);

}  // namespace fillin
