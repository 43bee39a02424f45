#pragma once

#include "fillin/quasi_spherical.hpp"

#include <string>
#include <vector>

namespace fillin {

/// (Σ, γ, H) with H the mean curvature w.r.t. the outward normal; Σ = S^{n−1}, n = dim + 1.
struct BartnikTriple {
  WarpedMetric metric;
  Field H;
  int n() const { return metric.dim() + 1; }
};

BartnikTriple round_triple(GridPtr grid, double lambda, double H);

/// (n−1)ω_{n−1}λ^{n−2}; conditional on the positive mass theorem for AF manifolds.
double lambda_plus_round(int n, double lambda);
/// (n−1)ω_{n−1}λ^{n−2}√(1 − κλ²) for κ < 0.
double lambda_plus_kappa_round(int n, double lambda, double kappa);

struct ByReport {
  double lambda_plus = 0;
  std::string provenance;   // where the Λ₊ value comes from
  double total_mean_curvature = 0;
  double m_by = 0;
};

/// m_BY = (Λ₊ − ∫H dμ)/((n−1)ω_{n−1}).
ByReport brown_york(const BartnikTriple& data, double lambda_plus, const std::string& provenance = "closed-form round");

/// Coordinate sphere |x| = ρ in the isotropic Schwarzschild metric φ^{4/(n−2)}δ, φ = 1 + m/(2ρ^{n−2}).
struct SchwarzschildSphere {
  int n = 3;
  double m = 0;
  double rho = 0;             // isotropic radius
  double areal_radius = 0;    // ρφ^{2/(n−2)}
  double H = 0;               // from the metric with a numerical radial derivative
  double H_closed = 0;        // exact: (n−1)(1 − m/(ρ^{n−2}φ))/(ρφ^{2/(n−2)})
  double H_expansion = 0;     // ((n−1)/ρ)(1 − ((n−1)/(n−2)) m/ρ^{n−2})
  double total_mean_curvature = 0;   // H·|S_ρ|
  double m_by_exact = 0;      // m + m²/(2ρ^{n−2})
};

SchwarzschildSphere schwarzschild_sphere(int n, double m, double rho);
/// Inverse of the areal radius map.
double isotropic_radius(int n, double m, double areal_radius);
/// Same sphere as a Bartnik triple on the given grid (dim = n − 1).
BartnikTriple schwarzschild_sphere_data(GridPtr grid, double m, double rho);

struct LargeSphereSeries {
  std::vector<double> r;          // areal radii
  std::vector<double> m_by;
  std::vector<double> reference;  // exact values from the closed forms
  double slope = 0;               // log-log slope of |m_BY − m| against r
  double C = 0;                   // max r·|m_BY − m|
};

/// m_BY of areal-radius-r coordinate spheres, with H from the isotropic metric.
LargeSphereSeries by_large_sphere_limit(int n, double m, const std::vector<double>& areal_radii);

struct MassCurve {
  std::vector<double> r;
  std::vector<double> m;              // (1/ω)sinh^{n−2}r cosh²r ∫(1 − u⁻¹)dω
  std::vector<double> dm_formula;     // −(1/(2ω))sinh^{n−3}r cosh r (n sinh²r + n − 2)∫u⁻¹(u − 1)²dω
  std::vector<double> dm_fd;          // five-point differences of m
  std::vector<char> resolvable;       // stations with |m′| ≥ window·max|m′|
  double max_identity_residual = 0;   // relative, over resolvable interior stations
  int resolvable_count = 0;
  double max_increase = 0;            // max_k m(r_{k+1}) − m(r_k)
  double limit = 0;                   // m at the last station
  double limit_from_v = 0;            // 2^{−n}∫v dω / ω
  double limit_relative_error = 0;
  /// Value of m(r₀) with the ω_{n−1} factor of the bare sphere integral kept.
  double m0_unnormalized = 0;
};

/// The derivative identity is checked where |m′| ≥ window·max|m′|.
MassCurve ah_mass_curve(const HyperbolicSolution& sol, double window = 1e-4);

struct AhBoundaryValue {
  double total = 0;   // ∫H dμ_{λ²γ_std}
  double bound = 0;   // (n−1)ω_{n−1}λ^{n−2}√(1+λ²)
  bool within = false;
};

AhBoundaryValue ah_boundary_value(const SphereGrid& grid, double lambda, const Field& H);

}  // namespace fillin
