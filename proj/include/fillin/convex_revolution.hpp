#pragma once

#include "fillin/warped_metric.hpp"

#include <string>
#include <vector>

namespace fillin {

/// Raised when a metric cannot be realized as a convex surface of revolution.
class EmbeddingError : public PreconditionError {
 public:
  enum class Kind { NegativeCurvature, SlopeObstruction };
  EmbeddingError(Kind kind, double x, double value, const std::string& what)
      : PreconditionError(what), kind(kind), x(x), value(value) {}
  Kind kind;
  double x;       // meridian parameter of the offending sample
  double value;   // K or |dρ/ds| there
};

/// Meridian curve (ρ(s), z(s)) of a convex surface of revolution, unit speed,
/// from the south pole (z = 0) to the north pole.
///
/// Samples are uniform in the metric parameter x within each smooth piece.
/// The continuous source profile is kept for quadrature.
struct RevolutionProfile {
  Profile source;
  std::vector<double> x, s, rho, z, alpha, k1, k2;
  std::vector<int> piece;
  double length = 0;   // meridian length
  double height = 0;   // z at the north pole

  /// The same profile with every length multiplied by lambda.
  RevolutionProfile scaled(double lambda) const;
  /// Radius at height z ∈ [0, height], by inverting z along the meridian.
  double radius_at_height(double zq) const;
};

RevolutionProfile embed(const WarpedMetric& metric, int samples = 2049);

double surface_area(const RevolutionProfile& p);
/// ∫(κ1 + κ2) dμ.
double total_mean_curvature(const RevolutionProfile& p);
/// ∫κ1κ2 dμ.
double total_gauss_curvature(const RevolutionProfile& p);

struct InducedMetricCheck {
  double max_f_error = 0;   // |√(ρ_x² + z_x²) − f| from differentiated samples
  double max_h_error = 0;   // |ρ − h|
};

InducedMetricCheck induced_metric_check(const RevolutionProfile& p);
double min_principal_curvature(const RevolutionProfile& p);

/// Area of the outer parallel surface at distance r.
double steiner_area(const RevolutionProfile& p, double r);

struct SteinerFit {
  double area = 0, total_mean_curvature = 0;   // direct values
  double c0 = 0, c1 = 0, c2 = 0;               // least-squares quadratic in r
  double max_relative_error = 0;               // against (area, ∫H, 4π)
};

/// Fits steiner_area over r ∈ {0, step, 2step, 3step}.
SteinerFit steiner_fit(const RevolutionProfile& p, double step = 0.1);

struct EnclosureReport {
  bool nested = false;
  double violating_height = 0;   // inner height (centred frame) where nesting fails
  double max_overlap = 0;        // max of ρ_inner − ρ_outer
  double area_inner = 0, area_outer = 0;
  double tmc_inner = 0, tmc_outer = 0;
  bool area_monotone = false;
  bool tmc_monotone = false;
};

/// Coaxial comparison with both profiles centred at mid-height.
EnclosureReport enclosure_check(const RevolutionProfile& inner, const RevolutionProfile& outer,
                                double tol = 1e-9);

struct DiameterOptions {
  int nx = 512;        // nodes along the meridian, poles included
  int nphi = 512;      // nodes in φ ∈ [0, π]
  int sources = 17;    // source points along the φ = 0 meridian
  bool estimate_error = true;
};

struct DiameterResult {
  double diameter = 0;         // max(fast-marching eccentricity, meridian length)
  double fast_marching = 0;
  double meridian_length = 0;  // pole-to-pole distance, a lower bound
  double coarse = 0;           // fast-marching value on the half-resolution grid
  double error_estimate = 0;   // |fine − coarse|, first order
};

DiameterResult diameter(const WarpedMetric& metric, const DiameterOptions& opts = {});

/// Geodesic distances from the source (x0, φ = 0) on the (x, φ) half-grid.
/// Row i holds x = iπ/(nx−1); the pole rows are constant.
std::vector<std::vector<double>> geodesic_distance(const WarpedMetric& metric, double x0, int nx,
                                                   int nphi);

struct Prop51Check {
  DiameterResult diameter;
  double two_diam = 0;
  double lambda_plus = 0;
  double twelve_pi_diam = 0;
  bool pass = false;
};

Prop51Check prop51_check(const WarpedMetric& metric, const DiameterOptions& opts = {});

struct DilationOptions {
  int modes = 6;
  int sweeps = 12;
};

struct DilationResult {
  double value = 1;          // upper bound for the dilation
  double identity_value = 1; // value for σ = id
  std::vector<double> coefficients;   // σ(x) = x + Σ c_k sin(kx)/k
  Field sigma;               // σ at the grid nodes of γa
};

/// Best two-sided bound λ⁻¹γ_b ≤ σ*γ_a ≤ λγ_b over axisymmetric reparametrizations σ.
DilationResult dilation(const WarpedMetric& ga, const WarpedMetric& gb, const DilationOptions& opts = {});
/// Same with σ fixed by its coefficients.
double dilation_for(const WarpedMetric& ga, const WarpedMetric& gb, const std::vector<double>& coefficients);

struct NamedProfile {
  std::string name;
  Profile profile;
};

/// Ten nonnegatively curved profiles, including the capped cylinder.
std::vector<NamedProfile> convex_corpus();

struct NestedPair {
  std::string name;
  Profile inner, outer;
};

/// Ten coaxially nested pairs.
std::vector<NestedPair> nested_corpus();

}  // namespace fillin
