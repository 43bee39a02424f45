#pragma once

#include "fillin/warped_metric.hpp"

#include <memory>
#include <string>
#include <variant>

namespace fillin {

/// Geometry of the slice Σ×{t} of ḡ = dt² + γ_t.
///
/// γ_t = F²dx² + G²γ_{S^{d−1}}. The second fundamental form Ā_t = ½∂_tγ_t has
/// eigenvalue kx along the meridian and kh (multiplicity d−1) along the parallels.
struct Slice {
  double t = 0;
  Field F, G;
  Field R;          // R_{γ_t}
  Field lap_a2;     // Δ_{γ_t}u = lap_a2·u'' + lap_a1·u'
  Field lap_a1;
  Field kx, kh;     // eigenvalues of Ā_t
  Field dkx, dkh;   // their t-derivatives
  Field H;          // H̄_t
  Field Asq;        // |Ā_t|²
  Field dH;         // ∂_tH̄_t
  Field Rbg;        // R_ḡ
  Field J;          // dμ_{γ_t} = J dω
};

Field apply_laplacian(const SphereGrid& grid, const Slice& slice, const Field& u);

class MetricPath {
 public:
  struct LinearWarped {
    WarpedMetric g0, g1;
  };
  struct RoundScaling {
    double a, b;
  };
  struct ExponentialScaled {
    std::shared_ptr<const MetricPath> inner;
    double eps;
  };
  struct EuclideanFoliation {};
  struct HyperbolicFoliation {};
  using Variant =
      std::variant<LinearWarped, RoundScaling, ExponentialScaled, EuclideanFoliation, HyperbolicFoliation>;

  /// γ_t = (1−t)γ₀ + tγ₁ on f², h², t ∈ [0,1].
  static MetricPath linear_warped(const WarpedMetric& g0, const WarpedMetric& g1);
  /// γ_t = ((1−t)a² + tb²)γ_std, t ∈ [0,1].
  static MetricPath round_scaling(GridPtr grid, double a, double b);
  /// γ̄_t = e^{2εt}γ_t over the domain of the inner path.
  static MetricPath exponential_scaled(std::shared_ptr<const MetricPath> inner, double eps);
  /// γ_r = r²γ_std for r ∈ [r0, r1].
  static MetricPath euclidean(GridPtr grid, double r0, double r1);
  /// γ_r = sinh²r γ_std for r ∈ [r0, r1].
  static MetricPath hyperbolic(GridPtr grid, double r0, double r1);

  const SphereGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  const Variant& variant() const { return v_; }
  std::string name() const;

  Slice slice(double t) const;

 private:
  MetricPath(GridPtr grid, Variant v, double t0, double t1);
  GridPtr grid_;
  Variant v_;
  double t0_, t1_;
};

using PathPtr = std::shared_ptr<const MetricPath>;

struct SliceGeometry {
  Field H, Asq, dH;
};

SliceGeometry slice_geometry(const MetricPath& path, double t);
Field background_scalar_curvature(const MetricPath& path, double t);

}  // namespace fillin
