#pragma once

#include "fillin/metric_path.hpp"

#include <string>
#include <variant>
#include <vector>

namespace fillin {

/// Prescribed scalar curvature f of g = u²dt² + γ_t.
class TargetCurvature {
 public:
  struct Background {};
  static TargetCurvature constant(double value);
  static TargetCurvature field(Field values);
  /// f = R_ḡ of the path itself.
  static TargetCurvature background();

  Field at(const Slice& slice) const;
  bool is_constant() const { return std::holds_alternative<double>(v_); }
  double constant_value() const;
  std::string describe() const;

 private:
  explicit TargetCurvature(std::variant<double, Field, Background> v) : v_(std::move(v)) {}
  std::variant<double, Field, Background> v_;
};

enum class Scheme { ExplicitRK4, ImplicitDiffusion };

struct SolverOptions {
  Scheme scheme = Scheme::ExplicitRK4;
  double dt_safety = 0.8;
  /// Additional cap on the internal step; 0 means none.
  double dt_max = 0.0;
  /// Steps below dt_min·(span) are reported as stiffness.
  double dt_min = 1e-12;
  /// Output stations; when empty, `stations` equally spaced times are used.
  std::vector<double> station_times;
  int stations = 65;
  double tolerance = 1e-6;
  long max_steps = 50'000'000;
};

enum class SolveStatus { Ok, PositivityLoss, StepUnderflow };
std::string to_string(SolveStatus s);

struct BoundCheck {
  bool applicable = false;
  bool satisfied = false;
  double M = 0;
  double eps = 0;
  double lower = 0, upper = 0;  // ½e^{−M}ε and e^{M}ε
  double min_u = 0, max_u = 0;
};

struct CollarSolution {
  PathPtr path;
  TargetCurvature f = TargetCurvature::constant(0.0);
  std::vector<double> t;
  std::vector<Field> u;
  SolveStatus status = SolveStatus::Ok;
  std::string message;
  long steps = 0;
  double min_dt = 0, max_dt = 0;
  BoundCheck bounds;

  const SphereGrid& grid() const { return path->grid(); }
  int last_valid_station() const { return static_cast<int>(t.size()) - 1; }
  bool ok() const { return status == SolveStatus::Ok; }
};

/// H̄_t u_t = u²Δ_{γ_t}u + ½(f − R_{γ_t})u³ + ½(R_{γ_t} − R_ḡ)u with u(·,t_0) = u0.
CollarSolution solve_generic(PathPtr path, const TargetCurvature& f, const Field& u0,
                             const SolverOptions& opts = {});

/// max over the station lattice of H̄⁻¹(|R_γ| + |R_ḡ| + |f|).
double compute_M(const MetricPath& path, const TargetCurvature& f, const std::vector<double>& times);

struct ComparisonValues {
  double v, w;
};
ComparisonValues comparison_bounds(double M, double eps, double t);

struct Reconstruction {
  std::vector<Field> R;
  double max_residual = 0;           // interior stations
  double max_residual_all = 0;       // including the span ends
};
/// R_g = u⁻²R_ḡ + (1 − u⁻²)R_γ + 2u⁻³u_tH̄ − 2u⁻¹Δ_γu with u_t from centered differences
/// of the given order (2 or 4), one-sided at the span ends.
Reconstruction reconstruct_scalar_curvature(const CollarSolution& sol, int order = 2);

struct HyperbolicSolution {
  CollarSolution collar;
  std::vector<Field> w;   // u − 1, carried separately for precision
  double r0 = 0;
  Field v;                // mass aspect: w ≈ e^{−nr}(v + c e^{−2r})
  Field c;
  double fit_residual = 0;
  bool fit_ok = false;
};

struct HyperbolicOptions {
  double dt_safety = 0.8;
  double station_spacing = 0.01;
  double fit_window = 1.0;
  double fit_tolerance = 1e-6;
};

/// sinh(2r)u_r = (2/(n−1))u²Δu − (n sinh²r + n − 2)(u³ − u) on the unit S^{n−1},
/// u(·,r₀) = (n−1)coth r₀ / H, r₀ = arcsinh λ.
HyperbolicSolution solve_hyperbolic(GridPtr grid, const Field& H, double lambda, double r_max,
                                    const HyperbolicOptions& opts = {});

/// H_t = H̄_t / u at station k.
Field slice_mean_curvature(const CollarSolution& sol, int station);

struct MeanCurvatureSeries {
  std::vector<double> t;
  std::vector<double> total;       // ∫H_t dμ_{γ_t}
  std::vector<double> predicted;   // ½∫(H̄² − |Ā|²)u⁻¹dμ + ½∫(R_γ − f)u dμ
  std::vector<double> measured;    // finite-difference derivative of total
  double max_relative_mismatch = 0;   // over interior stations
};
MeanCurvatureSeries total_mean_curvature_evolution(const CollarSolution& sol);

}  // namespace fillin
