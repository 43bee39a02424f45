#pragma once

#include "fillin/quasi_spherical.hpp"

#include <vector>

namespace fillin {

struct CobordismOptions {
  /// Output stations; 0 picks 8(N−1)+1 for grid size N.
  int stations = 0;
  /// Order of the u_t differences used to verify R_g ≡ δ.
  int reconstruction_order = 4;
  SolverOptions solver;
};

struct CobordismResult {
  CollarSolution collar;
  Field h0;   // −H₀: inner boundary mean curvature w.r.t. the outward normal (opposite ∂_t)
  Field h1;   // H₁: outer boundary mean curvature w.r.t. the outward normal (along ∂_t)
  double delta = 0;
  double epsilon = 0;
  double M = 0;
  double residual = 0;        // max|R_g − δ| over interior stations
  double min_h1 = 0;
  double h1_lower_bound = 0;  // ε⁻¹e^{−M} min H̄₁
  bool h1_exceeds_target = false;
};

/// Collar over γ_t = (1−t)γ₀ + tγ₁ with R_g ≡ δ and u(·,0) ≡ ε.
CobordismResult build_psc_cobordism(const WarpedMetric& g0, const WarpedMetric& g1, double delta,
                                    const Field& h_target, double eps, const CobordismOptions& opts = {});
CobordismResult build_psc_cobordism(GridPtr grid, const RoundMetric& g0, const RoundMetric& g1, double delta,
                                    const Field& h_target, double eps, const CobordismOptions& opts = {});

/// γ₁ > γ₀ as quadratic forms at every node (pole rows compare h_x²).
bool metric_dominates(const WarpedMetric& g1, const WarpedMetric& g0);

struct MonotoneCollarReport {
  CollarSolution collar;
  double total_initial = 0;   // ∫H dμ_{γ₀}
  double total_final = 0;     // ∫H₁ dμ_{γ̄₁}
  bool strict_increase = false;
  MeanCurvatureSeries series;
};

/// Wraps γ̄_t = e^{2εt}γ_t and solves f = 0 with u(·,0) = H̄₀/H.
MonotoneCollarReport monotone_increase_collar(PathPtr path, double eps, const Field& H,
                                              const SolverOptions& opts = {});

struct ThresholdSample {
  double lambda0 = 0;
  double M = 0;
  bool admissible = false;   // ε ≤ e^{−M/2} and the collar solved
  double C = 0;              // max(−h0) = max H̄₀/ε
  double min_h1 = 0;
  double euclidean_H = 0;    // mean curvature of the λ₀-sphere in R³
  bool h1_exceeds_euclidean = false;
  double residual = 0;
};

struct ThresholdResult {
  double C = 0;
  double lambda0 = 0;
  std::vector<ThresholdSample> sweep;
};

struct ThresholdOptions {
  int sweep_points = 8;       // λ₀ = λ_min·2^{k/4}, k = 1..sweep_points
  CobordismOptions cobordism;
};

/// Smallest λ with λ²γ_std ≥ γ.
double minimal_round_scale(const WarpedMetric& g);

/// Threshold for a single round embedding of scale λ₀.
ThresholdSample no_fill_in_threshold_at(const WarpedMetric& g, double lambda0, double delta, double eps,
                                        const CobordismOptions& opts = {});
/// Minimum of the threshold over the λ₀ sweep.
ThresholdResult no_fill_in_threshold(const WarpedMetric& g, double delta, double eps,
                                     const ThresholdOptions& opts = {});

/// (n−1)ω_{n−1}λ^{n−2}√(1 − Kλ²/(n(n−1))) with n = dim + 1, after checking λ²γ_std > γ and
/// K ≤ min R along the linear path from γ to λ²γ_std.
double spin_bound(const WarpedMetric& g, double lambda, double K, int path_samples = 33);
double spin_bound(GridPtr grid, const RoundMetric& g, double lambda, double K);
/// The closed form alone.
double spin_bound_value(int n, double lambda, double K);

}  // namespace fillin
