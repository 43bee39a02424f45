#pragma once

#include "fillin/warped_metric.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace fillin {

/// Axisymmetric metric γ = e^{2u}dθ² + e^{2v}sin²θ dφ² on S².
/// Conformal metrics e^{2φ}γ_std have u = v = φ.
struct SurfaceMetric {
  GridPtr grid;
  Field u, v;

  static SurfaceMetric conformal(GridPtr grid, const Field& phi);
  static SurfaceMetric conformal(GridPtr grid, const std::function<double(double)>& phi);
  static SurfaceMetric round(GridPtr grid, double lambda = 1.0);
  static SurfaceMetric from_warped(const WarpedMetric& metric);

  WarpedMetric to_warped() const;
  bool is_conformal(double tol = 0.0) const;
  Field gauss_curvature() const;
  double area() const;
  /// The metric c·γ.
  SurfaceMetric scaled(double c) const;
};

using ConformalMetric = SurfaceMetric;

/// θ-component of X_ḡ(g) = Σ(∇^ḡ_{e_i}e_i − ∇^g_{e_i}e_i); zero at the poles.
Field deturck_field(const SurfaceMetric& g, const SurfaceMetric& gbar);

/// max over the sphere of the pointwise norm of g − h measured by ref.
double c0_distance(const SurfaceMetric& g, const SurfaceMetric& h, const SurfaceMetric& ref);
/// Pointwise ḡ-norm of ∇^ḡ(g − ḡ), maximized over the sphere.
double c1_distance(const SurfaceMetric& g, const SurfaceMetric& gbar);

struct FlowOptions {
  double dt = 1e-3;             // upper bound; the stability limit may be smaller
  double dt_safety = 0.8;
  int stations = 33;            // uniform stations in [0, T] when station_times is empty
  std::vector<double> station_times;
};

struct FlowPath {
  std::vector<double> t;
  std::vector<SurfaceMetric> metrics;
  std::vector<SurfaceMetric> background;   // co-evolved background, when there is one
  std::vector<double> derivative_norm;     // ‖∂_tγ‖ measured by the reference metric
  std::vector<double> min_curvature;       // min K
  std::vector<int> leg;
  double kappa = 0;                        // min R of the initial metric
  double max_bound_violation = 0;          // max of κ/(1 − κt) − min R
  int steps = 0;
  bool ok = true;
  std::string message;
  double failure_s = std::numeric_limits<double>::quiet_NaN();
  double failure_distance = std::numeric_limits<double>::quiet_NaN();
  // connecting-path derivative fit on the first leg
  double derivative_exponent = std::numeric_limits<double>::quiet_NaN();
  double derivative_constant = std::numeric_limits<double>::quiet_NaN();

  bool psc() const;
};

/// 2-D Ricci flow ∂_tγ = −2Kγ. Throws PreconditionError when T reaches the
/// extinction time |Σ|/(8π).
FlowPath ricci_flow(const SurfaceMetric& g0, double T, const FlowOptions& opts = {});

enum class BackgroundKind { Fixed, RicciFlow };

/// ∂_tg = −2Ric_g − L_X g with X = X_ḡ(g). The background is either the fixed
/// metric ḡ₀ or the Ricci flow from ḡ₀, integrated alongside g.
FlowPath ricci_deturck_flow(const SurfaceMetric& g0, const SurfaceMetric& gbar0, double T,
                            BackgroundKind kind = BackgroundKind::RicciFlow, const FlowOptions& opts = {});

struct ConnectingPathOptions {
  double T = 0.05;
  int stations_per_leg = 17;
  FlowOptions flow;
};

/// Three legs: the Ricci–DeTurck flow from γ over the Ricci flow of γ₀, the
/// linear segment at time T, and the background flow run backwards.
FlowPath psc_connecting_path(const SurfaceMetric& gamma, const SurfaceMetric& gamma0,
                             const ConnectingPathOptions& opts = {});

struct MonotonePathOptions {
  int stations = 33;
  FlowOptions flow;
};

/// γ₁(s) = (1 + ε̃s/s₀)γ(s^N) on [0, s₀], γ(τ) the Ricci–DeTurck flow of γ over the
/// round background. derivative_norm holds the smallest eigenvalue of dγ₁/ds
/// relative to γ₁(s).
FlowPath monotone_scaled_path(const SurfaceMetric& gamma, double eps_tilde, double s0, int n_exp = 5,
                              const MonotonePathOptions& opts = {});

struct MonotoneSearch {
  double s0 = 0;
  FlowPath path;
  std::vector<double> tried;
};

/// Halves s₀ from s0_start until the scaled path is monotone.
MonotoneSearch find_monotone_s0(const SurfaceMetric& gamma, double eps_tilde, double s0_start = 0.5,
                                int n_exp = 5, const MonotonePathOptions& opts = {});

struct SandwichReport {
  double s0 = 0;
  double lambda_gamma = 0;        // Λ₊(γ)
  double lambda_step1 = 0;        // Λ₊((1+ε̃)γ(s₀^N))
  double lambda_flowed = 0;       // Λ₊(γ(s₀^N))
  double lambda_step2 = 0;        // Λ₊((1+ε̃)γ̄(s₀^N))
  double lambda_std = 0;          // Λ₊(γ_std)
  double step1_min_eigenvalue = 0;
  double step2_min_eigenvalue = 0;
  bool chain_holds = false;       // Λ₊(γ) ≤ lambda_step1 and lambda_flowed ≤ lambda_step2
  bool bound_holds = false;       // Λ₊(γ) ≤ (1+ε̃)Λ₊(γ_std)(1 + 1e−3)
};

/// Both steps for n = 2, with Λ₊ from the convex embedding.
SandwichReport sandwich_check(const SurfaceMetric& gamma, double eps_tilde, int n_exp = 5,
                              const MonotonePathOptions& opts = {});

}  // namespace fillin
