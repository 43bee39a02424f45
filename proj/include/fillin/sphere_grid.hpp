#pragma once

#include <Eigen/Dense>

#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fillin {

/// Values of an axisymmetric function at the grid nodes.
using Field = Eigen::VectorXd;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Volume of the unit d-sphere.
double sphere_volume(int d);

/// Uniform grid θ_i = iπ/(N−1) on [0,π] for SO(d)-invariant functions on S^d.
///
/// Even functions of θ are represented by their cosine interpolant, odd ones
/// (vanishing at both poles) by their sine interpolant. Quadrature weights
/// integrate every cosine polynomial of degree ≤ N−1 exactly against
/// sin^{d−1}θ dθ·ω_{d−1}.
class SphereGrid {
 public:
  SphereGrid(int d, int n);

  int dim() const { return d_; }
  int size() const { return n_; }
  double spacing() const { return dtheta_; }
  const Field& nodes() const { return theta_; }
  const Field& weights() const { return weights_; }

  /// cot θ at interior nodes, 0 at the poles.
  const Field& cot() const { return cot_; }
  /// sin θ at every node.
  const Field& sin() const { return sin_; }

  double integrate(const Field& values) const;

  /// Derivatives of the cosine interpolant of an even function.
  const Eigen::MatrixXd& d1_even() const;
  const Eigen::MatrixXd& d2_even() const;
  /// Derivatives of the sine interpolant of an odd function.
  const Eigen::MatrixXd& d1_odd() const;
  const Eigen::MatrixXd& d2_odd() const;
  /// Laplacian of the unit round metric on S^d acting on even functions.
  const Eigen::MatrixXd& laplacian() const;

  /// Coefficients a_k with F(θ) = Σ_{k=0}^{N−1} a_k cos kθ.
  Eigen::VectorXd cosine_coefficients(const Field& values) const;
  /// Coefficients b_k with F(θ) = Σ_{k=1}^{N−2} b_k sin kθ (entry 0 unused).
  Eigen::VectorXd sine_coefficients(const Field& values) const;

  void check_field(const Field& values, const char* what) const;

 private:
  void build_even() const;
  void build_odd() const;

  int d_;
  int n_;
  double dtheta_;
  Field theta_;
  Field weights_;
  Field cot_;
  Field sin_;
  Eigen::MatrixXd to_cos_;

  mutable std::once_flag even_once_;
  mutable std::once_flag odd_once_;
  mutable Eigen::MatrixXd d1e_, d2e_, lap_;
  mutable Eigen::MatrixXd d1o_, d2o_, to_sin_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Rejects N < 16 and d outside [2, 6].
GridPtr build_grid(int d, int n);

double integrate(const SphereGrid& grid, const Field& values);

/// Evaluation of cosine/sine series at arbitrary points.
double cosine_series(const Eigen::VectorXd& a, double x, double* dx = nullptr,
                     double* dxx = nullptr);
double sine_series(const Eigen::VectorXd& b, double x, double* dx = nullptr,
                   double* dxx = nullptr);

/// Value at a pole of an even function known at the four nearest interior
/// nodes, by polynomial extrapolation in θ².
double extrapolate_to_pole(double v1, double v2, double v3, double v4);
/// Same with the m nearest interior nodes v[0..m−1] (v[j] at θ = (j+1)Δ).
double extrapolate_to_pole(const double* v, int m);

}  // namespace fillin
