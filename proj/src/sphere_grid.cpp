#include "fillin/sphere_grid.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace fillin {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int m, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (m - j + i) / i;
  return r;
}

// ∫_0^π cos(aθ) dθ and ∫_0^π sin(aθ) dθ for integer a.
double cos_integral(int a) { return a == 0 ? kPi : 0.0; }
double sin_integral(int a) {
  if (a == 0) return 0.0;
  return (std::abs(a) % 2 == 1) ? 2.0 / a : 0.0;
}

// ∫_0^π cos(kθ) sin^m(θ) dθ, expanding sin^m into exponentials.
double cos_sin_moment(int k, int m) {
  std::complex<double> acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    const int p = m - 2 * j;
    const double c = binomial(m, j) * ((j % 2 == 0) ? 1.0 : -1.0);
    const double re = 0.5 * (cos_integral(k - p) + cos_integral(k + p));
    const double im = 0.5 * (sin_integral(p + k) + sin_integral(p - k));
    acc += c * std::complex<double>(re, im);
  }
  acc /= std::pow(std::complex<double>(0.0, 2.0), m);
  return acc.real();
}

}  // namespace

double sphere_volume(int d) {
  return 2.0 * std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

SphereGrid::SphereGrid(int d, int n) : d_(d), n_(n) {
  if (d < 2 || d > 6) throw PreconditionError("sphere dimension must lie in [2, 6]");
  if (n < 16) throw PreconditionError("grid needs at least 16 nodes");
  const int K = n - 1;
  dtheta_ = kPi / K;
  theta_.resize(n);
  cot_.setZero(n);
  sin_.resize(n);
  for (int i = 0; i < n; ++i) {
    theta_[i] = i * dtheta_;
    sin_[i] = std::sin(theta_[i]);
  }
  theta_[K] = kPi;
  sin_[0] = 0.0;
  sin_[K] = 0.0;
  for (int i = 1; i < K; ++i) cot_[i] = std::cos(theta_[i]) / sin_[i];

  // DCT-I: values -> cosine coefficients.
  to_cos_.resize(n, n);
  for (int k = 0; k <= K; ++k) {
    const double ck = (k == 0 || k == K) ? 2.0 : 1.0;
    for (int i = 0; i <= K; ++i) {
      const double ei = (i == 0 || i == K) ? 0.5 : 1.0;
      const long ki = static_cast<long>(k) * i % (2L * K);
      to_cos_(k, i) = 2.0 / (K * ck) * ei * std::cos(ki * kPi / K);
    }
  }

  Eigen::VectorXd moments(n);
  for (int k = 0; k <= K; ++k) moments[k] = cos_sin_moment(k, d - 1);
  weights_ = sphere_volume(d - 1) * (to_cos_.transpose() * moments);
}

void SphereGrid::build_even() const {
  std::call_once(even_once_, [this] {
    const int K = n_ - 1;
    Eigen::MatrixXd e1(n_, n_), e2(n_, n_);
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k <= K; ++k) {
        const long ki = static_cast<long>(k) * i % (2L * K);
        const double arg = ki * kPi / K;
        e1(i, k) = -k * std::sin(arg);
        e2(i, k) = -double(k) * k * std::cos(arg);
      }
    }
    e1.row(0).setZero();
    e1.row(K).setZero();
    d1e_ = e1 * to_cos_;
    d2e_ = e2 * to_cos_;
    lap_ = d2e_;
    for (int i = 1; i < K; ++i) lap_.row(i) += (d_ - 1) * cot_[i] * d1e_.row(i);
    lap_.row(0) = d_ * d2e_.row(0);
    lap_.row(K) = d_ * d2e_.row(K);
  });
}

void SphereGrid::build_odd() const {
  std::call_once(odd_once_, [this] {
    const int K = n_ - 1;
    to_sin_.setZero(n_, n_);
    for (int k = 1; k < K; ++k) {
      for (int j = 1; j < K; ++j) {
        const long kj = static_cast<long>(k) * j % (2L * K);
        to_sin_(k, j) = 2.0 / K * std::sin(kj * kPi / K);
      }
    }
    Eigen::MatrixXd o1(n_, n_), o2(n_, n_);
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k <= K; ++k) {
        const long ki = static_cast<long>(k) * i % (2L * K);
        const double arg = ki * kPi / K;
        o1(i, k) = k * std::cos(arg);
        o2(i, k) = -double(k) * k * std::sin(arg);
      }
    }
    o2.row(0).setZero();
    o2.row(K).setZero();
    d1o_ = o1 * to_sin_;
    d2o_ = o2 * to_sin_;
  });
}

const Eigen::MatrixXd& SphereGrid::d1_even() const {
  build_even();
  return d1e_;
}
const Eigen::MatrixXd& SphereGrid::d2_even() const {
  build_even();
  return d2e_;
}
const Eigen::MatrixXd& SphereGrid::laplacian() const {
  build_even();
  return lap_;
}
const Eigen::MatrixXd& SphereGrid::d1_odd() const {
  build_odd();
  return d1o_;
}
const Eigen::MatrixXd& SphereGrid::d2_odd() const {
  build_odd();
  return d2o_;
}

Eigen::VectorXd SphereGrid::cosine_coefficients(const Field& values) const {
  check_field(values, "cosine_coefficients");
  return to_cos_ * values;
}

Eigen::VectorXd SphereGrid::sine_coefficients(const Field& values) const {
  check_field(values, "sine_coefficients");
  build_odd();
  return to_sin_ * values;
}

double SphereGrid::integrate(const Field& values) const {
  check_field(values, "integrate");
  return weights_.dot(values);
}

void SphereGrid::check_field(const Field& values, const char* what) const {
  if (values.size() != n_) {
    throw PreconditionError(std::string(what) + ": field has " + std::to_string(values.size()) +
                            " values but the grid has " + std::to_string(n_) + " nodes");
  }
}

GridPtr build_grid(int d, int n) { return std::make_shared<const SphereGrid>(d, n); }

double integrate(const SphereGrid& grid, const Field& values) { return grid.integrate(values); }

double cosine_series(const Eigen::VectorXd& a, double x, double* dx, double* dxx) {
  double v = 0.0, v1 = 0.0, v2 = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double c = std::cos(k * x), s = std::sin(k * x);
    v += a[k] * c;
    v1 -= k * a[k] * s;
    v2 -= double(k) * k * a[k] * c;
  }
  if (dx) *dx = v1;
  if (dxx) *dxx = v2;
  return v;
}

double sine_series(const Eigen::VectorXd& b, double x, double* dx, double* dxx) {
  double v = 0.0, v1 = 0.0, v2 = 0.0;
  for (Eigen::Index k = 1; k < b.size(); ++k) {
    const double c = std::cos(k * x), s = std::sin(k * x);
    v += b[k] * s;
    v1 += k * b[k] * c;
    v2 -= double(k) * k * b[k] * s;
  }
  if (dx) *dx = v1;
  if (dxx) *dxx = v2;
  return v;
}

double extrapolate_to_pole(double v1, double v2, double v3, double v4) {
  // Lagrange weights at s = 0 for nodes s_j = j², j = 1..4.
  return (56.0 * v1 - 28.0 * v2 + 8.0 * v3 - v4) / 35.0;
}

double extrapolate_to_pole(const double* v, int m) {
  double acc = 0.0;
  for (int j = 1; j <= m; ++j) {
    double w = 1.0;
    for (int k = 1; k <= m; ++k)
      if (k != j) w *= double(k * k) / double(k * k - j * j);
    acc += w * v[j - 1];
  }
  return acc;
}

}  // namespace fillin
