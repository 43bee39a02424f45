#include "fillin/warped_metric.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fillin {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace profiles {

Profile round(double lambda) {
  if (!(lambda > 0)) throw PreconditionError("round profile needs λ > 0");
  return {[lambda](double x) {
            const double s = std::sin(x), c = std::cos(x);
            return ProfileSample{lambda, 0.0, lambda * s, lambda * c, -lambda * s};
          },
          {}};
}

Profile spheroid(double a, double c) {
  if (!(a > 0 && c > 0)) throw PreconditionError("spheroid needs positive axes");
  return {[a, c](double x) {
            const double s = std::sin(x), co = std::cos(x);
            const double f = std::sqrt(a * a * co * co + c * c * s * s);
            return ProfileSample{f, (c * c - a * a) * s * co / f, a * s, a * co, -a * s};
          },
          {}};
}

Profile capped_cylinder(double band, double r) {
  if (!(band >= 0 && r > 0)) throw PreconditionError("capped cylinder needs band ≥ 0, r > 0");
  const double L = band + kPi * r;
  const double s1 = 0.5 * kPi * r;
  const double s2 = L - s1;
  const double scale = L / kPi;
  Profile p;
  p.eval = [=](double x) {
    const double s = scale * x;
    ProfileSample out{scale, 0.0, r, 0.0, 0.0};
    if (s <= s1) {
      out.h = r * std::sin(s / r);
      out.hx = scale * std::cos(s / r);
      out.hxx = -scale * scale / r * std::sin(s / r);
    } else if (s >= s2) {
      out.h = r * std::sin((L - s) / r);
      out.hx = -scale * std::cos((L - s) / r);
      out.hxx = -scale * scale / r * std::sin((L - s) / r);
    }
    return out;
  };
  if (band > 0) p.breaks = {kPi * s1 / L, kPi * s2 / L};
  return p;
}

Profile capped_cylinder_from_box(double l, double eps1, double eps2) {
  return capped_cylinder(l - 2.0 * eps1, eps2);
}

Profile conformal(std::function<void(double, double&, double&, double&)> phi) {
  return {[phi](double x) {
            double p = 0, p1 = 0, p2 = 0;
            phi(x, p, p1, p2);
            const double e = std::exp(p), s = std::sin(x), c = std::cos(x);
            return ProfileSample{e, e * p1, e * s, e * (p1 * s + c),
                                 e * (p2 * s + p1 * p1 * s + 2.0 * p1 * c - s)};
          },
          {}};
}

Profile conformal_cos(double amplitude) {
  return conformal([amplitude](double x, double& p, double& p1, double& p2) {
    p = amplitude * std::cos(x);
    p1 = -amplitude * std::sin(x);
    p2 = -amplitude * std::cos(x);
  });
}

Profile conformal_cos2(double amplitude) {
  return conformal([amplitude](double x, double& p, double& p1, double& p2) {
    const double c = std::cos(x), s = std::sin(x);
    p = amplitude * c * c;
    p1 = -2.0 * amplitude * s * c;
    p2 = -2.0 * amplitude * (c * c - s * s);
  });
}

}  // namespace profiles

WarpedMetric::WarpedMetric(GridPtr grid, Profile profile, Field f, Field fx, Field h, Field hx,
                           Field hxx)
    : grid_(std::move(grid)),
      profile_(std::move(profile)),
      f_(std::move(f)),
      fx_(std::move(fx)),
      h_(std::move(h)),
      hx_(std::move(hx)),
      hxx_(std::move(hxx)) {
  validate();
}

WarpedMetric WarpedMetric::from_table(GridPtr grid, const Field& f, const Field& h) {
  grid->check_field(f, "WarpedMetric f");
  grid->check_field(h, "WarpedMetric h");
  const int K = grid->size() - 1;
  const double scale = h.cwiseAbs().maxCoeff();
  if (std::abs(h[0]) > 1e-12 * scale || std::abs(h[K]) > 1e-12 * scale)
    throw PreconditionError("warping radius h must vanish at both poles");
  Field hh = h;
  hh[0] = 0.0;
  hh[K] = 0.0;
  Eigen::VectorXd a = grid->cosine_coefficients(f);
  Eigen::VectorXd b = grid->sine_coefficients(hh);
  Profile p{[a, b](double x) {
              ProfileSample s;
              s.f = cosine_series(a, x, &s.fx);
              s.h = sine_series(b, x, &s.hx, &s.hxx);
              return s;
            },
            {}};
  Field fx = grid->d1_even() * f;
  Field hx = grid->d1_odd() * hh;
  Field hxx = grid->d2_odd() * hh;
  fx[0] = 0.0;
  fx[K] = 0.0;
  hxx[0] = 0.0;
  hxx[K] = 0.0;
  return WarpedMetric(grid, std::move(p), f, fx, hh, hx, hxx);
}

WarpedMetric WarpedMetric::from_profile(GridPtr grid, const Profile& profile) {
  const int n = grid->size();
  Field f(n), fx(n), h(n), hx(n), hxx(n);
  for (int i = 0; i < n; ++i) {
    const ProfileSample s = profile.eval(grid->nodes()[i]);
    f[i] = s.f;
    fx[i] = s.fx;
    h[i] = s.h;
    hx[i] = s.hx;
    hxx[i] = s.hxx;
  }
  h[0] = 0.0;
  h[n - 1] = 0.0;
  return WarpedMetric(grid, profile, f, fx, h, hx, hxx);
}

WarpedMetric WarpedMetric::round(GridPtr grid, double lambda) {
  return from_profile(std::move(grid), profiles::round(lambda));
}

void WarpedMetric::validate() const {
  const int n = grid_->size();
  for (int i = 0; i < n; ++i) {
    const bool finite = std::isfinite(f_[i]) && std::isfinite(fx_[i]) && std::isfinite(h_[i]) &&
                        std::isfinite(hx_[i]) && std::isfinite(hxx_[i]);
    if (!finite) throw PreconditionError("warped metric has non-finite data at node " + std::to_string(i));
    if (!(f_[i] > 0)) throw PreconditionError("warped metric needs f > 0 (node " + std::to_string(i) + ")");
    if (i > 0 && i < n - 1 && !(h_[i] > 0)) {
      std::ostringstream os;
      os << "warped metric has h ≤ 0 at interior node " << i << " (x = " << grid_->nodes()[i] << ")";
      throw PreconditionError(os.str());
    }
  }
  const double slope0 = hx_[0] / f_[0];
  const double slope1 = hx_[n - 1] / f_[n - 1];
  if (std::abs(slope0 - 1.0) > 1e-8 || std::abs(slope1 + 1.0) > 1e-8) {
    std::ostringstream os;
    os << "warped metric does not close smoothly: dh/dl = " << slope0 << " and " << slope1
       << " at the poles";
    throw PreconditionError(os.str());
  }
}

double WarpedMetric::meridian_length() const {
  return integrate_profile(profile_, [this](double x) { return profile_.eval(x).f; });
}

WarpedMetric WarpedMetric::scaled(double lambda) const {
  if (!(lambda > 0)) throw PreconditionError("scale factor must be positive");
  Profile p{[src = profile_.eval, lambda](double x) {
              ProfileSample s = src(x);
              s.f *= lambda;
              s.fx *= lambda;
              s.h *= lambda;
              s.hx *= lambda;
              s.hxx *= lambda;
              return s;
            },
            profile_.breaks};
  return WarpedMetric(grid_, std::move(p), lambda * f_, lambda * fx_, lambda * h_, lambda * hx_,
                      lambda * hxx_);
}

WarpedMetric to_warped(GridPtr grid, const RoundMetric& metric) {
  if (grid->dim() != metric.d) throw PreconditionError("round metric dimension differs from grid");
  return WarpedMetric::round(std::move(grid), metric.lambda);
}

Field laplace_beltrami(const SphereGrid& grid, const RoundMetric& metric, const Field& F) {
  grid.check_field(F, "laplace_beltrami");
  if (metric.d != grid.dim()) throw PreconditionError("round metric dimension differs from grid");
  Field out = grid.laplacian() * F / (metric.lambda * metric.lambda);
  if (!out.allFinite()) throw NumericalError("laplace_beltrami produced non-finite values");
  return out;
}

Field laplace_beltrami(const WarpedMetric& metric, const Field& F) {
  const SphereGrid& grid = metric.grid();
  grid.check_field(F, "laplace_beltrami");
  const int n = grid.size(), d = grid.dim();
  const Field u1 = grid.d1_even() * F;
  const Field u2 = grid.d2_even() * F;
  Field out(n);
  for (int i = 1; i < n - 1; ++i) {
    const double f = metric.f()[i];
    const double a1 = (d - 1) * metric.hx()[i] / metric.h()[i] - metric.fx()[i] / f;
    out[i] = (u2[i] + a1 * u1[i]) / (f * f);
  }
  out[0] = d * u2[0] / (metric.f()[0] * metric.f()[0]);
  out[n - 1] = d * u2[n - 1] / (metric.f()[n - 1] * metric.f()[n - 1]);
  if (!out.allFinite()) throw NumericalError("laplace_beltrami produced non-finite values");
  return out;
}

Field scalar_curvature(const SphereGrid& grid, const RoundMetric& metric) {
  if (metric.d != grid.dim()) throw PreconditionError("round metric dimension differs from grid");
  const int d = metric.d;
  return Field::Constant(grid.size(), d * (d - 1) / (metric.lambda * metric.lambda));
}

Field warped_scalar_curvature(int d, const Field& F, const Field& Fx, const Field& G,
                              const Field& Gx, const Field& Gxx) {
  const Eigen::Index n = F.size();
  Field R(n);
  for (Eigen::Index i = 1; i < n - 1; ++i) {
    const double hl = Gx[i] / F[i];
    const double hll = (Gxx[i] - Gx[i] * Fx[i] / F[i]) / (F[i] * F[i]);
    R[i] = (d - 1) * ((d - 2) * (1.0 - hl * hl) / (G[i] * G[i]) - 2.0 * hll / G[i]);
  }
  const int m = static_cast<int>(std::min<Eigen::Index>(8, (n - 1) / 2 - 1));
  std::vector<double> lo(m), hi(m);
  for (int j = 0; j < m; ++j) {
    lo[j] = R[1 + j];
    hi[j] = R[n - 2 - j];
  }
  R[0] = extrapolate_to_pole(lo.data(), m);
  R[n - 1] = extrapolate_to_pole(hi.data(), m);
  return R;
}

Field scalar_curvature(const WarpedMetric& metric) {
  Field R = warped_scalar_curvature(metric.dim(), metric.f(), metric.fx(), metric.h(), metric.hx(),
                                    metric.hxx());
  if (!R.allFinite()) throw NumericalError("scalar curvature is singular at a pole: closure violation");
  return R;
}

Field gauss_curvature(const WarpedMetric& metric) {
  if (metric.dim() != 2) throw PreconditionError("Gauss curvature needs d = 2");
  return 0.5 * scalar_curvature(metric);
}

Field volume_density(const WarpedMetric& metric) {
  const SphereGrid& grid = metric.grid();
  const int n = grid.size(), d = grid.dim();
  Field J(n);
  for (int i = 1; i < n - 1; ++i) J[i] = metric.f()[i] * std::pow(metric.h()[i] / grid.sin()[i], d - 1);
  J[0] = metric.f()[0] * std::pow(std::abs(metric.hx()[0]), d - 1);
  J[n - 1] = metric.f()[n - 1] * std::pow(std::abs(metric.hx()[n - 1]), d - 1);
  return J;
}

double integrate_metric(const WarpedMetric& metric, const Field& F) {
  metric.grid().check_field(F, "integrate_metric");
  return metric.grid().integrate(F.cwiseProduct(volume_density(metric)));
}

double area(const WarpedMetric& metric) {
  return integrate_metric(metric, Field::Ones(metric.grid().size()));
}

double profile_gauss_curvature(const ProfileSample& s) {
  return -(s.hxx - s.hx * s.fx / s.f) / (s.f * s.f * s.h);
}

double integrate_profile(const Profile& profile, const std::function<double(double)>& g,
                         int panels_per_piece) {
  std::vector<double> cuts{0.0};
  for (double b : profile.breaks)
    if (b > 0 && b < kPi) cuts.push_back(b);
  cuts.push_back(kPi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    const double w = (b - a) / panels_per_piece;
    for (int k = 0; k < panels_per_piece; ++k) {
      total += boost::math::quadrature::gauss<double, 20>::integrate(g, a + k * w, a + (k + 1) * w);
    }
  }
  return total;
}

double gauss_bonnet_integral(const WarpedMetric& metric, int panels_per_piece) {
  if (metric.dim() != 2) throw PreconditionError("Gauss–Bonnet check needs d = 2");
  const Profile& p = metric.profile();
  return 2.0 * kPi * integrate_profile(
                         p,
                         [&p](double x) {
                           const ProfileSample s = p.eval(x);
                           return profile_gauss_curvature(s) * s.f * s.h;
                         },
                         panels_per_piece);
}

double gauss_bonnet_integral_grid(const WarpedMetric& metric) {
  return integrate_metric(metric, gauss_curvature(metric));
}

}  // namespace fillin
