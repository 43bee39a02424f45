#include "fillin/convex_revolution.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace fillin {

namespace {

constexpr double kPi = std::numbers::pi;
using Gauss = boost::math::quadrature::gauss<double, 20>;

std::vector<double> piece_cuts(const Profile& p) {
  std::vector<double> cuts{0.0};
  for (double b : p.breaks)
    if (b > 0 && b < kPi) cuts.push_back(b);
  cuts.push_back(kPi);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

// Meridian quantities at an interior sample; sin α from the factored form to
// keep relative accuracy near the poles.
struct Local {
  double rho, rho_s, rho_ss, sin_a;
};

Local local(const ProfileSample& p) {
  Local l;
  l.rho = p.h;
  l.rho_s = p.hx / p.f;
  l.rho_ss = (p.hxx - p.hx * p.fx / p.f) / (p.f * p.f);
  l.sin_a = std::sqrt(std::max(0.0, (p.f - p.hx) * (p.f + p.hx))) / p.f;
  return l;
}

double kappa1(const Local& l) { return l.sin_a > 0 ? -l.rho_ss / l.sin_a : 0.0; }

// dz/dx = f sin α
double z_rate(const ProfileSample& p) { return std::sqrt(std::max(0.0, (p.f - p.hx) * (p.f + p.hx))); }

// Derivative at t of the Lagrange interpolant through (nodes, values).
double lagrange_slope(const double* nodes, const double* values, int m, double t) {
  double out = 0;
  for (int k = 0; k < m; ++k) {
    double denom = 1;
    for (int j = 0; j < m; ++j)
      if (j != k) denom *= nodes[k] - nodes[j];
    double num = 0;
    for (int q = 0; q < m; ++q) {
      if (q == k) continue;
      double prod = 1;
      for (int j = 0; j < m; ++j)
        if (j != k && j != q) prod *= t - nodes[j];
      num += prod;
    }
    out += values[k] * num / denom;
  }
  return out;
}

}  // namespace

RevolutionProfile embed(const WarpedMetric& metric, int samples) {
  if (metric.dim() != 2) throw PreconditionError("revolution embedding needs a metric on S^2");
  if (samples < 65) throw PreconditionError("embedding needs at least 65 samples");
  const Profile& src = metric.profile();
  const std::vector<double> cuts = piece_cuts(src);
  const int pieces = static_cast<int>(cuts.size()) - 1;

  RevolutionProfile out;
  out.source = src;
  for (int p = 0; p < pieces; ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    const int cnt = std::max(16, static_cast<int>(std::lround((samples - 1) * (b - a) / kPi)));
    for (int k = (p == 0 ? 0 : 1); k <= cnt; ++k) {
      out.x.push_back(k == cnt ? b : a + (b - a) * k / cnt);
      out.piece.push_back(p);
    }
  }
  const int n = static_cast<int>(out.x.size());
  out.s.assign(n, 0.0);
  out.z.assign(n, 0.0);
  out.rho.assign(n, 0.0);
  out.alpha.assign(n, 0.0);
  out.k1.assign(n, 0.0);
  out.k2.assign(n, 0.0);

  auto fun_f = [&src](double x) { return src.eval(x).f; };
  auto fun_z = [&src](double x) { return z_rate(src.eval(x)); };
  std::vector<double> K(n, 0.0);
  std::vector<Local> loc(n);
  // a slope above one rules out any revolution embedding, so it is reported first
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      out.s[i] = out.s[i - 1] + Gauss::integrate(fun_f, out.x[i - 1], out.x[i]);
      out.z[i] = out.z[i - 1] + Gauss::integrate(fun_z, out.x[i - 1], out.x[i]);
    }
    if (i == 0 || i == n - 1) continue;
    loc[i] = local(src.eval(out.x[i]));
    if (std::abs(loc[i].rho_s) > 1 + 1e-10) {
      std::ostringstream os;
      os << "embedding obstruction: |dh/ds| = " << std::abs(loc[i].rho_s) << " > 1 at x = " << out.x[i];
      throw EmbeddingError(EmbeddingError::Kind::SlopeObstruction, out.x[i], std::abs(loc[i].rho_s), os.str());
    }
  }
  for (int i = 1; i < n - 1; ++i) {
    const Local& l = loc[i];
    K[i] = -l.rho_ss / l.rho;
    if (K[i] < -1e-8) {
      std::ostringstream os;
      os << "Gauss curvature " << K[i] << " < 0 at x = " << out.x[i] << " (sample " << i << ")";
      throw EmbeddingError(EmbeddingError::Kind::NegativeCurvature, out.x[i], K[i], os.str());
    }
    out.rho[i] = l.rho;
    out.alpha[i] = std::atan2(l.sin_a, l.rho_s);
    out.k2[i] = l.sin_a / l.rho;
    out.k1[i] = kappa1(l);
  }
  // poles: umbilic, κ = √K with K extrapolated in x² (samples are uniform near both ends)
  const int m = std::min(8, n / 4);
  std::vector<double> lo(m), hi(m);
  for (int j = 0; j < m; ++j) {
    lo[j] = K[1 + j];
    hi[j] = K[n - 2 - j];
  }
  const double k0 = std::sqrt(std::max(0.0, extrapolate_to_pole(lo.data(), m)));
  const double kN = std::sqrt(std::max(0.0, extrapolate_to_pole(hi.data(), m)));
  out.k1[0] = out.k2[0] = k0;
  out.k1[n - 1] = out.k2[n - 1] = kN;
  out.alpha[0] = 0.0;
  out.alpha[n - 1] = kPi;
  out.length = out.s.back();
  out.height = out.z.back();
  return out;
}

RevolutionProfile RevolutionProfile::scaled(double lambda) const {
  if (!(lambda > 0)) throw PreconditionError("scale factor must be positive");
  RevolutionProfile p = *this;
  p.source = Profile{[src = source.eval, lambda](double x) {
                       ProfileSample s = src(x);
                       s.f *= lambda;
                       s.fx *= lambda;
                       s.h *= lambda;
                       s.hx *= lambda;
                       s.hxx *= lambda;
                       return s;
                     },
                     source.breaks};
  for (auto* v : {&p.s, &p.rho, &p.z})
    for (double& e : *v) e *= lambda;
  for (auto* v : {&p.k1, &p.k2})
    for (double& e : *v) e /= lambda;
  p.length *= lambda;
  p.height *= lambda;
  return p;
}

double RevolutionProfile::radius_at_height(double zq) const {
  if (zq <= 0) return 0.0;
  if (zq >= height) return 0.0;
  const auto it = std::upper_bound(z.begin(), z.end(), zq);
  const int j = static_cast<int>(it - z.begin()) - 1;
  if (!(z[j + 1] > z[j])) return std::max(rho[j], rho[j + 1]);
  auto g = [this](double x) { return z_rate(source.eval(x)); };
  double a = x[j], b = x[j + 1];
  for (int it2 = 0; it2 < 60 && b - a > 1e-15; ++it2) {
    const double mid = 0.5 * (a + b);
    if (z[j] + Gauss::integrate(g, x[j], mid) < zq)
      a = mid;
    else
      b = mid;
  }
  return source.eval(0.5 * (a + b)).h;
}

double surface_area(const RevolutionProfile& p) {
  return 2 * kPi * integrate_profile(p.source, [&p](double x) {
           const ProfileSample s = p.source.eval(x);
           return s.h * s.f;
         });
}

double total_mean_curvature(const RevolutionProfile& p) {
  return 2 * kPi * integrate_profile(p.source, [&p](double x) {
           const ProfileSample s = p.source.eval(x);
           const Local l = local(s);
           return (kappa1(l) * l.rho + l.sin_a) * s.f;
         });
}

double total_gauss_curvature(const RevolutionProfile& p) {
  return 2 * kPi * integrate_profile(p.source, [&p](double x) {
           const ProfileSample s = p.source.eval(x);
           return -local(s).rho_ss * s.f;
         });
}

double steiner_area(const RevolutionProfile& p, double r) {
  if (!(r >= 0)) throw PreconditionError("offset distance must be nonnegative");
  // offset point P + rN moves with speed (1 + rκ1) and radius ρ + r sin α
  return 2 * kPi * integrate_profile(p.source, [&p, r](double x) {
           const ProfileSample s = p.source.eval(x);
           const Local l = local(s);
           return (l.rho + r * l.sin_a) * (1 + r * kappa1(l)) * s.f;
         });
}

SteinerFit steiner_fit(const RevolutionProfile& p, double step) {
  if (!(step > 0)) throw PreconditionError("Steiner fit needs a positive step");
  SteinerFit out;
  out.area = surface_area(p);
  out.total_mean_curvature = total_mean_curvature(p);
  Eigen::Matrix<double, 4, 3> A;
  Eigen::Vector4d y;
  for (int k = 0; k < 4; ++k) {
    const double r = k * step;
    A(k, 0) = 1;
    A(k, 1) = r;
    A(k, 2) = r * r;
    y[k] = steiner_area(p, r);
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
  out.c0 = c[0];
  out.c1 = c[1];
  out.c2 = c[2];
  out.max_relative_error = std::max({std::abs(c[0] / out.area - 1), std::abs(c[1] / out.total_mean_curvature - 1),
                                     std::abs(c[2] / (4 * kPi) - 1)});
  return out;
}

InducedMetricCheck induced_metric_check(const RevolutionProfile& p) {
  InducedMetricCheck out;
  const int n = static_cast<int>(p.x.size());
  int b = 0;
  while (b < n - 1) {
    const int pc = p.piece[b + 1];
    int e = b + 1;
    while (e + 1 < n && p.piece[e + 1] == pc) ++e;
    // stencils stay inside [x_b, x_e]; the profile is smooth there
    const int span = e - b + 1;
    const int m = std::min(7, span);
    for (int i = b; i <= e; ++i) {
      const int start = std::clamp(i - m / 2, b, e - m + 1);
      const double rx = lagrange_slope(&p.x[start], &p.rho[start], m, p.x[i]);
      const double zx = lagrange_slope(&p.x[start], &p.z[start], m, p.x[i]);
      const ProfileSample s = p.source.eval(p.x[i]);
      out.max_f_error = std::max(out.max_f_error, std::abs(std::hypot(rx, zx) - s.f));
      const double h = (i == 0 || i == n - 1) ? 0.0 : s.h;
      out.max_h_error = std::max(out.max_h_error, std::abs(p.rho[i] - h));
    }
    b = e;
  }
  return out;
}

double min_principal_curvature(const RevolutionProfile& p) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.k1.size(); ++i) m = std::min({m, p.k1[i], p.k2[i]});
  return m;
}

EnclosureReport enclosure_check(const RevolutionProfile& inner, const RevolutionProfile& outer, double tol) {
  EnclosureReport rep;
  const double scale = std::max({1.0, outer.height, outer.length});
  const double t = tol * scale;
  rep.nested = true;
  rep.max_overlap = -std::numeric_limits<double>::infinity();
  const double shift = 0.5 * (outer.height - inner.height);
  for (std::size_t j = 0; j < inner.z.size(); ++j) {
    const double zo = inner.z[j] + shift;
    double overlap;
    if (zo < -t || zo > outer.height + t)
      overlap = std::numeric_limits<double>::infinity();
    else
      overlap = inner.rho[j] - outer.radius_at_height(std::clamp(zo, 0.0, outer.height));
    if (overlap > rep.max_overlap) {
      rep.max_overlap = overlap;
      if (overlap > t && rep.nested) {
        rep.nested = false;
        rep.violating_height = inner.z[j] - 0.5 * inner.height;
      }
    }
  }
  rep.area_inner = surface_area(inner);
  rep.area_outer = surface_area(outer);
  rep.tmc_inner = total_mean_curvature(inner);
  rep.tmc_outer = total_mean_curvature(outer);
  rep.area_monotone = rep.area_inner <= rep.area_outer * (1 + 1e-12);
  rep.tmc_monotone = rep.tmc_inner <= rep.tmc_outer * (1 + 1e-12);
  return rep;
}

std::vector<std::vector<double>> geodesic_distance(const WarpedMetric& metric, double x0, int nx, int nphi) {
  if (metric.dim() != 2) throw PreconditionError("geodesic distance needs a metric on S^2");
  if (nx < 9 || nphi < 9) throw PreconditionError("fast marching needs at least 9 nodes per direction");
  if (!(x0 >= 0 && x0 <= kPi)) throw PreconditionError("source must lie in [0, π]");
  const double dx = kPi / (nx - 1), dp = kPi / (nphi - 1);
  std::vector<double> f(nx), h(nx), s(nx, 0.0);
  const Profile& src = metric.profile();
  for (int i = 0; i < nx; ++i) {
    const ProfileSample ps = src.eval(i * dx);
    f[i] = ps.f;
    h[i] = (i == 0 || i == nx - 1) ? 0.0 : ps.h;
    if (i > 0) s[i] = s[i - 1] + Gauss::integrate([&src](double x) { return src.eval(x).f; }, (i - 1) * dx, i * dx);
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> T(nx, std::vector<double>(nphi, inf));
  std::vector<std::vector<char>> state(nx, std::vector<char>(nphi, 0));   // 0 far, 1 trial, 2 accepted
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  auto key = [nphi](int i, int j) { return i * nphi + j; };
  auto mirror = [nphi](int j) { return j < 0 ? -j : (j >= nphi ? 2 * (nphi - 1) - j : j); };
  auto is_pole = [nx](int i) { return i == 0 || i == nx - 1; };
  auto accepted = [&](int i, int j) { return state[i][is_pole(i) ? 0 : mirror(j)] == 2; };
  auto value = [&](int i, int j) { return T[i][is_pole(i) ? 0 : mirror(j)]; };

  auto solve = [&](int i, int j) {
    const double inv[2] = {1.0 / (f[i] * dx), 1.0 / (h[i] * dp)};
    double c[2] = {0, 0}, beta[2] = {0, 0}, lower[2] = {0, 0};
    bool have[2] = {false, false};
    for (int dir = 0; dir < 2; ++dir) {
      double best = inf, second = inf;
      for (int sg : {-1, 1}) {
        const int i1 = dir == 0 ? i + sg : i, j1 = dir == 0 ? j : j + sg;
        if (dir == 0 && (i1 < 0 || i1 >= nx)) continue;
        if (!accepted(i1, j1)) continue;
        const double v1 = value(i1, j1);
        if (v1 >= best) continue;
        best = v1;
        second = inf;
        const int i2 = dir == 0 ? i + 2 * sg : i, j2 = dir == 0 ? j : j + 2 * sg;
        const bool inside = dir == 1 || (i2 >= 0 && i2 < nx && !is_pole(i1));
        if (inside && accepted(i2, j2) && value(i2, j2) <= v1) second = value(i2, j2);
      }
      if (best == inf) continue;
      have[dir] = true;
      lower[dir] = best;
      if (second < inf) {
        c[dir] = 1.5 * inv[dir];
        beta[dir] = (4 * best - second) / 3;
      } else {
        c[dir] = inv[dir];
        beta[dir] = best;
      }
    }
    double one_d = inf;
    for (int dir = 0; dir < 2; ++dir)
      if (have[dir]) one_d = std::min(one_d, beta[dir] + 1.0 / c[dir]);
    if (have[0] && have[1]) {
      const double a = c[0] * c[0] + c[1] * c[1];
      const double b = -2 * (c[0] * c[0] * beta[0] + c[1] * c[1] * beta[1]);
      const double cc = c[0] * c[0] * beta[0] * beta[0] + c[1] * c[1] * beta[1] * beta[1] - 1;
      const double disc = b * b - 4 * a * cc;
      if (disc >= 0) {
        const double r = (-b + std::sqrt(disc)) / (2 * a);
        if (r >= std::max(lower[0], lower[1])) return std::min(r, one_d);
      }
    }
    return one_d;
  };

  auto push_neighbours = [&](int i, int j) {
    std::vector<std::pair<int, int>> nb;
    if (is_pole(i)) {
      const int r = i == 0 ? 1 : nx - 2;
      for (int q = 0; q < nphi; ++q) nb.push_back({r, q});
    } else {
      nb = {{i - 1, j}, {i + 1, j}, {i, mirror(j - 1)}, {i, mirror(j + 1)}};
    }
    for (auto [a, b] : nb) {
      if (is_pole(a)) {
        if (state[a][0] == 2) continue;
        const double hop = Gauss::integrate([&src](double x) { return src.eval(x).f; }, std::min(a, i) * dx,
                                            std::max(a, i) * dx);
        const double v = T[i][j] + hop;
        if (v < T[a][0]) {
          T[a][0] = v;
          state[a][0] = 1;
          heap.push({v, key(a, 0)});
        }
        continue;
      }
      if (state[a][b] == 2) continue;
      const double v = solve(a, b);
      if (v < T[a][b]) {
        T[a][b] = v;
        state[a][b] = 1;
        heap.push({v, key(a, b)});
      }
    }
  };

  const int i0 = static_cast<int>(std::lround(x0 / dx));
  std::vector<std::pair<int, int>> seeds;
  if (is_pole(i0)) {
    T[i0][0] = 0.0;
    state[i0][0] = 2;
    seeds.push_back({i0, 0});
  } else {
    // exact-to-second-order distances in a small patch around the source
    const int r = 2;
    for (int i = std::max(1, i0 - r); i <= std::min(nx - 2, i0 + r); ++i)
      for (int j = 0; j <= r; ++j) {
        const double ds = s[i] - s[i0];
        const double hb = 0.5 * (h[i] + h[i0]);
        T[i][j] = std::hypot(ds, hb * j * dp);
        state[i][j] = 2;
        seeds.push_back({i, j});
      }
  }
  for (auto [i, j] : seeds) push_neighbours(i, j);
  while (!heap.empty()) {
    const auto [v, k] = heap.top();
    heap.pop();
    const int i = k / nphi, j = k % nphi;
    if (state[i][j] == 2 || v > T[i][j]) continue;
    state[i][j] = 2;
    push_neighbours(i, j);
  }
  for (int i : {0, nx - 1}) std::fill(T[i].begin(), T[i].end(), T[i][0]);
  return T;
}

namespace {

double fast_marching_diameter(const WarpedMetric& metric, int nx, int nphi, int sources) {
  double best = 0;
  for (int k = 0; k < sources; ++k) {
    // sources on grid rows so that coarse and fine runs share them
    const int row = static_cast<int>(std::lround(static_cast<double>(k) * (nx - 1) / (sources - 1)));
    const auto T = geodesic_distance(metric, row * kPi / (nx - 1), nx, nphi);
    for (const auto& r : T) best = std::max(best, *std::max_element(r.begin(), r.end()));
  }
  return best;
}

}  // namespace

DiameterResult diameter(const WarpedMetric& metric, const DiameterOptions& opts) {
  if (opts.sources < 2) throw PreconditionError("diameter needs at least two sources");
  DiameterResult out;
  out.meridian_length = metric.meridian_length();
  out.fast_marching = fast_marching_diameter(metric, opts.nx, opts.nphi, opts.sources);
  if (opts.estimate_error) {
    out.coarse = fast_marching_diameter(metric, (opts.nx + 1) / 2, (opts.nphi + 1) / 2, opts.sources);
    out.error_estimate = std::abs(out.fast_marching - out.coarse);
  }
  out.diameter = std::max(out.fast_marching, out.meridian_length);
  return out;
}

Prop51Check prop51_check(const WarpedMetric& metric, const DiameterOptions& opts) {
  const RevolutionProfile p = embed(metric);
  Prop51Check out;
  out.diameter = diameter(metric, opts);
  const double d = out.diameter.diameter;
  out.two_diam = 2 * d;
  out.lambda_plus = total_mean_curvature(p);
  out.twelve_pi_diam = 12 * kPi * d;
  out.pass = out.two_diam < out.lambda_plus && out.lambda_plus < out.twelve_pi_diam;
  return out;
}

double dilation_for(const WarpedMetric& ga, const WarpedMetric& gb, const std::vector<double>& c) {
  if (ga.dim() != gb.dim()) throw PreconditionError("dilation needs metrics of the same dimension");
  const SphereGrid& grid = gb.grid();
  const int n = grid.size();
  double worst = 0;
  auto spread = [](double r) { return std::max(r, 1.0 / r); };
  for (int i = 0; i < n; ++i) {
    const double x = grid.nodes()[i];
    double sig = x, dsig = 1;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double kk = static_cast<double>(k + 1);
      sig += c[k] * std::sin(kk * x) / kk;
      dsig += c[k] * std::cos(kk * x);
    }
    if (!(dsig > 0)) return std::numeric_limits<double>::infinity();
    const ProfileSample a = ga.eval(std::clamp(sig, 0.0, kPi));
    const double r1 = std::pow(a.f * dsig / gb.f()[i], 2);
    worst = std::max(worst, spread(r1));
    if (i > 0 && i < n - 1) worst = std::max(worst, spread(std::pow(a.h / gb.h()[i], 2)));
  }
  return worst;
}

DilationResult dilation(const WarpedMetric& ga, const WarpedMetric& gb, const DilationOptions& opts) {
  DilationResult out;
  std::vector<double> c(opts.modes, 0.0);
  out.identity_value = dilation_for(ga, gb, c);
  double best = out.identity_value;
  // cyclic coordinate descent; each 1-D problem by Brent's method
  for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
    const double before = best;
    for (int k = 0; k < opts.modes; ++k) {
      auto obj = [&](double v) {
        std::vector<double> trial = c;
        trial[k] = v;
        const double d = dilation_for(ga, gb, trial);
        return std::isfinite(d) ? d : 1e6;
      };
      const auto [v, d] = boost::math::tools::brent_find_minima(obj, c[k] - 0.5, c[k] + 0.5, 40);
      if (d < best) {
        best = d;
        c[k] = v;
      }
    }
    if (before - best < 1e-12 * best) break;
  }
  out.value = best;
  out.coefficients = c;
  const SphereGrid& grid = gb.grid();
  out.sigma.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes()[i];
    double sig = x;
    for (std::size_t k = 0; k < c.size(); ++k) sig += c[k] * std::sin((k + 1.0) * x) / (k + 1.0);
    out.sigma[i] = sig;
  }
  return out;
}

std::vector<NamedProfile> convex_corpus() {
  return {
      {"round-1", profiles::round(1.0)},
      {"round-1.5", profiles::round(1.5)},
      {"prolate-1-2", profiles::spheroid(1.0, 2.0)},
      {"oblate-1.5-1", profiles::spheroid(1.5, 1.0)},
      {"oblate-1-0.6", profiles::spheroid(1.0, 0.6)},
      {"capped-cylinder-2-0.1-0.05", profiles::capped_cylinder_from_box(2.0, 0.1, 0.05)},
      {"capped-cylinder-1-0.5", profiles::capped_cylinder(1.0, 0.5)},
      {"conformal-cos-0.2", profiles::conformal_cos(0.2)},
      {"conformal-cos-0.45", profiles::conformal_cos(0.45)},
      {"conformal-cos2-0.3", profiles::conformal_cos2(0.3)},
  };
}

std::vector<NestedPair> nested_corpus() {
  using namespace profiles;
  return {
      {"round-1 in round-2", round(1.0), round(2.0)},
      {"round-1 in prolate-1.2-2", round(1.0), spheroid(1.2, 2.0)},
      {"capped-cylinder in circumscribed sphere", capped_cylinder_from_box(2.0, 0.1, 0.05), round(0.95)},
      {"prolate-1-2 in round-2", spheroid(1.0, 2.0), round(2.0)},
      {"oblate-1.5-1 in round-1.5", spheroid(1.5, 1.0), round(1.5)},
      {"round-1 in oblate-1.5-1", round(1.0), spheroid(1.5, 1.0)},
      {"capped-cylinder-1-0.5 in round-1.1", capped_cylinder(1.0, 0.5), round(1.1)},
      {"round-0.5 in capped-cylinder-1-0.5", round(0.5), capped_cylinder(1.0, 0.5)},
      {"oblate-1-0.6 in round-1", spheroid(1.0, 0.6), round(1.0)},
      {"conformal-cos-0.2 in round-2", conformal_cos(0.2), round(2.0)},
      {"round-0.5 in oblate-1-0.6", round(0.5), spheroid(1.0, 0.6)},
  };
}

}  // namespace fillin
