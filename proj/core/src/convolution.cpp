#include "flowlab/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flowlab/fft.hpp"
#include "flowlab/parallel.hpp"

namespace flowlab {

namespace {

constexpr int kDirectLimit = 128;  // below this, direct summation

// weight(r) -> multiplier applied to K at offset length r
ScalarGrid convolve_grid(const RoughKernel& kernel, const ScalarGrid& f,
                         const std::function<double(double)>& weight, ConvMode mode) {
  f.validate();
  if (f.dim != 2) throw std::invalid_argument("convolution: need a 2-D grid");
  const int nx = f.nx, ny = f.ny;
  const double h = f.h;
  const bool use_fft =
      mode == ConvMode::Fft || (mode == ConvMode::Auto && std::min(nx, ny) >= kDirectLimit);

  ScalarGrid out = f;
  // Cells near the origin are cell-averaged with a midpoint subgrid: the few
  // lattice angles of the inner shells alias rough angular parts otherwise.
  constexpr int kNearZone = 12;
  constexpr int kSub = 8;
  auto kval = [&](int di, int dj) -> double {
    const Vec2 z{di * h, dj * h};
    if (std::max(std::abs(di), std::abs(dj)) <= kNearZone) {
      double acc = 0.0;
      for (int b = 0; b < kSub; ++b)
        for (int a = 0; a < kSub; ++a) {
          const Vec2 zs{z.x + ((a + 0.5) / kSub - 0.5) * h, z.y + ((b + 0.5) / kSub - 0.5) * h};
          const double r = zs.norm();
          if (r == 0.0) continue;
          const double w = weight(r);
          if (w != 0.0) acc += kernel.eval(zs) * w;
        }
      return acc / (kSub * kSub);
    }
    const double r = z.norm();
    const double w = weight(r);
    if (w == 0.0) return 0.0;
    return kernel.eval(z) * w;
  };

  if (!use_fft) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double acc = 0.0;
        for (int jj = 0; jj < ny; ++jj)
          for (int ii = 0; ii < nx; ++ii) {
            const double fv = f.at(ii, jj);
            if (fv == 0.0) continue;
            acc += fv * kval(i - ii, j - jj);
          }
        out.at(i, j) = acc * h * h;
      }
  } else {
    const int px = next_pow2(2 * nx), py = next_pow2(2 * ny);
    std::vector<cplx> fa(static_cast<size_t>(px) * py, cplx(0, 0));
    std::vector<cplx> ka(static_cast<size_t>(px) * py, cplx(0, 0));
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) fa[static_cast<size_t>(j) * px + i] = f.at(i, j);
    for (int dj = -(ny - 1); dj <= ny - 1; ++dj)
      for (int di = -(nx - 1); di <= nx - 1; ++di) {
        const double v = kval(di, dj);
        if (v == 0.0) continue;
        const int wi = (di + px) % px, wj = (dj + py) % py;
        ka[static_cast<size_t>(wj) * px + wi] = v;
      }
    fft2(fa, px, py, false);
    fft2(ka, px, py, false);
    for (size_t i = 0; i < fa.size(); ++i) fa[i] *= ka[i];
    fft2(fa, px, py, true);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) out.at(i, j) = fa[static_cast<size_t>(j) * px + i].real() * h * h;
  }

  if (kernel.dirac_share != 0.0)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) out.at(i, j) += kernel.dirac_share * f.at(i, j);
  return out;
}

std::vector<double> convolve_measure(const RoughKernel& kernel, const DiscreteMeasure& mu,
                                     const std::function<double(double)>& weight,
                                     const std::vector<Vec2>& eval_points) {
  std::vector<double> out(eval_points.size(), 0.0);
  for (size_t pi = 0; pi < eval_points.size(); ++pi) {
    const Vec2 x = eval_points[pi];
    double acc = 0.0;
    for (const Atom& a : mu.atoms) {
      const Vec2 z = x - a.pos;
      const double r = z.norm();
      if (r == 0.0) continue;
      const double w = weight(r);
      if (w != 0.0) acc += a.weight * kernel.eval(z) * w;
    }
    if (mu.density) {
      const ScalarGrid& g = *mu.density;
      const double cv = g.cell_volume();
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const double v = g.at(i, j);
          if (v == 0.0) continue;
          const Vec2 z = x - g.cell_center(i, j);
          const double r = z.norm();
          if (r == 0.0) continue;
          const double w = weight(r);
          if (w != 0.0) acc += v * cv * kernel.eval(z) * w;
        }
      if (kernel.dirac_share != 0.0) acc += kernel.dirac_share * g.interp(x);
    }
    out[pi] = acc;
  }
  return out;
}

}  // namespace

ScalarGrid truncated_convolution_grid(const RoughKernel& kernel, const ScalarGrid& f,
                                      double eps_trunc, ConvMode mode) {
  if (eps_trunc <= 0.0) throw std::domain_error("truncated_convolution: eps_trunc > 0");
  return convolve_grid(kernel, f, [&](double r) { return r > eps_trunc ? 1.0 : 0.0; }, mode);
}

std::vector<double> truncated_convolution(const RoughKernel& kernel, const DiscreteMeasure& mu,
                                          double eps_trunc,
                                          const std::vector<Vec2>& eval_points) {
  if (eps_trunc <= 0.0) throw std::domain_error("truncated_convolution: eps_trunc > 0");
  return convolve_measure(kernel, mu, [&](double r) { return r > eps_trunc ? 1.0 : 0.0; },
                          eval_points);
}

ScalarGrid maximal_truncated_grid(const RoughKernel& kernel, const ScalarGrid& f,
                                  const std::vector<double>& eps_grid, TruncationKind kind,
                                  ConvMode mode) {
  if (eps_grid.empty()) throw config_error("maximal_truncated: empty eps grid");
  ScalarGrid out = f;
  std::fill(out.values.begin(), out.values.end(), 0.0);
  for (double eps : eps_grid) {
    ScalarGrid c =
        kind == TruncationKind::Hard
            ? truncated_convolution_grid(kernel, f, eps, mode)
            : convolve_grid(kernel, f, [&](double r) { return far_cutoff(r / eps); }, mode);
    for (size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = std::max(out.values[i], std::abs(c.values[i]));
  }
  return out;
}

std::vector<double> maximal_truncated(const RoughKernel& kernel, const DiscreteMeasure& mu,
                                      const std::vector<Vec2>& eval_points,
                                      const std::vector<double>& eps_grid, TruncationKind kind) {
  if (eps_grid.empty()) throw config_error("maximal_truncated: empty eps grid");
  std::vector<double> out(eval_points.size(), 0.0);
  for (double eps : eps_grid) {
    std::vector<double> c =
        kind == TruncationKind::Hard
            ? truncated_convolution(kernel, mu, eps, eval_points)
            : convolve_measure(kernel, mu, [&](double r) { return far_cutoff(r / eps); },
                               eval_points);
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(c[i]));
  }
  return out;
}

BumpKernel BumpKernel::radial_plateau() {
  BumpKernel b;
  b.phi = [](Vec2 x) {
    const double s = x.norm();
    if (s >= 1.0) return 0.0;
    return s <= 0.5 ? 1.0 : smoothstep(2.0 * (1.0 - s));
  };
  // measure c0 = sup |phi| + |x||grad phi| on a sample grid
  double c0 = 0.0;
  const double fd = 1e-5;
  for (int i = 0; i < 400; ++i) {
    const double s = (i + 0.5) / 400.0;
    const Vec2 p{s, 0.0};
    const double g = std::abs(b.phi({s + fd, 0.0}) - b.phi({s - fd, 0.0})) / (2 * fd);
    c0 = std::max(c0, std::abs(b.phi(p)) + s * g);
  }
  b.c0 = c0;
  return b;
}

std::vector<double> composite_sup_op(const RoughKernel& kernel,
                                     const std::vector<BumpKernel>& bumps, double alpha,
                                     const std::vector<double>& rho_grid, const ScalarGrid& f,
                                     const std::vector<Vec2>& eval_points, int quad_radial,
                                     int quad_angular, int threads) {
  if (!(alpha > 0.0) || !(alpha < kDim))
    throw std::domain_error("composite_sup_op: alpha must be in (0, d)");
  if (bumps.empty() || rho_grid.empty())
    throw config_error("composite_sup_op: empty bump family or rho grid");
  const ScalarGrid inner = truncated_convolution_grid(kernel, f, f.h / 2.0);

  std::vector<double> out(eval_points.size(), 0.0);
  parallel_for(static_cast<long>(eval_points.size()), threads, [&](long pi) {
    const Vec2 x = eval_points[pi];
    double best = 0.0;
    for (const BumpKernel& bump : bumps)
      for (double rho : rho_grid) {
        const double ds = rho / quad_radial;
        const double dth = 2.0 * kPi / quad_angular;
        double acc = 0.0;
        for (int a = 0; a < quad_angular; ++a) {
          const double th = (a + 0.5) * dth;
          const Vec2 u{std::cos(th), std::sin(th)};
          for (int ri = 0; ri < quad_radial; ++ri) {
            const double s = (ri + 0.5) * ds;
            const double w = bump.phi(u * (s / rho));
            if (w == 0.0) continue;
            acc += std::pow(s, alpha - 1.0) * w * inner.interp(x - u * s) * ds * dth;
          }
        }
        best = std::max(best, std::pow(rho, -alpha) * std::abs(acc));
      }
    out[pi] = best;
  });
  return out;
}

double ConeBump::radial_at(double s) const {
  if (s >= 1.0 || s < 0.0) return 0.0;
  return s <= 0.5 ? 1.0 : smoothstep(2.0 * (1.0 - s));
}

double ConeBump::angular_at(double q) const {
  if (q >= 1.0 || q < 0.0) return 0.0;
  return q <= 0.5 ? 1.0 : smoothstep(2.0 * (1.0 - q));
}

double ConeBump::eval(Vec2 v, Vec2 e) const {
  const double s = v.norm();
  if (s == 0.0 || s >= 1.0) return 0.0;
  const double q = (v / s - e).norm() / eps;
  if (q >= 1.0) return 0.0;
  return radial_at(s) * angular_at(q);
}

ConeBump ConeBump::make(double eps) {
  ConeBump b;
  b.eps = eps;
  // c0 = sup |phi| + eps |x| |grad phi| estimated on a polar sample grid
  const Vec2 e{1.0, 0.0};
  const double fd = 1e-6;
  double c0 = 0.0;
  for (int a = 0; a <= 60; ++a) {
    const double th = (a / 60.0 - 0.5) * 2.2 * 2.0 * std::asin(eps / 2.0);
    for (int ri = 1; ri < 60; ++ri) {
      const double s = ri / 60.0;
      const Vec2 p{s * std::cos(th), s * std::sin(th)};
      const double gx = (b.eval({p.x + fd, p.y}, e) - b.eval({p.x - fd, p.y}, e)) / (2 * fd);
      const double gy = (b.eval({p.x, p.y + fd}, e) - b.eval({p.x, p.y - fd}, e)) / (2 * fd);
      c0 = std::max(c0, std::abs(b.eval(p, e)) + eps * s * std::hypot(gx, gy));
    }
  }
  b.c0 = c0;
  return b;
}

namespace {

// PV quadrature of integral K(w) g(v - w) dw for one atom offset v, where
// g(y) = |y|^{alpha-d} phi^{e,eps}(y/rho). Two regimes: kernel tip outside
// the bump support (regular polar nodes over the cone) or inside (full-circle
// polar nodes around the tip; the mean-zero angular sums kill the 1/s blowup).
double atom_pv_integral(const RoughKernel& kernel, const ConeBump& bump, Vec2 e, double rho,
                        double alpha, Vec2 v, const KakeyaSingularParams& p) {
  const double vn = v.norm();
  if (vn > rho) {
    // y-polar over the cone support
    const double half = 2.0 * std::asin(bump.eps / 2.0);
    const double phi_e = std::atan2(e.y, e.x);
    const double ds = rho / p.quad_radial;
    const double dth = 2.0 * half / p.quad_angular;
    double acc = 0.0;
    for (int a = 0; a < p.quad_angular; ++a) {
      const double th = phi_e - half + (a + 0.5) * dth;
      const Vec2 u{std::cos(th), std::sin(th)};
      for (int ri = 0; ri < p.quad_radial; ++ri) {
        const double s = (ri + 0.5) * ds;
        const double w = bump.eval(u * (s / rho), e);
        if (w == 0.0) continue;
        acc += std::pow(s, alpha - 1.0) * w * kernel.eval(v - u * s) * ds * dth;
      }
    }
    return acc;
  }
  // w-polar around the kernel singularity
  const double smax = vn + rho;
  const double smin = smax * 1e-6;
  const double ratio = std::pow(smax / smin, 1.0 / p.tip_radial);
  const double dth = 2.0 * kPi / p.tip_angular;
  double acc = 0.0;
  double s = smin;
  for (int ri = 0; ri < p.tip_radial; ++ri) {
    const double smid = s * std::sqrt(ratio);
    const double dsw = s * (ratio - 1.0);
    for (int a = 0; a < p.tip_angular; ++a) {
      const double th = (a + 0.5) * dth;
      const Vec2 u{std::cos(th), std::sin(th)};
      const Vec2 y = v - u * smid;
      const double yn = y.norm();
      if (yn == 0.0) continue;
      const double w = bump.eval(y / rho, e);
      if (w == 0.0) continue;
      acc += kernel.omega.at_dir(u) * kernel.radial_at(smid) * std::pow(yn, alpha - 2.0) * w *
             smid * dsw * dth;
    }
    s *= ratio;
  }
  return acc;
}

}  // namespace

std::vector<double> kakeya_singular(const RoughKernel& kernel, const DiscreteMeasure& mu,
                                    const KakeyaSingularParams& params,
                                    const std::vector<Vec2>& eval_points) {
  if (!(params.eps > 0.0) || params.eps >= 0.1)
    throw std::domain_error("kakeya_singular: eps must be in (0, 1/10)");
  if (!(params.alpha > 0.0) || params.alpha >= kDim)
    throw std::domain_error("kakeya_singular: alpha must be in (0, d)");
  const ConeBump bump = ConeBump::make(params.eps);
  const int ne = params.direction_count > 0
                     ? params.direction_count
                     : std::max(64, static_cast<int>(std::ceil(2.0 * kPi / params.eps)) * 4);
  std::vector<Vec2> dirs(ne);
  for (int j = 0; j < ne; ++j)
    dirs[j] = {std::cos(2.0 * kPi * j / ne), std::sin(2.0 * kPi * j / ne)};
  std::vector<double> rhos(params.rho_count);
  for (int i = 0; i < params.rho_count; ++i)
    rhos[i] = params.rho0 * std::pow(2.0, -(params.rho_count - 1 - i));

  const bool has_pv = kernel.omega.sup_abs() > 0.0;
  // density inputs go through a cached inner convolution on their own grid
  ScalarGrid cache;
  bool have_cache = false;
  if (mu.density && has_pv) {
    cache = truncated_convolution_grid(kernel, *mu.density, mu.density->h / 2.0);
    have_cache = true;
  }

  const double eps_pref = 1.0 / params.eps;  // eps^{-d+1}, d = 2
  std::vector<double> out(eval_points.size(), 0.0);
  parallel_for(static_cast<long>(eval_points.size()), params.threads, [&](long pi) {
    const Vec2 x = eval_points[pi];
    double best = 0.0;
    for (double rho : rhos) {
      for (const Vec2& e : dirs) {
        double acc = 0.0;
        if (has_pv) {
          for (const Atom& a : mu.atoms)
            acc += a.weight * atom_pv_integral(kernel, bump, e, rho, params.alpha, x - a.pos,
                                               params);
        }
        if (have_cache) {
          // outer cone quadrature over the cached K * density
          const double half = 2.0 * std::asin(params.eps / 2.0);
          const double phi_e = std::atan2(e.y, e.x);
          const double ds = rho / params.quad_radial;
          const double dth = 2.0 * half / params.quad_angular;
          for (int a = 0; a < params.quad_angular; ++a) {
            const double th = phi_e - half + (a + 0.5) * dth;
            const Vec2 u{std::cos(th), std::sin(th)};
            for (int ri = 0; ri < params.quad_radial; ++ri) {
              const double s = (ri + 0.5) * ds;
              const double w = bump.eval(u * (s / rho), e);
              if (w == 0.0) continue;
              acc += std::pow(s, params.alpha - 1.0) * w * cache.interp(x - u * s) * ds * dth;
            }
          }
        }
        if (kernel.dirac_share != 0.0) {
          for (const Atom& a : mu.atoms) {
            const Vec2 y = x - a.pos;
            const double yn = y.norm();
            if (yn == 0.0) continue;
            acc += kernel.dirac_share * a.weight * std::pow(yn, params.alpha - 2.0) *
                   bump.eval(y / rho, e);
          }
          if (mu.density) {
            const double half = 2.0 * std::asin(params.eps / 2.0);
            const double phi_e = std::atan2(e.y, e.x);
            const double ds = rho / params.quad_radial;
            const double dth = 2.0 * half / params.quad_angular;
            for (int a = 0; a < params.quad_angular; ++a) {
              const double th = phi_e - half + (a + 0.5) * dth;
              const Vec2 u{std::cos(th), std::sin(th)};
              for (int ri = 0; ri < params.quad_radial; ++ri) {
                const double s = (ri + 0.5) * ds;
                const double w = bump.eval(u * (s / rho), e);
                if (w == 0.0) continue;
                acc += kernel.dirac_share * std::pow(s, params.alpha - 1.0) * w *
                       mu.density->interp(x - u * s) * ds * dth;
              }
            }
          }
        }
        best = std::max(best, eps_pref * std::pow(rho, -params.alpha) * std::abs(acc));
      }
    }
    out[pi] = best;
  });
  return out;
}

}  // namespace flowlab
