#pragma once

#include <functional>
#include <vector>

#include "flowlab/grid.hpp"
#include "flowlab/kernels.hpp"
#include "flowlab/measure.hpp"

namespace flowlab {

enum class ConvMode { Auto, Direct, Fft };

/// (1_{|.|>eps} K) * f on the grid of f; the dirac share of the kernel adds
/// dirac_share * f. Direct summation below 128x128, padded FFT above.
ScalarGrid truncated_convolution_grid(const RoughKernel& kernel, const ScalarGrid& f,
                                      double eps_trunc, ConvMode mode = ConvMode::Auto);

/// Same operator for an atomic measure, evaluated at the given points.
/// Atoms closer than eps_trunc to an eval point are skipped (that is the
/// truncation); density parts are summed cell-wise.
std::vector<double> truncated_convolution(const RoughKernel& kernel, const DiscreteMeasure& mu,
                                          double eps_trunc, const std::vector<Vec2>& eval_points);

enum class TruncationKind { Hard, SmoothCutoff };

/// Pointwise sup over the truncation grid of |(cutoff_eps K) * f|; Hard uses
/// the sharp indicator, SmoothCutoff the fixed chi(./eps) profile (0 inside
/// 2eps, 1 outside 3eps).
ScalarGrid maximal_truncated_grid(const RoughKernel& kernel, const ScalarGrid& f,
                                  const std::vector<double>& eps_grid, TruncationKind kind,
                                  ConvMode mode = ConvMode::Auto);

std::vector<double> maximal_truncated(const RoughKernel& kernel, const DiscreteMeasure& mu,
                                      const std::vector<Vec2>& eval_points,
                                      const std::vector<double>& eps_grid, TruncationKind kind);

/// Radial bump family member for the composite operator; supp(phi) in B_1.
struct BumpKernel {
  std::function<double(Vec2)> phi;
  double c0 = 0.0;  // sup |phi| + |x||grad phi| measured on samples

  static BumpKernel radial_plateau();  // 1 on |x|<=1/2, smooth decay to 0 at 1
};

/// sup over bumps and the rho grid of |(rho^{-alpha} |.|^{alpha-d} phi(./rho)) * K * f|.
/// The inner convolution K * f is cached once on the grid of f.
std::vector<double> composite_sup_op(const RoughKernel& kernel,
                                     const std::vector<BumpKernel>& bumps, double alpha,
                                     const std::vector<double>& rho_grid, const ScalarGrid& f,
                                     const std::vector<Vec2>& eval_points,
                                     int quad_radial = 24, int quad_angular = 32,
                                     int threads = 1);

/// Cone bump of half-width eps around direction e, supp in B_1 within the
/// cone |x/|x| - e| <= eps; the bound constant is computed on samples.
struct ConeBump {
  double eps;
  double c0 = 0.0;
  double radial_at(double s) const;    // plateau to 1/2, smooth decay to 1
  double angular_at(double q) const;   // q = chordal distance / eps
  double eval(Vec2 v, Vec2 e) const;

  static ConeBump make(double eps);
};

struct KakeyaSingularParams {
  double eps = 0.05;       // cone half-width, in (0, 1/10)
  double alpha = 1.0;
  double rho0 = 0.5;       // sup over rho in (0, rho0]
  int rho_count = 8;
  int direction_count = 0;  // 0: max(64, ceil(2 pi / eps) * 4)
  int quad_radial = 24;
  int quad_angular = 10;    // across the cone
  int tip_angular = 96;     // full-circle nodes when the kernel tip is inside
  int tip_radial = 72;
  int threads = 1;
};

/// Kakeya singular operator: sup over (rho, e) of
/// (eps^{-d+1}/rho^alpha) |(|.|^{alpha-d} phi_rho^{e,eps}) * K * mu|.
/// Atomic measures use per-atom principal-value quadrature (full-circle polar
/// nodes once the kernel singularity enters the cone); grid densities go
/// through a cached K * density.
std::vector<double> kakeya_singular(const RoughKernel& kernel, const DiscreteMeasure& mu,
                                    const KakeyaSingularParams& params,
                                    const std::vector<Vec2>& eval_points);

}  // namespace flowlab
