#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "flowlab/direction.hpp"
#include "flowlab/geometry.hpp"

namespace flowlab {

/// Quintic smoothstep: 0 at u<=0, 1 at u>=1, C^2 across, S(u)+S(1-u)=1.
double smoothstep(double u);

/// Partition cutoff on the line: 1 on (-inf,1/4], 0 on [3/4,inf),
/// rho(t)+rho(1-t)=1 on [0,1].
double partition_cutoff(double t);

/// Far-field cutoff: 0 on |s|<=2, 1 on |s|>=3, smooth between.
double far_cutoff(double s);

/// Unit-mass C^inf bump of radius sigma on the plane (normalized numerically).
struct Mollifier {
  double sigma;
  double norm_const;
  explicit Mollifier(double sigma_);
  double operator()(Vec2 x) const;
};

enum class RadialPart { PowerD, Table };

/// Convolution kernel Omega(x/|x|) * radial(|x|) with the admissibility
/// numbers computed, not assumed. `dirac_share` adds a multiple of the
/// identity on top of the principal-value part (the squared-Riesz pairs sum
/// to a pure delta this way).
struct RoughKernel {
  DirectionFn omega;
  RadialPart radial = RadialPart::PowerD;
  std::function<double(double)> radial_profile;  // used for Table
  double alpha0 = 0.5;
  double dirac_share = 0.0;
  double c1 = 0.0;  // annulus seminorm of omega
  double c2 = 0.0;  // cancellation supremum

  double radial_at(double r) const;
  double eval(Vec2 x) const;  // principal-value part only

  static RoughKernel power_d(DirectionFn omega, double alpha0 = 0.5);
  /// K = sum of squared Riesz transforms = identity: zero PV part plus a unit
  /// dirac share.
  static RoughKernel identity();
};

struct AnnulusGrid {
  std::vector<std::pair<double, double>> pairs;  // (R1, R2), 0 < R1 < R2
  static AnnulusGrid geometric(double r_lo, double r_hi, int count);
};

/// sup over annuli of |integral of K|. For the |x|^{-d} radial part this is
/// |sum of Omega samples| * (2 pi / n) * log(R2/R1) computed exactly from the
/// angular sums; tabulated radials use polar quadrature.
double cancellation_sup(const RoughKernel& kernel, const AnnulusGrid& annuli,
                        int radial_nodes = 64);

/// Computes c1, c2 and stores them on the kernel; throws if either is not finite.
void compute_admissibility(RoughKernel& kernel);

}  // namespace flowlab
