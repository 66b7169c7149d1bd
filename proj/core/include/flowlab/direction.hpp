#pragma once

#include <functional>
#include <vector>

#include "flowlab/geometry.hpp"

namespace flowlab {

/// Degree-zero function on the circle held as uniform angular samples
/// (theta_j = 2*pi*j/n at the sample centers), linearly interpolated.
struct DirectionFn {
  std::vector<double> samples;
  double sphere_mean = 0.0;  // average over S^1, recorded at construction

  DirectionFn() = default;
  explicit DirectionFn(std::vector<double> samples_);
  static DirectionFn from_function(const std::function<double(double)>& f, int n = 512);
  static DirectionFn constant(double c, int n = 512);
  /// Omega(theta) = sin^2 - cos^2 = -cos(2 theta), the angular part of the
  /// squared-Riesz kernel (x2^2 - x1^2)/|x|^4.
  static DirectionFn riesz_sq_1(int n = 512);
  /// Omega(theta) = cos^2 - sin^2 = +cos(2 theta).
  static DirectionFn riesz_sq_2(int n = 512);

  int size() const { return static_cast<int>(samples.size()); }
  double at_angle(double theta) const;
  double at_dir(const Vec2& u) const { return at_angle(std::atan2(u.y, u.x)); }
  double sup_abs() const;
};

/// Annulus seminorm: integral of |Omega| over 1<|x|<2 plus the Gagliardo
/// double integral with exponent d+alpha0. Midpoint quadrature; the radial
/// pair weight is precomputed per angular offset.
double sphere_seminorm(const DirectionFn& omega, double alpha0, int radial_nodes = 32);

/// Periodic mollification of the angular samples at scale ~1/n; the discrete
/// sphere mean is preserved (drift beyond 1e-14 is subtracted and reported).
struct SmoothResult {
  DirectionFn omega;
  bool drift_corrected = false;
  double drift = 0.0;
};
SmoothResult smooth_direction(const DirectionFn& omega, int n);

}  // namespace flowlab
