#include "flowlab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace flowlab {

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double partition_cutoff(double t) {
  if (t <= 0.25) return 1.0;
  if (t >= 0.75) return 0.0;
  return smoothstep((0.75 - t) / 0.5);
}

double far_cutoff(double s) {
  const double a = std::abs(s);
  if (a <= 2.0) return 0.0;
  if (a >= 3.0) return 1.0;
  return smoothstep(a - 2.0);
}

Mollifier::Mollifier(double sigma_) : sigma(sigma_) {
  if (sigma <= 0.0) throw std::invalid_argument("Mollifier: sigma must be positive");
  // normalize exp(-1/(1-|x/sigma|^2)) to unit mass by quadrature
  const int n = 64;
  double mass = 0.0;
  const double d = 2.0 * sigma / n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 p{-sigma + (i + 0.5) * d, -sigma + (j + 0.5) * d};
      const double u2 = p.norm2() / (sigma * sigma);
      if (u2 < 1.0) mass += std::exp(-1.0 / (1.0 - u2)) * d * d;
    }
  norm_const = 1.0 / mass;
}

double Mollifier::operator()(Vec2 x) const {
  const double u2 = x.norm2() / (sigma * sigma);
  if (u2 >= 1.0) return 0.0;
  return norm_const * std::exp(-1.0 / (1.0 - u2));
}

double RoughKernel::radial_at(double r) const {
  if (r <= 0.0) throw std::domain_error("RoughKernel: radial part at r <= 0");
  if (radial == RadialPart::PowerD) return std::pow(r, -static_cast<double>(kDim));
  return radial_profile(r);
}

double RoughKernel::eval(Vec2 x) const {
  const double r = x.norm();
  if (r == 0.0) throw std::domain_error("RoughKernel: eval at origin");
  return omega.at_dir(x / r) * radial_at(r);
}

RoughKernel RoughKernel::power_d(DirectionFn omega, double alpha0) {
  RoughKernel k;
  k.omega = std::move(omega);
  k.radial = RadialPart::PowerD;
  k.alpha0 = alpha0;
  compute_admissibility(k);
  return k;
}

RoughKernel RoughKernel::identity() {
  RoughKernel k;
  k.omega = DirectionFn::constant(0.0, 64);
  k.radial = RadialPart::PowerD;
  k.dirac_share = 1.0;
  k.c1 = 0.0;
  k.c2 = 0.0;
  return k;
}

AnnulusGrid AnnulusGrid::geometric(double r_lo, double r_hi, int count) {
  if (!(r_lo > 0.0) || !(r_lo < r_hi) || count < 1)
    throw std::invalid_argument("AnnulusGrid: need 0 < r_lo < r_hi, count >= 1");
  AnnulusGrid g;
  const double ratio = std::pow(r_hi / r_lo, 1.0 / count);
  double r = r_lo;
  for (int i = 0; i < count; ++i) {
    g.pairs.emplace_back(r_lo, r * ratio);  // nested annuli from r_lo
    g.pairs.emplace_back(r, r * ratio);     // and single shells
    r *= ratio;
  }
  return g;
}

double cancellation_sup(const RoughKernel& kernel, const AnnulusGrid& annuli,
                        int radial_nodes) {
  const int nt = kernel.omega.size();
  const double dt = 2.0 * kPi / nt;
  double angular_sum = 0.0;
  for (double v : kernel.omega.samples) angular_sum += v * dt;

  double sup = 0.0;
  for (const auto& [r1, r2] : annuli.pairs) {
    if (!(r1 > 0.0) || !(r1 < r2)) throw std::invalid_argument("cancellation_sup: bad annulus");
    double integral;
    if (kernel.radial == RadialPart::PowerD) {
      integral = angular_sum * std::log(r2 / r1);
    } else {
      // polar quadrature: radial factor r^{d-1} K(r), geometric radial nodes
      double radial = 0.0;
      const double ratio = std::pow(r2 / r1, 1.0 / radial_nodes);
      double r = r1;
      for (int i = 0; i < radial_nodes; ++i) {
        const double rmid = r * std::sqrt(ratio);
        radial += kernel.radial_at(rmid) * rmid * (r * ratio - r);
        r *= ratio;
      }
      integral = angular_sum * radial;
    }
    sup = std::max(sup, std::abs(integral));
  }
  return sup;
}

void compute_admissibility(RoughKernel& kernel) {
  kernel.c1 = sphere_seminorm(kernel.omega, kernel.alpha0);
  kernel.c2 = cancellation_sup(kernel, AnnulusGrid::geometric(1e-3, 1e3, 10));
  if (!std::isfinite(kernel.c1) || !std::isfinite(kernel.c2))
    throw std::invalid_argument("RoughKernel: admissibility constants not finite");
}

}  // namespace flowlab
