#include "flowlab/direction.hpp"

#include <cmath>
#include <stdexcept>

namespace flowlab {

namespace {
double mean_of(const std::vector<double>& s) {
  double m = 0.0;
  for (double v : s) m += v;
  return m / static_cast<double>(s.size());
}
}  // namespace

DirectionFn::DirectionFn(std::vector<double> samples_) : samples(std::move(samples_)) {
  if (samples.size() < 4) throw std::invalid_argument("DirectionFn: need at least 4 samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw std::invalid_argument("DirectionFn: non-finite sample");
  sphere_mean = mean_of(samples);
}

DirectionFn DirectionFn::from_function(const std::function<double(double)>& f, int n) {
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = f(2.0 * kPi * j / n);
  return DirectionFn(std::move(s));
}

DirectionFn DirectionFn::constant(double c, int n) {
  return DirectionFn(std::vector<double>(n, c));
}

DirectionFn DirectionFn::riesz_sq_1(int n) {
  return from_function([](double t) { return -std::cos(2.0 * t); }, n);
}

DirectionFn DirectionFn::riesz_sq_2(int n) {
  return from_function([](double t) { return std::cos(2.0 * t); }, n);
}

double DirectionFn::at_angle(double theta) const {
  const int n = size();
  double u = theta / (2.0 * kPi) * n;
  u -= std::floor(u / n) * n;
  const int j0 = static_cast<int>(std::floor(u)) % n;
  const double a = u - std::floor(u);
  const int j1 = (j0 + 1) % n;
  return (1.0 - a) * samples[j0] + a * samples[j1];
}

double DirectionFn::sup_abs() const {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  return m;
}

double sphere_seminorm(const DirectionFn& omega, double alpha0, int radial_nodes) {
  if (alpha0 <= 0.0 || alpha0 >= 1.0)
    throw std::domain_error("sphere_seminorm: alpha0 must be in (0,1)");
  const int nt = omega.size();
  const int nr = radial_nodes;
  const double dr = 1.0 / nr;
  const double dt = 2.0 * kPi / nt;

  // L^1 term over the annulus 1 < |x| < 2: area element r dr dtheta.
  double l1 = 0.0;
  for (int j = 0; j < nt; ++j) {
    double radial = 0.0;
    for (int a = 0; a < nr; ++a) {
      const double r = 1.0 + (a + 0.5) * dr;
      radial += r * dr;
    }
    l1 += std::abs(omega.samples[j]) * radial * dt;
  }

  // Gagliardo term: pair weight W(dtheta) = double radial integral of
  // r r' / |x - y|^{d+alpha0}; the diagonal offset is skipped because the
  // Omega difference vanishes there.
  std::vector<double> w(nt, 0.0);
  for (int k = 1; k < nt; ++k) {
    const double cosd = std::cos(k * dt);
    double acc = 0.0;
    for (int a = 0; a < nr; ++a) {
      const double r = 1.0 + (a + 0.5) * dr;
      for (int b = 0; b < nr; ++b) {
        const double rp = 1.0 + (b + 0.5) * dr;
        const double d2 = r * r + rp * rp - 2.0 * r * rp * cosd;
        acc += r * rp / std::pow(d2, (kDim + alpha0) / 2.0) * dr * dr;
      }
    }
    w[k] = acc;
  }
  double gagliardo = 0.0;
  for (int j = 0; j < nt; ++j)
    for (int k = 1; k < nt; ++k) {
      const int j2 = (j + k) % nt;
      gagliardo += std::abs(omega.samples[j] - omega.samples[j2]) * w[k] * dt * dt;
    }
  return l1 + gagliardo;
}

SmoothResult smooth_direction(const DirectionFn& omega, int n) {
  if (n < 1) throw std::invalid_argument("smooth_direction: n must be >= 1");
  const int nt = omega.size();
  const double half_width = 1.0 / n;  // radians
  const int hw = std::max(1, static_cast<int>(std::ceil(half_width / (2.0 * kPi / nt))));
  std::vector<double> ker(2 * hw + 1);
  double ksum = 0.0;
  for (int k = -hw; k <= hw; ++k) {
    const double u = static_cast<double>(k) / (hw + 0.5);
    ker[k + hw] = std::exp(-1.0 / (1.0 - u * u));
    ksum += ker[k + hw];
  }
  for (double& v : ker) v /= ksum;

  std::vector<double> out(nt, 0.0);
  for (int j = 0; j < nt; ++j) {
    double acc = 0.0;
    for (int k = -hw; k <= hw; ++k) acc += ker[k + hw] * omega.samples[((j + k) % nt + nt) % nt];
    out[j] = acc;
  }
  SmoothResult res;
  res.omega = DirectionFn(std::move(out));
  res.drift = res.omega.sphere_mean - omega.sphere_mean;
  if (std::abs(res.drift) > 1e-14) {
    for (double& v : res.omega.samples) v -= res.drift;
    res.omega.sphere_mean -= res.drift;
    res.drift_corrected = true;
  }
  return res;
}

}  // namespace flowlab
