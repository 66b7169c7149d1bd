#include "flowlab/bumps.hpp"

#include <cmath>
#include <stdexcept>

#include "flowlab/kernels.hpp"

namespace flowlab {

namespace {

// psi plateau mass for d = 2: 2 * (1/2 + 1/4) = 3/2 before normalization
constexpr double kPsiNorm = 2.0 / 3.0;

struct PhiParts {
  double common = 0.0;  // 2^{d-1} rho psi, zero off support
  double ab = 0.0;
  double t = 0.0;  // (a.b) c
  Vec2 a_perp{0.0, 0.0};  // a - (a.b) b
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};
  double c = 0.0;
};

bool phi_parts(Vec2 a, Vec2 b, double c, double eps, PhiParts& out) {
  const double ab = dot(a, b);
  if (ab <= 0.0 || c <= 0.0) return false;
  const double t = ab * c;
  const double rho = partition_cutoff(t);
  if (rho == 0.0) return false;
  const Vec2 a_perp = a - b * ab;
  const double denom = eps * ab * (1.0 - t);
  if (denom <= 0.0) return false;
  const double psi = transverse_profile(2.0 * a_perp.norm() / denom);
  if (psi == 0.0) return false;
  out.common = 2.0 * rho * psi;  // 2^{d-1}, d = 2
  out.ab = ab;
  out.t = t;
  out.a_perp = a_perp;
  out.a = a;
  out.b = b;
  out.c = c;
  return true;
}

}  // namespace

double transverse_profile(double t) {
  if (t < 0.0 || t >= 1.0) return 0.0;
  const double raw = t <= 0.5 ? 1.0 : smoothstep(2.0 * (1.0 - t));
  return raw * kPsiNorm;
}

double BumpPair::theta1(Vec2 z) const {
  const double c = z.norm();
  if (c == 0.0) return 0.0;
  PhiParts p;
  if (!phi_parts(z / c, e, c, eps1, p)) return 0.0;
  const double d1 = p.ab * p.ab * (1.0 - p.t);  // (a.b)^d (1-t)^{d-1}, d = 2
  return p.common / d1;
}

Vec2 BumpPair::theta2(Vec2 z) const {
  const double c = z.norm();
  if (c == 0.0) return {0.0, 0.0};
  PhiParts p;
  if (!phi_parts(z / c, e, c, eps1, p)) return {0.0, 0.0};
  const double d1 = p.ab * p.ab * (1.0 - p.t);        // (a.b)^d (1-t)^{d-1}
  const double d2 = p.ab * (1.0 - p.t) * (1.0 - p.t);  // (a.b)^{d-1} (1-t)^d
  const Vec2 first = (p.a - p.b) * (p.common / (d1 * eps1));
  const Vec2 second = p.a_perp * (p.c * p.common / (d2 * eps1));
  return first - second;
}

int BumpPair::support_violations(int samples) const {
  int bad = 0;
  // low-discrepancy-ish sweep of the disk of radius 1.2
  for (int i = 0; i < samples; ++i) {
    const double r = 1.2 * std::sqrt((i + 0.5) / samples);
    const double th = 2.0 * kPi * std::fmod(0.6180339887498949 * i, 1.0);
    const Vec2 z{r * std::cos(th), r * std::sin(th)};
    const double v1 = theta1(z);
    const Vec2 v2 = theta2(z);
    if (v1 == 0.0 && v2.norm() == 0.0) continue;
    const bool in_ball = z.norm() <= 0.75 + 1e-12;
    const bool in_cone = (unit(z) - e).norm() <= eps1 + 1e-12;
    if (!in_ball || !in_cone) ++bad;
    if (v1 < 0.0) ++bad;
  }
  return bad;
}

double BumpPair::bound_constant(int samples) const {
  const double half = 2.0 * std::asin(eps1 / 2.0);
  const double phi_e = std::atan2(e.y, e.x);
  const double fd = 1e-7;
  double best = 0.0;
  const int na = 60, nr = samples / 60 + 1;
  for (int a = 0; a < na; ++a) {
    const double th = phi_e + (2.0 * (a + 0.5) / na - 1.0) * half;
    for (int ri = 1; ri <= nr; ++ri) {
      const double s = 0.74 * ri / nr;
      const Vec2 z{s * std::cos(th), s * std::sin(th)};
      for (int l = 0; l < 2; ++l) {
        auto f = [&](Vec2 p) { return l == 0 ? theta1(p) : theta2(p).norm(); };
        const double gx = (f({z.x + fd, z.y}) - f({z.x - fd, z.y})) / (2 * fd);
        const double gy = (f({z.x, z.y + fd}) - f({z.x, z.y - fd})) / (2 * fd);
        best = std::max(best, f(z) + eps1 * s * std::hypot(gx, gy));
      }
    }
  }
  return best;
}

double BumpPair::mass_theta1(int radial, int angular) const {
  const double half = 2.0 * std::asin(eps1 / 2.0);
  const double phi_e = std::atan2(e.y, e.x);
  const double ds = 0.75 / radial;
  const double dth = 2.0 * half / angular;
  double acc = 0.0;
  for (int a = 0; a < angular; ++a) {
    const double th = phi_e - half + (a + 0.5) * dth;
    for (int ri = 0; ri < radial; ++ri) {
      const double s = (ri + 0.5) * ds;
      acc += theta1({s * std::cos(th), s * std::sin(th)}) * s * ds * dth;
    }
  }
  return acc / eps1;  // eps^{-d+1}, d = 2
}

double BumpPair::mass_theta2(int radial, int angular) const {
  const double half = 2.0 * std::asin(eps1 / 2.0);
  const double phi_e = std::atan2(e.y, e.x);
  const double ds = 0.75 / radial;
  const double dth = 2.0 * half / angular;
  double acc = 0.0;
  for (int a = 0; a < angular; ++a) {
    const double th = phi_e - half + (a + 0.5) * dth;
    for (int ri = 0; ri < radial; ++ri) {
      const double s = (ri + 0.5) * ds;
      acc += theta2({s * std::cos(th), s * std::sin(th)}).norm() * s * ds * dth;
    }
  }
  return acc / eps1;
}

BumpPair build_bump_pair(double eps1, Vec2 e) {
  if (!(eps1 > 0.0) || eps1 >= 0.01)
    throw std::domain_error("build_bump_pair: eps1 must be in (0, 1/100)");
  BumpPair b;
  b.eps1 = eps1;
  b.e = unit(e);
  return b;
}

double difference_representation(const std::function<Vec2(Vec2)>& grad_f, Vec2 x, Vec2 y,
                                 double eps1, DiffReprQuad quad) {
  if ((x - y).norm() == 0.0)
    throw std::domain_error("difference_representation: x and y must differ");
  const double r = (x - y).norm();
  const Vec2 e1 = (x - y) / r;
  const Vec2 e2 = -e1;
  const BumpPair bx = build_bump_pair(eps1, e1);
  const BumpPair by = build_bump_pair(eps1, e2);

  // One center's pair of integrals: the integrand lives on the cone of
  // chordal width eps1 truncated at radius (3/4) r around the center.
  auto center_part = [&](const Vec2& ctr, const BumpPair& bump, const Vec2& edir) {
    const double half = std::asin(eps1 / 2.0) * 2.0;
    const double phi_e = std::atan2(edir.y, edir.x);
    const double smax = 0.75 * r;
    const double ds = smax / quad.radial;
    const double dth = 2.0 * half / quad.angular;
    double acc = 0.0;
    for (int a = 0; a < quad.angular; ++a) {
      const double th = phi_e - half + (a + 0.5) * dth;
      const Vec2 u{std::cos(th), std::sin(th)};
      for (int ri = 0; ri < quad.radial; ++ri) {
        const double s = (ri + 0.5) * ds;
        const Vec2 w = u * (s / r);  // (ctr - z)/|x - y|
        const double t1 = bump.theta1(w);
        const Vec2 t2 = bump.theta2(w);
        if (t1 == 0.0 && t2.x == 0.0 && t2.y == 0.0) continue;
        const Vec2 g = grad_f(ctr - u * s);
        // 1/|ctr-z| cancels the polar Jacobian; eps^{-d+2} = 1 for d = 2
        acc += (t1 / eps1 * dot(edir, g) + dot(t2, g)) * ds * dth;
      }
    }
    return acc;
  };

  return center_part(x, bx, e1) - center_part(y, by, e2);
}

}  // namespace flowlab
