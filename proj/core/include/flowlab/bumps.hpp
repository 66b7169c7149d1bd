#pragma once

#include <functional>

#include "flowlab/geometry.hpp"

namespace flowlab {

/// Directional bump pair supported in B_{3/4} within the chordal eps1-cone
/// around e. theta1 is scalar and nonnegative, theta2 vector valued; both are
/// built from the explicit profile
///   phi_1(a,b,c) = 2^{d-1} rho((a.b)c) psi(2|a-(a.b)b| / (eps (a.b)(1-(a.b)c)))
///                  / ((a.b)^d (1-(a.b)c)^{d-1})
/// (and the matching two-term phi_2), evaluated at a = z/|z|, b = e, c = |z|.
struct BumpPair {
  double eps1 = 0.01;
  Vec2 e{1.0, 0.0};

  double theta1(Vec2 z) const;
  Vec2 theta2(Vec2 z) const;

  /// number of sample points violating supp in B_{3/4} within the cone
  int support_violations(int samples = 10000) const;
  /// sup over samples of |theta_l| + eps1 |z| |grad theta_l| (finite differences)
  double bound_constant(int samples = 4000) const;
  /// eps1^{-d+1} * integral of theta1, and of |theta2|, by polar quadrature
  double mass_theta1(int radial = 200, int angular = 200) const;
  double mass_theta2(int radial = 200, int angular = 200) const;
};

/// pre: eps1 in (0, 1/100)
BumpPair build_bump_pair(double eps1, Vec2 e);

/// Transverse profile psi: plateau on [0,1/2], smooth decay to zero at 1,
/// normalized to unit mass on R^{d-1}.
double transverse_profile(double t);

struct DiffReprQuad {
  int radial = 256;
  int angular = 128;
};

/// Evaluates the four cone integrals that reconstruct f(x) - f(y) from the
/// gradient field, with e1 = -e2 = (x-y)/|x-y|. Converges to f(x) - f(y) as
/// the quadrature refines.
double difference_representation(const std::function<Vec2(Vec2)>& grad_f, Vec2 x, Vec2 y,
                                 double eps1, DiffReprQuad quad = {});

}  // namespace flowlab
