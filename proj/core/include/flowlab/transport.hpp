#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flowlab/fields.hpp"
#include "flowlab/grid.hpp"

namespace flowlab {

/// d/dt u + div(B u) = G u + F with data u(0) = u0 on the grid of u0.
struct TransportProblem {
  ScalarGrid u0;
  FieldSpec field;
  std::function<double(double, Vec2)> G;  // zero when empty
  std::function<double(double, Vec2)> F;  // zero when empty
  double T = 1.0;

  double g(double t, Vec2 x) const { return G ? G(t, x) : 0.0; }
  double f(double t, Vec2 x) const { return F ? F(t, x) : 0.0; }
};

enum class LagrangianForm {
  ExpIntegral,  // u0(xbar) exp(-int (div B - G)) + source integral
  Jacobian      // u0(xbar)/JX * exp(int G) + source integral weighted by JX
};

struct LagrangianSolution {
  std::vector<double> times;
  std::vector<ScalarGrid> u;
  std::vector<uint8_t> flagged;  // nodes whose backward characteristic escaped
};

/// Backward characteristics per output node (4th-order steps at
/// dt = min(dt_cap, h/max|B|)), exponent integrals by trapezoid along the
/// characteristic's own time grid. The two algebraic forms of the
/// representation formula are both available and agree to quadrature accuracy.
LagrangianSolution solve_lagrangian(const TransportProblem& problem,
                                    const std::vector<double>& out_times,
                                    LagrangianForm form = LagrangianForm::ExpIntegral,
                                    double dt_cap = 1e-3, const Box& safe_box = {{-8, -8}, {8, 8}},
                                    int threads = 1);

enum class BoundaryMode { Periodic, Outflow };

struct EulerianSolution {
  std::vector<double> times;
  std::vector<ScalarGrid> u;
};

/// First-order conservative upwind update with explicit source terms.
/// Throws when dt violates dt * max|B| / h <= 0.5.
EulerianSolution eulerian_upwind(const TransportProblem& problem,
                                 const std::vector<double>& out_times, double dt,
                                 BoundaryMode boundary = BoundaryMode::Periodic);

/// beta in C^1 with beta'(z) z bounded and beta(0) = 0, plus its derivative.
struct RenormFn {
  std::function<double(double)> beta;
  std::function<double(double)> dbeta;

  static RenormFn rational();                 // z / (1 + z^2)
  static RenormFn truncated_identity(double m);  // identity on [-m, m], capped smoothly
};

/// Max over the fixed interior test bumps of the weak-form residual of
/// d/dt beta(u) + div(B beta(u)) + div B (u beta'(u) - beta(u)) - G u beta'(u) - F beta'(u).
/// Test functions are tensor polynomial bumps on interior sub-boxes.
double renormalization_defect(const LagrangianSolution& sol, const TransportProblem& problem,
                              const RenormFn& fn);

}  // namespace flowlab
