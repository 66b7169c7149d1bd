#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowlab/grid.hpp"
#include "flowlab/kernels.hpp"
#include "flowlab/measure.hpp"

namespace flowlab {

enum class FieldKind { Analytic, ShearJump, Convolution, CounterexampleDL, Mollified };

/// Jump-set data for piecewise fields: curve samples, the rank-one pair
/// (value direction xi, spatial normal eta) and the jump magnitude density.
struct JumpStructure {
  std::vector<Vec2> curve;
  Vec2 xi{1.0, 0.0};
  Vec2 eta{0.0, 1.0};
  double jump_density = 0.0;
};

struct VectorGridCache {
  ScalarGrid bx;
  ScalarGrid by;
  Vec2 interp(Vec2 p) const { return {bx.interp(p), by.interp(p)}; }
};

struct FieldSpec {
  FieldKind kind = FieldKind::Analytic;
  std::string name;
  std::function<Vec2(double, Vec2)> eval;
  std::function<double(double, Vec2)> div_analytic;       // empty: use differences
  std::function<Vec2(double, Vec2)> eta;                  // unit field where defined
  std::optional<JumpStructure> jump;
  std::shared_ptr<const VectorGridCache> cache;
  double sigma = 0.0;  // mollification scale, if any
  Box domain{{-1e30, -1e30}, {1e30, 1e30}};

  Vec2 operator()(double t, Vec2 x) const { return eval(t, x); }
  bool has_analytic_div() const { return static_cast<bool>(div_analytic); }
};

FieldSpec zero_field();
FieldSpec constant_field(Vec2 v);
FieldSpec rotation_field();            // (-x2, x1)
FieldSpec linear_field();              // B = x
FieldSpec sine_shear_field();          // (sin x1, 0), div = cos x1
FieldSpec scaled_field(const FieldSpec& base, double factor);

/// B(x) = (sign(x2), 0) with its exact rank-one jump data on {x2 = 0}.
FieldSpec shear_field();

enum class CexRegion { UpperInner, UpperOuter, LowerInner, LowerOuter, Singular };

CexRegion cex_region(Vec2 x);
/// Exact piecewise evaluation; x2 = 0 is the singular set. A region hint
/// resolves evaluation within 1e-12 of the region boundaries.
Vec2 counterexample_field(Vec2 x, std::optional<CexRegion> hint = std::nullopt);
FieldSpec counterexample_field_spec();

/// B^i = sum_j kernels[i][j] * b[j], cached on the grid of b and bilinearly
/// interpolated off-grid. Kernels must pass the admissibility checks.
FieldSpec convolution_field(const std::vector<std::vector<RoughKernel>>& kernels,
                            const std::vector<ScalarGrid>& b);

/// Convolution with the standard bump of radius sigma, cached on box at
/// resolution n per axis; requires sigma >= 2h.
FieldSpec mollify(const FieldSpec& spec, double sigma, const Box& box, int n);

/// Analytic divergence when available, else central differences at spacing h.
/// For piecewise-analytic fields, proximity of the singular set within 2h is
/// flagged.
double divergence(const FieldSpec& spec, double t, Vec2 x, double h = 1e-4,
                  bool* near_singular = nullptr);

struct GrowthSplit {
  double l1_part = 0.0;   // ||(g - tau)_+||_{L^1 L^1}
  double linf_part = 0.0; // ||min(g, tau)||_{L^1 L^inf}
};

/// Splits g = |B|/(1+|x|) at level tau into an integrable part and a bounded
/// part, both norms by midpoint quadrature on box x [0, T].
GrowthSplit growth_split(const FieldSpec& spec, const Box& box, double T, double tau,
                         int n = 128, int nt = 8);

}  // namespace flowlab
