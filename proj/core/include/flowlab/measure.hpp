#pragma once

#include <optional>
#include <vector>

#include "flowlab/geometry.hpp"
#include "flowlab/grid.hpp"

namespace flowlab {

struct Atom {
  Vec2 pos;
  double weight = 0.0;
};

/// Signed Radon measure as weighted atoms plus an optional grid density.
/// `subspace_dim == 1` measures live on the line through `line_origin` with
/// direction `axis`; their atoms still carry plane coordinates.
struct DiscreteMeasure {
  std::vector<Atom> atoms;
  std::optional<ScalarGrid> density;
  int subspace_dim = 2;
  Vec2 axis{1.0, 0.0};
  Vec2 line_origin{0.0, 0.0};
  Box bounding_box{{-1e30, -1e30}, {1e30, 1e30}};

  void validate() const;

  static DiscreteMeasure dirac(Vec2 p, double mass = 1.0, int k = 2);
  static DiscreteMeasure from_atoms(std::vector<Atom> atoms, int k = 2);
  static DiscreteMeasure from_density(ScalarGrid density, int k = 2);
  /// Uniform atom sampling along a polyline; weight per atom is
  /// (arc length per sample) * jump_height.
  static DiscreteMeasure sample_curve(const std::vector<Vec2>& polyline, double jump_height,
                                      double spacing);

  DiscreteMeasure scaled(double c) const;
};

/// Total variation: sum of |atom weights| plus h^k * sum of |density|.
double measure_total_variation(const DiscreteMeasure& mu);

/// d-tuple of component measures sharing atom locations, with optional
/// rank-one direction data attached to the atoms.
struct VectorMeasure {
  std::vector<DiscreteMeasure> components;
  std::vector<Vec2> xi;   // value jump direction, unit where present
  std::vector<Vec2> eta;  // spatial direction, unit where present

  void validate() const;
};

}  // namespace flowlab
