#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flowlab/geometry.hpp"

namespace flowlab {

/// Uniform cell-centered sample grid. `dim == 1` grids lie along the x-axis
/// of their own coordinate frame (ny == 1); cell (i,j) is centered at
/// origin + ((i+1/2)h, (j+1/2)h).
struct ScalarGrid {
  Vec2 origin{0.0, 0.0};
  double h = 1.0;
  int nx = 0;
  int ny = 1;
  int dim = 2;
  std::vector<double> values;

  ScalarGrid() = default;
  ScalarGrid(Vec2 origin_, double h_, int nx_, int ny_, int dim_ = 2);

  static ScalarGrid fill(const Box& box, int nx, int ny, double value = 0.0);
  static ScalarGrid sample(const Box& box, int nx, int ny,
                           const std::function<double(Vec2)>& f);
  static ScalarGrid sample_1d(double lo, double hi, int n,
                              const std::function<double(double)>& f);

  int size() const { return nx * ny; }
  double& at(int i, int j) { return values[static_cast<size_t>(j) * nx + i]; }
  double at(int i, int j) const { return values[static_cast<size_t>(j) * nx + i]; }
  Vec2 cell_center(int i, int j) const {
    return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h};
  }
  double cell_volume() const { return dim == 1 ? h : h * h; }
  Box bounds() const { return {origin, {origin.x + nx * h, origin.y + ny * h}}; }

  double max_abs() const;
  double sum() const;

  /// Bilinear interpolation between cell centers, clamped at the boundary ring.
  double interp(Vec2 p) const;

  void validate() const;
};

/// CSV dump `x1,x2,u` (or `x,u` for dim==1), one row per cell, 17 significant digits.
void write_grid_csv(const ScalarGrid& g, const std::string& path);

}  // namespace flowlab
