#include "flowlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace flowlab {

ScalarGrid::ScalarGrid(Vec2 origin_, double h_, int nx_, int ny_, int dim_)
    : origin(origin_), h(h_), nx(nx_), ny(ny_), dim(dim_) {
  if (h <= 0.0) throw std::invalid_argument("ScalarGrid: spacing must be positive");
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("ScalarGrid: empty extents");
  if (dim == 1 && ny != 1) throw std::invalid_argument("ScalarGrid: dim 1 requires ny == 1");
  values.assign(static_cast<size_t>(nx) * ny, 0.0);
}

ScalarGrid ScalarGrid::fill(const Box& box, int nx, int ny, double value) {
  const double hx = box.width() / nx;
  ScalarGrid g(box.lo, hx, nx, ny, 2);
  std::fill(g.values.begin(), g.values.end(), value);
  return g;
}

ScalarGrid ScalarGrid::sample(const Box& box, int nx, int ny,
                              const std::function<double(Vec2)>& f) {
  const double hx = box.width() / nx;
  ScalarGrid g(box.lo, hx, nx, ny, 2);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) g.at(i, j) = f(g.cell_center(i, j));
  return g;
}

ScalarGrid ScalarGrid::sample_1d(double lo, double hi, int n,
                                 const std::function<double(double)>& f) {
  ScalarGrid g({lo, 0.0}, (hi - lo) / n, n, 1, 1);
  for (int i = 0; i < n; ++i) g.values[i] = f(g.cell_center(i, 0).x);
  return g;
}

double ScalarGrid::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double ScalarGrid::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double ScalarGrid::interp(Vec2 p) const {
  // coordinates in units of cells, relative to the first cell center
  double fx = (p.x - origin.x) / h - 0.5;
  double fy = dim == 1 ? 0.0 : (p.y - origin.y) / h - 0.5;
  fx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(std::max(ny - 1, 0)));
  const int i0 = std::min(static_cast<int>(fx), nx - 2 >= 0 ? nx - 2 : 0);
  const int j0 = std::min(static_cast<int>(fy), ny - 2 >= 0 ? ny - 2 : 0);
  const double ax = fx - i0;
  const double ay = fy - j0;
  if (ny == 1) {
    if (nx == 1) return values[0];
    return (1 - ax) * at(i0, 0) + ax * at(i0 + 1, 0);
  }
  return (1 - ax) * (1 - ay) * at(i0, j0) + ax * (1 - ay) * at(i0 + 1, j0) +
         (1 - ax) * ay * at(i0, j0 + 1) + ax * ay * at(i0 + 1, j0 + 1);
}

void ScalarGrid::validate() const {
  if (values.size() != static_cast<size_t>(nx) * ny)
    throw std::invalid_argument("ScalarGrid: value array length mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("ScalarGrid: non-finite value");
}

void write_grid_csv(const ScalarGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  char buf[96];
  if (g.dim == 1) {
    out << "x,u\n";
    for (int i = 0; i < g.nx; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", g.cell_center(i, 0).x, g.at(i, 0));
      out << buf;
    }
    return;
  }
  out << "x1,x2,u\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 c = g.cell_center(i, j);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", c.x, c.y, g.at(i, j));
      out << buf;
    }
}

}  // namespace flowlab
