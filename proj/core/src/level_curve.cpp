#include "flowlab/level_curve.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace flowlab {

void LevelCurve::validate() const {
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].first <= 0.0)
      throw std::invalid_argument("LevelCurve: lambda must be positive");
    if (points[i].second < 0.0) throw std::invalid_argument("LevelCurve: negative value");
    if (i > 0 && points[i].first <= points[i - 1].first)
      throw std::invalid_argument("LevelCurve: lambda must be strictly increasing");
  }
}

double LevelCurve::max_value() const {
  double m = 0.0;
  for (const auto& [l, v] : points) m = std::max(m, v);
  return m;
}

double superlevel_measure(const ScalarGrid& samples, double lambda) {
  if (lambda <= 0.0) throw std::domain_error("superlevel_measure: lambda must be positive");
  long count = 0;
  for (double v : samples.values)
    if (v > lambda) ++count;
  return samples.cell_volume() * static_cast<double>(count);
}

LevelCurve level_curve(const ScalarGrid& samples, const std::vector<double>& lambda_grid) {
  for (size_t i = 1; i < lambda_grid.size(); ++i)
    if (lambda_grid[i] <= lambda_grid[i - 1])
      throw std::invalid_argument("level_curve: lambda grid must be strictly increasing");
  LevelCurve c;
  c.points.reserve(lambda_grid.size());
  for (double l : lambda_grid) c.points.emplace_back(l, l * superlevel_measure(samples, l));
  c.validate();
  return c;
}

void write_level_curve_csv(const LevelCurve& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "lambda,value\n";
  char buf[80];
  for (const auto& [l, v] : c.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", l, v);
    out << buf;
  }
}

}  // namespace flowlab
