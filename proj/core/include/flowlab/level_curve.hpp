#pragma once

#include <string>
#include <vector>

#include "flowlab/grid.hpp"

namespace flowlab {

/// Pairs (lambda, value) with strictly increasing lambda.
struct LevelCurve {
  std::vector<std::pair<double, double>> points;

  void validate() const;
  double max_value() const;
};

/// L^d({sampled f > lambda}) by cell counting: h^dim * #(cells above lambda).
double superlevel_measure(const ScalarGrid& samples, double lambda);

/// Curve lambda -> lambda * L^d({f > lambda}).
LevelCurve level_curve(const ScalarGrid& samples, const std::vector<double>& lambda_grid);

/// Header `lambda,value`, one row per pair, 17 significant digits.
void write_level_curve_csv(const LevelCurve& c, const std::string& path);

}  // namespace flowlab
