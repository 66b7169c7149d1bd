#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowlab/direction.hpp"
#include "flowlab/level_curve.hpp"
#include "flowlab/measure.hpp"

namespace flowlab {

/// Radius/direction sweep for the ball-and-cone suprema. The geometric radius
/// grid is refined per eval point with the exact atom distances, where the
/// running maximum is attained; adding radii never decreases a value.
struct SweepConfig {
  double rho_min = 1e-3;
  double rho_max = 2.0;
  int radii_per_octave = 8;
  int direction_count = 0;  // 0: max(64, ceil(2*pi/eps)*4)
  std::vector<Vec2> eval_points;
  int threads = 1;
  bool augment_atom_radii = true;

  std::vector<double> make_radii() const;
  int directions_for(double eps) const;
  void validate() const;
};

/// sup over balls of |mu|(B_r)/H^k(B_r); k = 1 measures are averaged on their line.
std::vector<double> hl_maximal(const DiscreteMeasure& mu, const SweepConfig& cfg);

/// sup over (rho, e) of eps^{-d+1} * (cone-restricted mass of B_rho)/L^d(B_rho),
/// cone test |(z-x)/|z-x| - e| <= eps (chordal).
std::vector<double> kakeya_maximal(const DiscreteMeasure& mu, double eps,
                                   const SweepConfig& cfg);

/// I_alpha^k: integral of |x-z|^{alpha-k} d mu(z); atom contributions within
/// collision_floor of an eval point are capped at that distance.
std::vector<double> riesz_potential(const DiscreteMeasure& mu, double alpha,
                                    const std::vector<Vec2>& eval_points,
                                    double collision_floor = 0.0);

/// sup over rho of rho^{-d} * integral over B_rho of |omega((x-y)/|x-y|)| |f(y)| dy.
std::vector<double> directional_maximal(const DirectionFn& omega, const ScalarGrid& f,
                                        const SweepConfig& cfg);

struct Weak11Report {
  LevelCurve curve;
  double tail_estimate = 0.0;  // max of lambda*measure over the top decade
  bool boundary_contact = false;
};

/// Level curve of precomputed operator values plus the empirical limsup
/// surrogate; flags superlevel cells touching the region boundary at the top lambda.
Weak11Report weak11_statistic(const ScalarGrid& values, const std::vector<double>& lambda_grid);

struct SingularMassReport {
  double value = 0.0;      // lambda_top * L^d({M(mu) > lambda_top} in region)
  double reference = 0.0;  // same statistic for a centered Dirac of reference_mass
  double reference_mass = 0.0;
  bool boundary_contact = false;
};

/// Large-lambda tail of the maximal function over a sampling grid of the
/// region, reported against a pure-Dirac calibration run on the same grid.
SingularMassReport singular_mass_detector(const DiscreteMeasure& mu, const Box& region,
                                          int grid_n, double lambda_top,
                                          std::optional<double> reference_mass = std::nullopt,
                                          int threads = 1);

/// (1/|log delta|) * integral over the region of min(|f|/delta, M^k(mu)).
double truncated_log_diagnostic(const ScalarGrid& f, const DiscreteMeasure& mu, double delta,
                                int threads = 1);

}  // namespace flowlab
