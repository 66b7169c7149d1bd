#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flowlab/fields.hpp"
#include "flowlab/flow.hpp"

namespace flowlab {

/// Flow-pair statistics share the particle cloud and time grid of the flows;
/// particles outside the ball B_r (or escaped) carry no quadrature weight.
struct FlowPairDomain {
  double r = 1.0;  // comparison ball B_r(0)
};

/// Logarithmic comparison functional at the final stored time:
/// integral over B_r of log(1 + |X1 - X2| / delta).
double phi_delta(const ParticleFlow& f1, const ParticleFlow& f2, double delta,
                 const FlowPairDomain& dom);

/// Same integrand per stored time index.
std::vector<double> phi_delta_per_time(const ParticleFlow& f1, const ParticleFlow& f2,
                                       double delta, const FlowPairDomain& dom);

/// Anisotropic functional: (1/2) integral of
/// log(1 + (|dX|^2 + gamma <eta(X1), dX>^2) / delta^2) at the final time.
/// Requires 1 < gamma < |log delta| and a unit eta field.
double phi_anisotropic(const ParticleFlow& f1, const ParticleFlow& f2, double delta,
                       double gamma, const std::function<Vec2(double, Vec2)>& eta_field,
                       const FlowPairDomain& dom);

/// sup over stored times of L^2({x in B_r : |X1 - X2| > sqrt(delta)}).
double superlevel_flow_distance(const ParticleFlow& f1, const ParticleFlow& f2, double delta,
                                const FlowPairDomain& dom);

/// Raw drift integral: time-and-space quadrature of
/// |<eta(X1), B(X1) - B(X2)>| / (delta + |X1 - X2|).
/// Divide by |log delta| for the vanishing-rate diagnostic.
double anisotropic_drift_term(const ParticleFlow& f1, const ParticleFlow& f2,
                              const FieldSpec& field,
                              const std::function<Vec2(double, Vec2)>& eta_field, double delta,
                              const FlowPairDomain& dom);

struct FunctionalReport {
  double delta = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
  double phi_over_logdelta = 0.0;
  double superlevel = 0.0;
  double drift_term = 0.0;
};

struct StabilityCell {
  double sigma = 0.0;
  double delta = 0.0;
  double lhs = 0.0;          // superlevel flow distance
  double perturbation_l1 = 0.0;  // ||(B1-B, B2-B)||_{L^1([0,T] x box)}
  double bound_term(double C, double kappa) const {
    return C / delta * perturbation_l1 + kappa;
  }
};

struct StabilityExperiment {
  std::vector<StabilityCell> cells;
  std::vector<FunctionalReport> reports;
};

/// Integrates the flows of B1 and B2, measures the disagreement statistic and
/// the L^1 size of the perturbations of B over box x [0,T], and tabulates the
/// comparison functionals over the (delta, gamma) grid.
StabilityExperiment stability_experiment(const FieldSpec& B, const FieldSpec& B1,
                                         const FieldSpec& B2,
                                         const std::function<Vec2(double, Vec2)>& eta_field,
                                         const ParticleCloud& cloud, double T, double dt,
                                         const Box& eval_box, const Box& norm_box,
                                         const std::vector<double>& delta_grid,
                                         const std::vector<double>& gamma_grid,
                                         const FlowPairDomain& dom, double sigma_label = 0.0,
                                         int threads = 1);

void write_stability_csv(const std::vector<FunctionalReport>& reports, const std::string& path);

/// ||B1 - B||_{L^1(box x [0,T])} + ||B2 - B||_{L^1(box x [0,T])} by midpoint quadrature.
double perturbation_l1_norm(const FieldSpec& B, const FieldSpec& B1, const FieldSpec& B2,
                            const Box& box, double T, int n = 192, int nt = 6);

}  // namespace flowlab
