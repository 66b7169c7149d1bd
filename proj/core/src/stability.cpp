#include "flowlab/stability.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace flowlab {

namespace {

void check_pair(const ParticleFlow& f1, const ParticleFlow& f2) {
  if (f1.cloud.points.size() != f2.cloud.points.size() || f1.times.size() != f2.times.size())
    throw std::invalid_argument("flow pair: mismatched clouds or time grids");
}

// particles inside B_r and alive in both flows
bool counted(const ParticleFlow& f1, const ParticleFlow& f2, size_t p, double r) {
  return !f1.escaped[p] && !f2.escaped[p] && f1.cloud.points[p].norm() <= r;
}

}  // namespace

std::vector<double> phi_delta_per_time(const ParticleFlow& f1, const ParticleFlow& f2,
                                       double delta, const FlowPairDomain& dom) {
  check_pair(f1, f2);
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::domain_error("phi_delta: delta must be in (0, 1)");
  const double w = f1.cloud.h_p * f1.cloud.h_p;
  std::vector<double> out(f1.times.size(), 0.0);
  for (size_t k = 0; k < f1.times.size(); ++k) {
    double acc = 0.0;
    for (size_t p = 0; p < f1.cloud.points.size(); ++p) {
      if (!counted(f1, f2, p, dom.r)) continue;
      acc += std::log(1.0 + (f1.positions[k][p] - f2.positions[k][p]).norm() / delta);
    }
    out[k] = acc * w;
  }
  return out;
}

double phi_delta(const ParticleFlow& f1, const ParticleFlow& f2, double delta,
                 const FlowPairDomain& dom) {
  return phi_delta_per_time(f1, f2, delta, dom).back();
}

double phi_anisotropic(const ParticleFlow& f1, const ParticleFlow& f2, double delta,
                       double gamma, const std::function<Vec2(double, Vec2)>& eta_field,
                       const FlowPairDomain& dom) {
  check_pair(f1, f2);
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::domain_error("phi_anisotropic: delta must be in (0, 1)");
  if (!(gamma >= 1.0) || gamma >= std::abs(std::log(delta)))
    throw std::domain_error("phi_anisotropic: need 1 <= gamma < |log delta|");
  const double w = f1.cloud.h_p * f1.cloud.h_p;
  const size_t k = f1.times.size() - 1;
  const double t = f1.times[k];
  double acc = 0.0;
  for (size_t p = 0; p < f1.cloud.points.size(); ++p) {
    if (!counted(f1, f2, p, dom.r)) continue;
    const Vec2 dx = f1.positions[k][p] - f2.positions[k][p];
    const Vec2 eta = eta_field(t, f1.positions[k][p]);
    if (std::abs(eta.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("phi_anisotropic: eta field is not unit");
    const double proj = dot(eta, dx);
    acc += 0.5 * std::log(1.0 + (dx.norm2() + gamma * proj * proj) / (delta * delta));
  }
  return acc * w;
}

double superlevel_flow_distance(const ParticleFlow& f1, const ParticleFlow& f2, double delta,
                                const FlowPairDomain& dom) {
  check_pair(f1, f2);
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::domain_error("superlevel_flow_distance: delta must be in (0, 1)");
  const double w = f1.cloud.h_p * f1.cloud.h_p;
  const double thr = std::sqrt(delta);
  double sup = 0.0;
  for (size_t k = 0; k < f1.times.size(); ++k) {
    double acc = 0.0;
    for (size_t p = 0; p < f1.cloud.points.size(); ++p) {
      if (!counted(f1, f2, p, dom.r)) continue;
      if ((f1.positions[k][p] - f2.positions[k][p]).norm() > thr) acc += w;
    }
    sup = std::max(sup, acc);
  }
  return sup;
}

double anisotropic_drift_term(const ParticleFlow& f1, const ParticleFlow& f2,
                              const FieldSpec& field,
                              const std::function<Vec2(double, Vec2)>& eta_field, double delta,
                              const FlowPairDomain& dom) {
  check_pair(f1, f2);
  if (!(delta > 0.0) || delta >= 1.0)
    throw std::domain_error("anisotropic_drift_term: delta must be in (0, 1)");
  const double w = f1.cloud.h_p * f1.cloud.h_p;
  double acc = 0.0;
  for (size_t k = 0; k < f1.times.size(); ++k) {
    const double t = f1.times[k];
    const double dt_w = k == 0 ? 0.5 * (f1.times[1] - f1.times[0])
                       : k + 1 == f1.times.size()
                           ? 0.5 * (f1.times[k] - f1.times[k - 1])
                           : 0.5 * (f1.times[k + 1] - f1.times[k - 1]);
    double space = 0.0;
    for (size_t p = 0; p < f1.cloud.points.size(); ++p) {
      if (!counted(f1, f2, p, dom.r)) continue;
      const Vec2 x1 = f1.positions[k][p];
      const Vec2 x2 = f2.positions[k][p];
      const Vec2 eta = eta_field(t, x1);
      const double num = std::abs(dot(eta, field.eval(t, x1) - field.eval(t, x2)));
      space += num / (delta + (x1 - x2).norm());
    }
    acc += space * w * dt_w;
  }
  return acc;
}

double perturbation_l1_norm(const FieldSpec& B, const FieldSpec& B1, const FieldSpec& B2,
                            const Box& box, double T, int n, int nt) {
  const double hx = box.width() / n, hy = box.height() / n;
  const double dt = T / nt;
  double acc = 0.0;
  for (int k = 0; k < nt; ++k) {
    const double t = (k + 0.5) * dt;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec2 x{box.lo.x + (i + 0.5) * hx, box.lo.y + (j + 0.5) * hy};
        acc += ((B1.eval(t, x) - B.eval(t, x)).norm() + (B2.eval(t, x) - B.eval(t, x)).norm()) *
               hx * hy * dt;
      }
  }
  return acc;
}

StabilityExperiment stability_experiment(const FieldSpec& B, const FieldSpec& B1,
                                         const FieldSpec& B2,
                                         const std::function<Vec2(double, Vec2)>& eta_field,
                                         const ParticleCloud& cloud, double T, double dt,
                                         const Box& eval_box, const Box& norm_box,
                                         const std::vector<double>& delta_grid,
                                         const std::vector<double>& gamma_grid,
                                         const FlowPairDomain& dom, double sigma_label,
                                         int threads) {
  StabilityExperiment exp;
  const ParticleFlow f1 = integrate_flow(B1, cloud, 0.0, T, dt, eval_box, 4, threads);
  const ParticleFlow f2 = integrate_flow(B2, cloud, 0.0, T, dt, eval_box, 4, threads);
  const double pert = perturbation_l1_norm(B, B1, B2, norm_box, T);

  for (double delta : delta_grid) {
    StabilityCell cell;
    cell.sigma = sigma_label;
    cell.delta = delta;
    cell.lhs = superlevel_flow_distance(f1, f2, delta, dom);
    cell.perturbation_l1 = pert;
    exp.cells.push_back(cell);

    for (double gamma : gamma_grid) {
      // the admitted range is 1 <= gamma < |log delta|; other cells are skipped
      if (!(gamma >= 1.0) || gamma >= std::abs(std::log(delta))) continue;
      FunctionalReport rep;
      rep.delta = delta;
      rep.gamma = gamma;
      rep.phi = phi_anisotropic(f1, f2, delta, gamma, eta_field, dom);
      rep.phi_over_logdelta = rep.phi / std::abs(std::log(delta));
      rep.superlevel = cell.lhs;
      rep.drift_term = anisotropic_drift_term(f1, f2, B, eta_field, delta, dom);
      exp.reports.push_back(rep);
    }
  }
  return exp;
}

void write_stability_csv(const std::vector<FunctionalReport>& reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "delta,gamma,phi,phi_over_logdelta,superlevel,drift_term\n";
  char buf[160];
  for (const FunctionalReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.delta, r.gamma,
                  r.phi, r.phi_over_logdelta, r.superlevel, r.drift_term);
    out << buf;
  }
}

}  // namespace flowlab
