#include "flowlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flowlab/parallel.hpp"

namespace flowlab {

namespace {

struct Mass {
  Vec2 pos;
  double w;  // nonnegative: total-variation weight
};

// Atoms plus density cells, with |weights|; the carrier of |mu|.
std::vector<Mass> variation_masses(const DiscreteMeasure& mu) {
  std::vector<Mass> out;
  out.reserve(mu.atoms.size());
  for (const Atom& a : mu.atoms) out.push_back({a.pos, std::abs(a.weight)});
  if (mu.density) {
    const ScalarGrid& g = *mu.density;
    const double cv = g.dim == 1 ? g.h : g.cell_volume();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double v = g.at(i, j);
        if (v == 0.0) continue;
        Vec2 p = g.cell_center(i, j);
        if (mu.subspace_dim == 1) p = mu.line_origin + mu.axis * p.x;
        out.push_back({p, std::abs(v) * cv});
      }
  }
  return out;
}

}  // namespace

std::vector<double> SweepConfig::make_radii() const {
  validate();
  std::vector<double> radii;
  const double ratio = std::pow(2.0, 1.0 / radii_per_octave);
  for (double r = rho_min; r < rho_max * (1.0 + 1e-12); r *= ratio) radii.push_back(r);
  if (radii.empty() || radii.back() < rho_max) radii.push_back(rho_max);
  return radii;
}

int SweepConfig::directions_for(double eps) const {
  if (direction_count > 0) return direction_count;
  return std::max(64, static_cast<int>(std::ceil(2.0 * kPi / eps)) * 4);
}

void SweepConfig::validate() const {
  if (!(rho_min > 0.0) || !(rho_min < rho_max))
    throw config_error("SweepConfig: need 0 < rho_min < rho_max");
  if (radii_per_octave < 1) throw config_error("SweepConfig: empty radii grid");
}

std::vector<double> hl_maximal(const DiscreteMeasure& mu, const SweepConfig& cfg) {
  cfg.validate();
  const int k = mu.subspace_dim;
  const std::vector<Mass> masses = variation_masses(mu);
  const std::vector<double> grid_radii = cfg.make_radii();
  std::vector<double> out(cfg.eval_points.size(), 0.0);

  parallel_for(static_cast<long>(cfg.eval_points.size()), cfg.threads, [&](long pi) {
    const Vec2 x = cfg.eval_points[pi];
    // (distance, weight) pairs inside the radius range
    std::vector<std::pair<double, double>> rw;
    rw.reserve(masses.size());
    for (const Mass& m : masses) {
      const double r = dist(x, m.pos);
      if (r <= cfg.rho_max) rw.emplace_back(std::max(r, cfg.rho_min), m.w);
    }
    std::sort(rw.begin(), rw.end());
    double best = 0.0;
    if (cfg.augment_atom_radii) {
      // the running maximum of mass(B_r)/H^k(B_r) is attained at mass radii
      double cum = 0.0;
      size_t i = 0;
      while (i < rw.size()) {
        const double r = rw[i].first;
        while (i < rw.size() && rw[i].first == r) cum += rw[i++].second;
        best = std::max(best, cum / ball_measure(k, r));
      }
    } else {
      double cum = 0.0;
      size_t i = 0;
      for (double r : grid_radii) {
        while (i < rw.size() && rw[i].first <= r) cum += rw[i++].second;
        best = std::max(best, cum / ball_measure(k, r));
      }
    }
    out[pi] = best;
  });
  return out;
}

std::vector<double> kakeya_maximal(const DiscreteMeasure& mu, double eps,
                                   const SweepConfig& cfg) {
  if (!(eps > 0.0) || eps > 0.5)
    throw std::domain_error("kakeya_maximal: eps must be in (0, 1/2]");
  cfg.validate();
  const std::vector<Mass> masses = variation_masses(mu);
  const std::vector<double> radii = cfg.make_radii();
  const int nr = static_cast<int>(radii.size());
  const int ne = cfg.directions_for(eps);
  const double dtheta = 2.0 * kPi / ne;
  const double half_angle = 2.0 * std::asin(eps / 2.0);  // chordal |u-e| <= eps
  const double log_ratio = std::log(radii[1] / radii[0]);
  std::vector<double> out(cfg.eval_points.size(), 0.0);

  parallel_for(static_cast<long>(cfg.eval_points.size()), cfg.threads, [&](long pi) {
    const Vec2 x = cfg.eval_points[pi];
    std::vector<double> table(static_cast<size_t>(nr) * ne, 0.0);
    for (const Mass& m : masses) {
      const Vec2 d = m.pos - x;
      const double r = d.norm();
      if (r > radii.back()) continue;
      int row = 0;
      if (r > radii.front())
        row = std::min(nr - 1, static_cast<int>(std::ceil(std::log(r / radii.front()) / log_ratio - 1e-12)));
      double* rowp = &table[static_cast<size_t>(row) * ne];
      if (r == 0.0) {
        // direction degenerate: the mass sits in every cone
        for (int j = 0; j < ne; ++j) rowp[j] += m.w;
        continue;
      }
      const double phi = std::atan2(d.y, d.x);
      const int lo = static_cast<int>(std::ceil((phi - half_angle) / dtheta));
      const int hi = static_cast<int>(std::floor((phi + half_angle) / dtheta));
      if (hi < lo) continue;  // cone thinner than the direction grid
      const int len = std::min(hi - lo + 1, ne);
      const int start = ((lo % ne) + ne) % ne;
      // difference-array insert of the wrapped index interval [start, start+len)
      if (start + len <= ne) {
        rowp[start] += m.w;
        if (start + len < ne) rowp[start + len] -= m.w;
      } else {
        rowp[start] += m.w;
        rowp[0] += m.w;
        rowp[start + len - ne] -= m.w;
      }
    }
    // prefix sums in e per row, then accumulate over increasing radius
    std::vector<double> running(ne, 0.0);
    double best = 0.0;
    for (int ri = 0; ri < nr; ++ri) {
      double* rowp = &table[static_cast<size_t>(ri) * ne];
      double acc = 0.0;
      for (int j = 0; j < ne; ++j) {
        acc += rowp[j];
        running[j] += acc;
      }
      const double inv_ball = 1.0 / ball_measure(2, radii[ri]);
      for (int j = 0; j < ne; ++j) best = std::max(best, running[j] * inv_ball);
    }
    out[pi] = best / eps;  // eps^{-d+1}, d = 2
  });
  return out;
}

std::vector<double> riesz_potential(const DiscreteMeasure& mu, double alpha,
                                    const std::vector<Vec2>& eval_points,
                                    double collision_floor) {
  const int k = mu.subspace_dim;
  if (!(alpha > 0.0) || !(alpha < k))
    throw std::domain_error("riesz_potential: alpha must be in (0, k)");
  std::vector<std::pair<Vec2, double>> signed_masses;
  for (const Atom& a : mu.atoms) signed_masses.emplace_back(a.pos, a.weight);
  if (mu.density) {
    const ScalarGrid& g = *mu.density;
    const double cv = g.dim == 1 ? g.h : g.cell_volume();
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (g.at(i, j) == 0.0) continue;
        Vec2 p = g.cell_center(i, j);
        if (k == 1) p = mu.line_origin + mu.axis * p.x;
        signed_masses.emplace_back(p, g.at(i, j) * cv);
      }
  }
  std::vector<double> out(eval_points.size(), 0.0);
  for (size_t pi = 0; pi < eval_points.size(); ++pi) {
    double acc = 0.0;
    for (const auto& [p, w] : signed_masses) {
      double r = dist(eval_points[pi], p);
      if (r < collision_floor) r = collision_floor;
      if (r == 0.0) throw std::domain_error("riesz_potential: eval point on an atom");
      acc += w * std::pow(r, alpha - k);
    }
    out[pi] = acc;
  }
  return out;
}

std::vector<double> directional_maximal(const DirectionFn& omega, const ScalarGrid& f,
                                        const SweepConfig& cfg) {
  cfg.validate();
  const std::vector<double> radii = cfg.make_radii();
  const int nr = static_cast<int>(radii.size());
  const double log_ratio = std::log(radii[1] / radii[0]);
  const double cv = f.cell_volume();
  std::vector<double> out(cfg.eval_points.size(), 0.0);

  parallel_for(static_cast<long>(cfg.eval_points.size()), cfg.threads, [&](long pi) {
    const Vec2 x = cfg.eval_points[pi];
    std::vector<double> hist(nr, 0.0);
    for (int j = 0; j < f.ny; ++j)
      for (int i = 0; i < f.nx; ++i) {
        const double v = f.at(i, j);
        if (v == 0.0) continue;
        const Vec2 y = f.cell_center(i, j);
        const Vec2 d = x - y;
        const double r = d.norm();
        if (r > radii.back() || r == 0.0) continue;  // self-cell skipped
        int row = 0;
        if (r > radii.front())
          row = std::min(nr - 1, static_cast<int>(std::ceil(std::log(r / radii.front()) / log_ratio - 1e-12)));
        hist[row] += std::abs(omega.at_dir(d / r)) * std::abs(v) * cv;
      }
    double best = 0.0, cum = 0.0;
    for (int ri = 0; ri < nr; ++ri) {
      cum += hist[ri];
      best = std::max(best, cum / std::pow(radii[ri], kDim));
    }
    out[pi] = best;
  });
  return out;
}

Weak11Report weak11_statistic(const ScalarGrid& values, const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) throw config_error("weak11_statistic: empty lambda grid");
  Weak11Report rep;
  rep.curve = level_curve(values, lambda_grid);
  const double lmax = lambda_grid.back();
  const double decade_lo = std::max(lmax / 10.0, lambda_grid.front());
  for (const auto& [l, v] : rep.curve.points)
    if (l >= decade_lo) rep.tail_estimate = std::max(rep.tail_estimate, v);
  for (int j = 0; j < values.ny; ++j)
    for (int i = 0; i < values.nx; ++i) {
      const bool boundary = i == 0 || j == 0 || i == values.nx - 1 || j == values.ny - 1;
      if (boundary && values.at(i, j) > decade_lo) {
        rep.boundary_contact = true;
        return rep;
      }
    }
  return rep;
}

SingularMassReport singular_mass_detector(const DiscreteMeasure& mu, const Box& region,
                                          int grid_n, double lambda_top,
                                          std::optional<double> reference_mass, int threads) {
  if (lambda_top <= 0.0) throw std::domain_error("singular_mass_detector: lambda_top > 0");
  SingularMassReport rep;
  double atom_tv = 0.0;
  for (const Atom& a : mu.atoms) atom_tv += std::abs(a.weight);
  rep.reference_mass = reference_mass.value_or(atom_tv > 0.0 ? atom_tv : 1.0);

  const double h = region.width() / grid_n;
  SweepConfig cfg;
  cfg.rho_min = h / 2.0;
  cfg.rho_max = 1.5 * std::max(region.width(), region.height());
  cfg.threads = threads;
  ScalarGrid vals(region.lo, h, grid_n, static_cast<int>(std::round(region.height() / h)), 2);
  for (int j = 0; j < vals.ny; ++j)
    for (int i = 0; i < vals.nx; ++i) cfg.eval_points.push_back(vals.cell_center(i, j));

  auto run = [&](const DiscreteMeasure& m) {
    std::vector<double> v = hl_maximal(m, cfg);
    ScalarGrid g = vals;
    g.values = std::move(v);
    return g;
  };
  ScalarGrid g = run(mu);
  rep.value = lambda_top * superlevel_measure(g, lambda_top);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if ((i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) && g.at(i, j) > lambda_top)
        rep.boundary_contact = true;

  DiscreteMeasure ref = DiscreteMeasure::dirac(region.center(), rep.reference_mass, mu.subspace_dim);
  ScalarGrid gr = run(ref);
  rep.reference = lambda_top * superlevel_measure(gr, lambda_top);
  return rep;
}

double truncated_log_diagnostic(const ScalarGrid& f, const DiscreteMeasure& mu, double delta,
                                int threads) {
  if (delta >= 1.0 || delta <= 0.0)
    throw std::domain_error("truncated_log_diagnostic: delta must be in (0, 1)");
  const int k = mu.subspace_dim;
  SweepConfig cfg;
  cfg.rho_min = f.h / 2.0;
  const Box b = f.bounds();
  cfg.rho_max = 2.0 * std::max(b.width(), k == 1 ? b.width() : b.height());
  cfg.threads = threads;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) {
      Vec2 p = f.cell_center(i, j);
      if (k == 1) p = mu.line_origin + mu.axis * p.x;
      cfg.eval_points.push_back(p);
    }
  const std::vector<double> m = hl_maximal(mu, cfg);
  const double cv = f.dim == 1 ? f.h : f.cell_volume();
  double acc = 0.0;
  for (size_t i = 0; i < m.size(); ++i)
    acc += std::min(std::abs(f.values[i]) / delta, m[i]) * cv;
  return acc / std::abs(std::log(delta));
}

}  // namespace flowlab
