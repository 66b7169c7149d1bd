#include "flowlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "flowlab/parallel.hpp"

namespace flowlab {

ParticleCloud ParticleCloud::lattice(const Box& box, double h_p) {
  if (h_p <= 0.0) throw std::invalid_argument("ParticleCloud: spacing must be positive");
  ParticleCloud c;
  c.box = box;
  c.h_p = h_p;
  c.nx = static_cast<int>(std::floor(box.width() / h_p + 0.5)) + 1;
  c.ny = static_cast<int>(std::floor(box.height() / h_p + 0.5)) + 1;
  c.points.reserve(static_cast<size_t>(c.nx) * c.ny);
  for (int j = 0; j < c.ny; ++j)
    for (int i = 0; i < c.nx; ++i)
      c.points.push_back({box.lo.x + i * h_p, box.lo.y + j * h_p});
  return c;
}

int ParticleFlow::n_escaped() const {
  int n = 0;
  for (uint8_t e : escaped) n += e;
  return n;
}

ParticleFlow integrate_flow(const FieldSpec& spec, const ParticleCloud& cloud, double t0,
                            double T, double dt, const Box& eval_box, int store_every,
                            int threads) {
  if (dt <= 0.0) throw std::invalid_argument("integrate_flow: dt must be positive");
  if (T < t0) throw std::invalid_argument("integrate_flow: T must be >= t0");
  const long n_steps = static_cast<long>(std::ceil((T - t0) / dt - 1e-12));

  ParticleFlow flow;
  flow.cloud = cloud;
  flow.dt = dt;
  flow.escaped.assign(cloud.points.size(), 0);
  flow.times.push_back(t0);
  for (long s = 1; s <= n_steps; ++s) {
    if (s % store_every == 0 || s == n_steps) flow.times.push_back(std::min(t0 + s * dt, T));
  }
  flow.positions.assign(flow.times.size(), cloud.points);

  parallel_for(static_cast<long>(cloud.points.size()), threads, [&](long pi) {
    Vec2 x = cloud.points[static_cast<size_t>(pi)];
    size_t slot = 1;
    bool out = false;
    double t = t0;
    for (long s = 1; s <= n_steps; ++s) {
      const double step = std::min(dt, T - t);
      if (!out) {
        const Vec2 k1 = spec.eval(t, x);
        const Vec2 k2 = spec.eval(t + step / 2, x + k1 * (step / 2));
        const Vec2 k3 = spec.eval(t + step / 2, x + k2 * (step / 2));
        const Vec2 k4 = spec.eval(t + step, x + k3 * step);
        x += (k1 + (k2 + k3) * 2.0 + k4) * (step / 6.0);
        if (!eval_box.contains(x) || !x.finite()) {
          out = true;  // freeze at the escape position
          flow.escaped[static_cast<size_t>(pi)] = 1;
        }
      }
      t += step;
      if (slot < flow.times.size() && (s % store_every == 0 || s == n_steps)) {
        flow.positions[slot][static_cast<size_t>(pi)] = x;
        ++slot;
      }
    }
  });
  return flow;
}

double compressibility(const ParticleFlow& flow, const Box& cells_box, int cells_n,
                       bool* under_resolved) {
  const double hx = cells_box.width() / cells_n;
  const double hy = cells_box.height() / cells_n;
  const double cell_vol = hx * hy;
  const double particle_vol = flow.cloud.h_p * flow.cloud.h_p;
  double worst = 0.0;
  double avg_occupancy = 0.0;
  long avg_count = 0;
  std::vector<int> cells(static_cast<size_t>(cells_n) * cells_n);
  for (const auto& snapshot : flow.positions) {
    std::fill(cells.begin(), cells.end(), 0);
    for (size_t p = 0; p < snapshot.size(); ++p) {
      if (flow.escaped[p]) continue;
      const Vec2 x = snapshot[p];
      const int i = static_cast<int>(std::floor((x.x - cells_box.lo.x) / hx));
      const int j = static_cast<int>(std::floor((x.y - cells_box.lo.y) / hy));
      if (i < 0 || j < 0 || i >= cells_n || j >= cells_n) continue;
      ++cells[static_cast<size_t>(j) * cells_n + i];
    }
    for (int c : cells) {
      if (c == 0) continue;
      worst = std::max(worst, c * particle_vol / cell_vol);
      avg_occupancy += c;
      ++avg_count;
    }
  }
  if (under_resolved) *under_resolved = avg_count == 0 || avg_occupancy / avg_count < 4.0;
  return worst;
}

SublevelReport sublevel_GR(const ParticleFlow& flow, double R) {
  SublevelReport rep;
  rep.in_sublevel.assign(flow.cloud.points.size(), 1);
  for (const auto& snapshot : flow.positions)
    for (size_t p = 0; p < snapshot.size(); ++p)
      if (snapshot[p].norm() > R) rep.in_sublevel[p] = 0;
  double outside = 0.0;
  const double pv = flow.cloud.h_p * flow.cloud.h_p;
  for (uint8_t v : rep.in_sublevel)
    if (!v) outside += pv;
  rep.measure_outside = outside;
  return rep;
}

JacobianTrack jacobian_track(const FieldSpec& spec, const ParticleFlow& flow) {
  const size_t nt = flow.times.size();
  const size_t np = flow.cloud.points.size();
  JacobianTrack track;
  track.jx_exp.assign(nt, std::vector<double>(np, 1.0));
  track.det_fd.assign(nt, std::vector<double>(np, std::numeric_limits<double>::quiet_NaN()));

  // trapezoid rule on div B along each stored trajectory
  std::vector<double> acc(np, 0.0);
  std::vector<double> prev_div(np, 0.0);
  for (size_t k = 0; k < nt; ++k) {
    for (size_t p = 0; p < np; ++p) {
      const double d = flow.escaped[p] ? 0.0 : divergence(spec, flow.times[k], flow.positions[k][p]);
      if (k > 0) acc[p] += 0.5 * (prev_div[p] + d) * (flow.times[k] - flow.times[k - 1]);
      prev_div[p] = d;
      track.jx_exp[k][p] = std::exp(acc[p]);
    }
  }

  const int nx = flow.cloud.nx, ny = flow.cloud.ny;
  const double two_h = 2.0 * flow.cloud.h_p;
  for (size_t k = 0; k < nt; ++k) {
    for (int j = 1; j + 1 < ny; ++j)
      for (int i = 1; i + 1 < nx; ++i) {
        const int p = flow.cloud.index(i, j);
        const int px0 = flow.cloud.index(i - 1, j), px1 = flow.cloud.index(i + 1, j);
        const int py0 = flow.cloud.index(i, j - 1), py1 = flow.cloud.index(i, j + 1);
        if (flow.escaped[px0] || flow.escaped[px1] || flow.escaped[py0] || flow.escaped[py1])
          continue;
        const Vec2 dx = (flow.positions[k][px1] - flow.positions[k][px0]) / two_h;
        const Vec2 dy = (flow.positions[k][py1] - flow.positions[k][py0]) / two_h;
        track.det_fd[k][p] = dx.x * dy.y - dx.y * dy.x;
      }
  }
  return track;
}

double semigroup_residual(const FieldSpec& spec, const ParticleCloud& cloud, double s, double t,
                          double dt, const Box& eval_box) {
  const ParticleFlow f_s = integrate_flow(spec, cloud, 0.0, s, dt, eval_box, 1 << 20);
  const ParticleFlow f_t = integrate_flow(spec, cloud, 0.0, t, dt, eval_box, 1 << 20);
  const ParticleFlow f_st = integrate_flow(spec, cloud, 0.0, s + t, dt, eval_box, 1 << 20);

  // lattice maps of X(t, .) for interpolation
  ScalarGrid mx({cloud.box.lo.x - cloud.h_p / 2, cloud.box.lo.y - cloud.h_p / 2}, cloud.h_p,
                cloud.nx, cloud.ny, 2);
  ScalarGrid my = mx;
  for (int j = 0; j < cloud.ny; ++j)
    for (int i = 0; i < cloud.nx; ++i) {
      mx.at(i, j) = f_t.final_positions()[cloud.index(i, j)].x;
      my.at(i, j) = f_t.final_positions()[cloud.index(i, j)].y;
    }

  double worst = 0.0;
  const Box inner = {cloud.box.lo + Vec2{cloud.h_p, cloud.h_p},
                     cloud.box.hi - Vec2{cloud.h_p, cloud.h_p}};
  for (size_t p = 0; p < cloud.points.size(); ++p) {
    if (f_s.escaped[p] || f_st.escaped[p]) continue;
    const Vec2 mid = f_s.final_positions()[p];
    if (!inner.contains(mid)) continue;  // interpolation needs interior support
    const Vec2 composed{mx.interp(mid), my.interp(mid)};
    worst = std::max(worst, (f_st.final_positions()[p] - composed).norm());
  }
  return worst;
}

namespace {
double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
}

double counterexample_collision_time(Vec2 x0) {
  if (cex_region(x0) == CexRegion::UpperInner) return 0.5 * x0.y * x0.y;
  return std::numeric_limits<double>::infinity();
}

Vec2 counterexample_position(Vec2 x0, double t, BranchRule rule) {
  const CexRegion r0 = cex_region(x0);
  switch (r0) {
    case CexRegion::Singular:
      throw std::domain_error("counterexample flow: initial point on x2 = 0");
    case CexRegion::UpperInner: {
      const double c = x0.x / x0.y;
      const double tstar = 0.5 * x0.y * x0.y;
      if (t < tstar) {
        const double w = std::sqrt(x0.y * x0.y - 2.0 * t);
        return {c * w, w};
      }
      const double cc = rule == BranchRule::A ? c : -c;
      const double v = -std::sqrt(2.0 * (t - tstar));
      return {cc * v, v};
    }
    case CexRegion::LowerInner: {
      const double c = x0.x / x0.y;
      const double w = -std::sqrt(x0.y * x0.y + 2.0 * t);
      return {c * w, w};
    }
    case CexRegion::UpperOuter: {
      const double tc = x0.y;
      const double s1 = sgn(x0.x);
      if (t <= tc) return {x0.x - s1 * t, x0.y - t};
      const double x1c = x0.x - s1 * tc;
      return {x1c + sgn(x1c) * (t - tc), -(t - tc)};
    }
    case CexRegion::LowerOuter:
      return {x0.x + sgn(x0.x) * t, x0.y - t};
  }
  throw std::logic_error("unreachable");
}

Vec2 counterexample_velocity(Vec2 x0, double t, BranchRule rule) {
  const CexRegion r0 = cex_region(x0);
  switch (r0) {
    case CexRegion::Singular:
      throw std::domain_error("counterexample flow: initial point on x2 = 0");
    case CexRegion::UpperInner: {
      const double c = x0.x / x0.y;
      const double tstar = 0.5 * x0.y * x0.y;
      if (t < tstar) {
        const double w = std::sqrt(x0.y * x0.y - 2.0 * t);
        return {-c / w, -1.0 / w};
      }
      if (t == tstar) throw std::domain_error("counterexample flow: velocity at the origin");
      const double cc = rule == BranchRule::A ? c : -c;
      const double v = -std::sqrt(2.0 * (t - tstar));
      return {cc / v, 1.0 / v};
    }
    case CexRegion::LowerInner: {
      const double c = x0.x / x0.y;
      const double w = -std::sqrt(x0.y * x0.y + 2.0 * t);
      return {c / w, 1.0 / w};
    }
    case CexRegion::UpperOuter: {
      const double tc = x0.y;
      const double s1 = sgn(x0.x);
      if (t < tc) return {-s1, -1.0};
      if (t == tc) throw std::domain_error("counterexample flow: velocity on x2 = 0");
      const double x1c = x0.x - s1 * tc;
      return {sgn(x1c), -1.0};
    }
    case CexRegion::LowerOuter:
      return {sgn(x0.x), -1.0};
  }
  throw std::logic_error("unreachable");
}

ParticleFlow counterexample_flows(const ParticleCloud& cloud, double T, BranchRule rule,
                                  int store_steps) {
  for (const Vec2& p : cloud.points)
    if (p.y == 0.0)
      throw std::invalid_argument("counterexample_flows: cloud touches the singular line");
  ParticleFlow flow;
  flow.cloud = cloud;
  flow.scheme = "exact";
  flow.escaped.assign(cloud.points.size(), 0);
  flow.times.resize(store_steps + 1);
  for (int k = 0; k <= store_steps; ++k) flow.times[k] = T * k / store_steps;
  flow.positions.assign(flow.times.size(), cloud.points);
  flow.region.assign(flow.times.size(), std::vector<int8_t>(cloud.points.size(), 0));
  for (size_t p = 0; p < cloud.points.size(); ++p) {
    for (size_t k = 0; k < flow.times.size(); ++k) {
      const Vec2 x = counterexample_position(cloud.points[p], flow.times[k], rule);
      flow.positions[k][p] = x;
      flow.region[k][p] = static_cast<int8_t>(cex_region(x));
    }
  }
  return flow;
}

}  // namespace flowlab
