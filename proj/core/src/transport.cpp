#include "flowlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flowlab/parallel.hpp"

namespace flowlab {

namespace {

double field_sup(const TransportProblem& p) {
  double m = 0.0;
  const ScalarGrid& g = p.u0;
  for (int j = 0; j < g.ny; j += 4)
    for (int i = 0; i < g.nx; i += 4)
      for (double t : {0.0, 0.5 * p.T, p.T})
        m = std::max(m, p.field.eval(t, g.cell_center(i, j)).norm());
  return m;
}

}  // namespace

LagrangianSolution solve_lagrangian(const TransportProblem& problem,
                                    const std::vector<double>& out_times, LagrangianForm form,
                                    double dt_cap, const Box& safe_box, int threads) {
  const ScalarGrid& g0 = problem.u0;
  g0.validate();
  const double maxb = field_sup(problem);
  const double dt = std::min(dt_cap, maxb > 0.0 ? g0.h / maxb : dt_cap);

  LagrangianSolution sol;
  sol.times = out_times;
  sol.u.assign(out_times.size(), g0);
  sol.flagged.assign(static_cast<size_t>(g0.size()) * out_times.size(), 0);

  for (size_t k = 0; k < out_times.size(); ++k) {
    const double t_out = out_times[k];
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(t_out / dt - 1e-12)));
    ScalarGrid& uk = sol.u[k];
    if (t_out == 0.0) {
      uk = g0;
      continue;
    }
    parallel_for(static_cast<long>(g0.size()), threads, [&](long node) {
      const int i = static_cast<int>(node) % g0.nx;
      const int j = static_cast<int>(node) / g0.nx;
      // backward characteristic from (t_out, x) to time 0
      std::vector<double> ts(n_steps + 1);
      std::vector<Vec2> ys(n_steps + 1);
      Vec2 y = g0.cell_center(i, j);
      double t = t_out;
      ts[n_steps] = t;
      ys[n_steps] = y;
      bool escaped = false;
      for (long s = n_steps; s > 0; --s) {
        const double hstep = -std::min(dt, t);
        const Vec2 k1 = problem.field.eval(t, y);
        const Vec2 k2 = problem.field.eval(t + hstep / 2, y + k1 * (hstep / 2));
        const Vec2 k3 = problem.field.eval(t + hstep / 2, y + k2 * (hstep / 2));
        const Vec2 k4 = problem.field.eval(t + hstep, y + k3 * hstep);
        y += (k1 + (k2 + k3) * 2.0 + k4) * (hstep / 6.0);
        t += hstep;
        ts[s - 1] = t;
        ys[s - 1] = y;
        if (!safe_box.contains(y)) escaped = true;
      }
      // a node is unreliable when its characteristic blows out of the safe
      // box or when the foot point leaves the data grid
      if (escaped || !g0.bounds().contains(ys[0])) {
        sol.flagged[k * g0.size() + node] = 1;
        uk.values[node] = 0.0;
        return;
      }
      // cumulative trapezoid integrals of div B and G along the path
      const long m = n_steps + 1;
      std::vector<double> div_int(m, 0.0), g_int(m, 0.0);
      double prev_div = divergence(problem.field, ts[0], ys[0]);
      double prev_g = problem.g(ts[0], ys[0]);
      for (long s = 1; s < m; ++s) {
        const double d = divergence(problem.field, ts[s], ys[s]);
        const double gg = problem.g(ts[s], ys[s]);
        const double w = ts[s] - ts[s - 1];
        div_int[s] = div_int[s - 1] + 0.5 * (prev_div + d) * w;
        g_int[s] = g_int[s - 1] + 0.5 * (prev_g + gg) * w;
        prev_div = d;
        prev_g = gg;
      }
      const Vec2 xbar = ys[0];
      double u;
      if (form == LagrangianForm::ExpIntegral) {
        u = g0.interp(xbar) * std::exp(-(div_int[m - 1] - g_int[m - 1]));
        double src = 0.0;
        for (long s = 0; s < m; ++s) {
          const double w = s == 0           ? 0.5 * (ts[1] - ts[0])
                           : s == m - 1     ? 0.5 * (ts[m - 1] - ts[m - 2])
                                            : 0.5 * (ts[s + 1] - ts[s - 1]);
          const double e = (div_int[m - 1] - div_int[s]) - (g_int[m - 1] - g_int[s]);
          src += problem.f(ts[s], ys[s]) * std::exp(-e) * w;
        }
        u += src;
      } else {
        const double jx_t = std::exp(div_int[m - 1]);
        u = g0.interp(xbar) / jx_t * std::exp(g_int[m - 1]);
        double src = 0.0;
        for (long s = 0; s < m; ++s) {
          const double w = s == 0           ? 0.5 * (ts[1] - ts[0])
                           : s == m - 1     ? 0.5 * (ts[m - 1] - ts[m - 2])
                                            : 0.5 * (ts[s + 1] - ts[s - 1]);
          src += problem.f(ts[s], ys[s]) * std::exp(g_int[m - 1] - g_int[s]) *
                 std::exp(div_int[s]) * w;
        }
        u += src / jx_t;
      }
      uk.values[node] = u;
    });
  }
  return sol;
}

EulerianSolution eulerian_upwind(const TransportProblem& problem,
                                 const std::vector<double>& out_times, double dt,
                                 BoundaryMode boundary) {
  const ScalarGrid& g0 = problem.u0;
  g0.validate();
  const double maxb = field_sup(problem);
  if (dt * maxb / g0.h > 0.5 + 1e-12)
    throw std::invalid_argument("eulerian_upwind: CFL violated, need dt*max|B|/h <= 0.5");

  EulerianSolution sol;
  const double t_end = out_times.back();
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-12)));
  ScalarGrid u = g0;
  ScalarGrid next = g0;
  size_t out_idx = 0;
  const int nx = g0.nx, ny = g0.ny;
  const double h = g0.h;

  auto at_wrapped = [&](const ScalarGrid& grid, int i, int j) -> double {
    if (boundary == BoundaryMode::Periodic) {
      i = (i % nx + nx) % nx;
      j = (j % ny + ny) % ny;
    } else {
      i = std::clamp(i, 0, nx - 1);
      j = std::clamp(j, 0, ny - 1);
    }
    return grid.at(i, j);
  };

  double t = 0.0;
  for (long s = 0; s <= n_steps; ++s) {
    while (out_idx < out_times.size() && out_times[out_idx] <= t + 1e-12) {
      sol.times.push_back(t);
      sol.u.push_back(u);
      ++out_idx;
    }
    if (s == n_steps) break;
    const double step = std::min(dt, t_end - t);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec2 c = u.cell_center(i, j);
        // face-centered upwind fluxes
        auto flux_x = [&](int fi) {  // face between (fi-1, j) and (fi, j)
          const double b = problem.field.eval(t, {u.origin.x + fi * h, c.y}).x;
          const double up = b >= 0.0 ? at_wrapped(u, fi - 1, j) : at_wrapped(u, fi, j);
          return b * up;
        };
        auto flux_y = [&](int fj) {
          const double b = problem.field.eval(t, {c.x, u.origin.y + fj * h}).y;
          const double up = b >= 0.0 ? at_wrapped(u, i, fj - 1) : at_wrapped(u, i, fj);
          return b * up;
        };
        const double div_flux =
            (flux_x(i + 1) - flux_x(i)) / h + (flux_y(j + 1) - flux_y(j)) / h;
        next.at(i, j) = u.at(i, j) + step * (-div_flux + problem.g(t, c) * u.at(i, j) +
                                             problem.f(t, c));
      }
    std::swap(u.values, next.values);
    t += step;
  }
  while (out_idx < out_times.size()) {  // trailing requested times at t_end
    sol.times.push_back(t);
    sol.u.push_back(u);
    ++out_idx;
  }
  return sol;
}

RenormFn RenormFn::rational() {
  RenormFn f;
  f.beta = [](double z) { return z / (1.0 + z * z); };
  f.dbeta = [](double z) {
    const double d = 1.0 + z * z;
    return (1.0 - z * z) / (d * d);
  };
  return f;
}

RenormFn RenormFn::truncated_identity(double m) {
  RenormFn f;
  f.beta = [m](double z) {
    if (std::abs(z) <= m) return z;
    const double e = std::abs(z) - m;
    return (m + e / (1.0 + e / m)) * (z > 0 ? 1.0 : -1.0);
  };
  f.dbeta = [m](double z) {
    if (std::abs(z) <= m) return 1.0;
    const double e = std::abs(z) - m;
    const double d = 1.0 + e / m;
    return 1.0 / (d * d);
  };
  return f;
}

double renormalization_defect(const LagrangianSolution& sol, const TransportProblem& problem,
                              const RenormFn& fn) {
  if (sol.times.size() < 3)
    throw std::invalid_argument("renormalization_defect: need at least 3 stored times");
  const ScalarGrid& g0 = problem.u0;
  const Box b = g0.bounds();
  const double t_end = sol.times.back();

  // five fixed interior space-time bumps
  struct TestBump {
    double t0, t1;
    Box sb;
  };
  const double mx = 0.18 * b.width(), my = 0.18 * b.height();
  std::vector<TestBump> bumps = {
      {0.05 * t_end, 0.95 * t_end, Box{b.lo + Vec2{mx, my}, b.hi - Vec2{mx, my}}},
      {0.10 * t_end, 0.60 * t_end, Box{b.lo + Vec2{mx, my}, b.center() + Vec2{mx, my}}},
      {0.40 * t_end, 0.90 * t_end, Box{b.center() - Vec2{mx, my}, b.hi - Vec2{mx, my}}},
      {0.20 * t_end, 0.80 * t_end, Box{b.lo + Vec2{2 * mx, my}, b.hi - Vec2{mx, 2 * my}}},
      {0.15 * t_end, 0.85 * t_end, Box{b.lo + Vec2{mx, 2 * my}, b.hi - Vec2{2 * mx, my}}},
  };
  for (const TestBump& tb : bumps)
    if (!b.contains(tb.sb.lo) || !b.contains(tb.sb.hi) || tb.t0 < 0.0 || tb.t1 > t_end)
      throw std::invalid_argument("renormalization_defect: test support touches the boundary");

  auto q = [](double s) { return s <= 0.0 || s >= 1.0 ? 0.0 : s * s * (1.0 - s) * (1.0 - s); };
  auto dq = [](double s) {
    return s <= 0.0 || s >= 1.0 ? 0.0 : 2.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  };

  double worst = 0.0;
  for (const TestBump& tb : bumps) {
    const double tw = tb.t1 - tb.t0;
    auto phi = [&](double t, Vec2 x) {
      return q((t - tb.t0) / tw) * q((x.x - tb.sb.lo.x) / tb.sb.width()) *
             q((x.y - tb.sb.lo.y) / tb.sb.height());
    };
    auto dphi_t = [&](double t, Vec2 x) {
      return dq((t - tb.t0) / tw) / tw * q((x.x - tb.sb.lo.x) / tb.sb.width()) *
             q((x.y - tb.sb.lo.y) / tb.sb.height());
    };
    auto grad_phi = [&](double t, Vec2 x) {
      const double qt = q((t - tb.t0) / tw);
      const double qx = q((x.x - tb.sb.lo.x) / tb.sb.width());
      const double qy = q((x.y - tb.sb.lo.y) / tb.sb.height());
      return Vec2{qt * dq((x.x - tb.sb.lo.x) / tb.sb.width()) / tb.sb.width() * qy,
                  qt * qx * dq((x.y - tb.sb.lo.y) / tb.sb.height()) / tb.sb.height()};
    };

    double acc = 0.0;
    for (size_t k = 0; k < sol.times.size(); ++k) {
      const double t = sol.times[k];
      const double wt = k == 0                       ? 0.5 * (sol.times[1] - sol.times[0])
                        : k + 1 == sol.times.size()  ? 0.5 * (sol.times[k] - sol.times[k - 1])
                                                     : 0.5 * (sol.times[k + 1] - sol.times[k - 1]);
      double space = 0.0;
      const ScalarGrid& uk = sol.u[k];
      for (int j = 0; j < uk.ny; ++j)
        for (int i = 0; i < uk.nx; ++i) {
          const Vec2 x = uk.cell_center(i, j);
          const double p = phi(t, x);
          const Vec2 gp = grad_phi(t, x);
          const double pt = dphi_t(t, x);
          if (p == 0.0 && pt == 0.0 && gp.x == 0.0 && gp.y == 0.0) continue;
          const double u = uk.at(i, j);
          const double bu = fn.beta(u);
          const double dbu = fn.dbeta(u);
          const double dv = divergence(problem.field, t, x);
          space += -bu * pt - bu * dot(problem.field.eval(t, x), gp) +
                   dv * (u * dbu - bu) * p - (problem.g(t, x) * u + problem.f(t, x)) * dbu * p;
        }
      acc += space * uk.cell_volume() * wt;
    }
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace flowlab
