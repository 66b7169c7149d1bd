#include "flowlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "flowlab/bumps.hpp"
#include "flowlab/convolution.hpp"
#include "flowlab/fft.hpp"
#include "flowlab/flow.hpp"
#include "flowlab/maximal.hpp"
#include "flowlab/stability.hpp"
#include "flowlab/transport.hpp"

namespace flowlab {

namespace {

std::string fmt(const char* f, ...) {
  char buf[384];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- 1. Hardy-Littlewood weak-(1,1) exactness on a unit Dirac ------------

CriterionResult crit_hl_weak11(int threads) {
  CriterionResult r{1, "hl weak-(1,1) dirac exactness"};
  const double h = 1e-4;
  const int n = static_cast<int>(std::round(4.0 / h));
  DiscreteMeasure mu = DiscreteMeasure::dirac({0.0, 0.0}, 1.0, 1);

  SweepConfig cfg;
  cfg.rho_min = 1e-6;
  cfg.rho_max = 4.0;
  cfg.threads = threads;
  ScalarGrid vals({-2.0, 0.0}, h, n, 1, 1);
  for (int i = 0; i < n; ++i) cfg.eval_points.push_back({vals.cell_center(i, 0).x, 0.0});
  vals.values = hl_maximal(mu, cfg);

  double worst = 0.0;
  for (double lam : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
    const double stat = lam * superlevel_measure(vals, lam);
    worst = std::max(worst, std::abs(stat - 1.0));
  }
  r.pass = worst <= 0.02;
  r.detail = fmt("max |lambda*L - 1| = %.4f (tol 0.02)", worst);
  return r;
}

// ---- 2. Kakeya point-mass blowup: tail ~ eps^{-1} ------------------------

double kakeya_tail_of(const DiscreteMeasure& mu, double eps, const Box& region, int grid_n,
                      double lam_lo, double lam_hi, int threads, bool* contact = nullptr,
                      double rho_max = 1.6, int per_octave = 16) {
  SweepConfig cfg;
  cfg.rho_min = 0.05;
  cfg.rho_max = rho_max;
  cfg.radii_per_octave = per_octave;
  cfg.threads = threads;
  ScalarGrid vals(region.lo, region.width() / grid_n, grid_n,
                  static_cast<int>(std::round(region.height() * grid_n / region.width())), 2);
  for (int j = 0; j < vals.ny; ++j)
    for (int i = 0; i < vals.nx; ++i) cfg.eval_points.push_back(vals.cell_center(i, j));
  vals.values = kakeya_maximal(mu, eps, cfg);
  std::vector<double> lg(12);
  for (int i = 0; i < 12; ++i) lg[i] = lam_lo * std::pow(lam_hi / lam_lo, i / 11.0);
  const Weak11Report rep = weak11_statistic(vals, lg);
  if (contact) *contact = rep.boundary_contact;
  return rep.tail_estimate;
}

CriterionResult crit_kakeya_blowup(int threads) {
  CriterionResult r{2, "kakeya point-mass blowup slope"};
  const DiscreteMeasure mu = DiscreteMeasure::dirac({0.0, 0.0}, 1.0, 2);
  const Box region{{-1.05, -1.05}, {1.05, 1.05}};
  std::vector<double> lx, ly;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    // superlevel radii of the statistic kept inside [0.15, 0.45]
    const double lam_lo = 1.0 / (eps * kPi * 0.45 * 0.45);
    const double lam_hi = 1.0 / (eps * kPi * 0.15 * 0.15);
    const double tail = kakeya_tail_of(mu, eps, region, 180, lam_lo, lam_hi, threads);
    lx.push_back(std::log(eps));
    ly.push_back(std::log(tail));
  }
  const double slope = lsq_slope(lx, ly);
  r.pass = std::abs(slope + 1.0) <= 0.15;
  r.detail = fmt("slope = %.3f (target -1 +- 0.15)", slope);
  return r;
}

// ---- 3. Kakeya boundedness on a BV gradient measure ----------------------

CriterionResult crit_kakeya_bv_bounded(int threads) {
  CriterionResult r{3, "kakeya boundedness for gradient measure"};
  // |Df| of a box indicator smoothed at scale sigma, held as curve atoms on
  // transversally offset rings weighted by the mollified jump profile. Atom
  // spacing along the rings stays below the narrowest probed cone width.
  const double hw = 0.5, sigma = 1.0 / 16.0;
  DiscreteMeasure mu;
  mu.subspace_dim = 2;
  double wsum = 0.0;
  std::vector<std::pair<double, double>> offsets;  // (offset, weight)
  for (int k = 0; k < 5; ++k) {
    const double v = (k - 2) * sigma / 2.0;
    const double u = (sigma - v) / (2.0 * sigma);  // profile arg in [0,1]
    const double w = 30.0 * u * u * (1.0 - u) * (1.0 - u);  // smoothstep derivative
    offsets.emplace_back(v, w);
    wsum += w;
  }
  for (auto& [v, w] : offsets) w /= wsum;
  for (const auto& [v, w] : offsets) {
    const double a = hw + v;
    const DiscreteMeasure ring = DiscreteMeasure::sample_curve(
        {{-a, -a}, {a, -a}, {a, a}, {-a, a}, {-a, -a}}, w, 1.5e-3);
    for (const Atom& at : ring.atoms) mu.atoms.push_back(at);
  }

  // The lambda window probes the band around the ring, above the corner-wedge
  // transient of small lambda and below the fat-cone starvation of large
  // lambda; the region still holds the residual grazing needles.
  const Box region{{-1.1, -1.1}, {1.1, 1.1}};
  double tmin = 1e30, tmax = 0.0;
  bool contact = false;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    bool c = false;
    const double tail = kakeya_tail_of(mu, eps, region, 112, 3.5, 6.0, threads, &c, 2.6, 8);
    contact = contact || c;
    tmin = std::min(tmin, tail);
    tmax = std::max(tmax, tail);
  }
  r.pass = tmax / tmin <= 2.0 && !contact;
  r.detail = fmt("tail max/min = %.3f (tol 2.0)%s", tmax / tmin,
                 contact ? ", boundary contact" : "");
  return r;
}

// ---- 4. Slice bound against the 1-D maximal function ---------------------

CriterionResult crit_slice_bound(int threads) {
  CriterionResult r{4, "slice bound M^eps <= C M^1"};
  // mu = omega (two atoms on the x-axis) tensor uniform transverse density
  const std::vector<std::pair<double, double>> omega_atoms = {{-0.2, 0.55}, {0.25, 0.45}};
  std::vector<Atom> atoms;
  // transverse sampling well below the narrowest probed cone width, so the
  // discretized line never looks atomic to any (rho, e) cell
  const double lo = -2.0, hi = 2.0, spacing = 0.0005;
  const int nt = static_cast<int>(std::round((hi - lo) / spacing));
  for (const auto& [x1, w] : omega_atoms)
    for (int t = 0; t < nt; ++t)
      atoms.push_back({{x1, lo + (t + 0.5) * (hi - lo) / nt}, w * (hi - lo) / nt});
  const DiscreteMeasure mu = DiscreteMeasure::from_atoms(std::move(atoms), 2);

  DiscreteMeasure omega;
  omega.subspace_dim = 1;
  for (const auto& [x1, w] : omega_atoms) omega.atoms.push_back({{x1, 0.0}, w});

  std::mt19937_64 rng(20240517);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  SweepConfig sweep;
  sweep.rho_min = 0.02;
  sweep.rho_max = 2.0;
  sweep.threads = threads;
  for (int i = 0; i < 1000; ++i) sweep.eval_points.push_back({u(rng), u(rng)});

  SweepConfig sweep1 = sweep;
  sweep1.rho_min = 1e-9;  // the 1-D side takes its sup over every radius
  sweep1.eval_points.clear();
  for (const Vec2& p : sweep.eval_points) sweep1.eval_points.push_back({p.x, 0.0});
  const std::vector<double> m1 = hl_maximal(omega, sweep1);

  // One constant must serve every eps simultaneously: the per-eps fitted
  // constants have to agree within a factor 2 across the 8x range of eps
  // (a point mass scales them by 8).
  double c_min = 1e30, c_max = 0.0;
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const std::vector<double> me = kakeya_maximal(mu, eps, sweep);
    double c_eps = 0.0;
    for (size_t i = 0; i < me.size(); ++i) c_eps = std::max(c_eps, me[i] / m1[i]);
    c_min = std::min(c_min, c_eps);
    c_max = std::max(c_max, c_eps);
  }
  r.pass = std::isfinite(c_max) && c_max <= 2.0 * c_min;
  r.detail = fmt("per-eps C in [%.3f, %.3f], spread %.2f (tol 2.0)", c_min, c_max, c_max / c_min);
  return r;
}

// ---- 5. Difference reconstruction from the gradient ----------------------

CriterionResult crit_difference_representation(int) {
  CriterionResult r{5, "difference reconstruction"};
  const double eps1 = 1.0 / 128.0;

  // linear probe: exact difference is 1
  auto grad_lin = [](Vec2) { return Vec2{1.0, 0.0}; };
  const double lin = difference_representation(grad_lin, {1.0, 0.0}, {0.0, 0.0}, eps1,
                                               {256, 128});
  const double lin_err = std::abs(lin - 1.0);

  const Vec2 a{0.05, -0.1};
  const double s = 0.6;
  auto gauss = [&](Vec2 x) { return std::exp(-(x - a).norm2() / (2 * s * s)); };
  auto grad_gauss = [&](Vec2 x) { return (x - a) * (-gauss(x) / (s * s)); };
  const Vec2 x{0.3, 0.1}, y{-0.2, 0.0};
  const double exact = gauss(x) - gauss(y);
  const double v1 = difference_representation(grad_gauss, x, y, eps1, {256, 128});
  const double v2 = difference_representation(grad_gauss, x, y, eps1, {512, 256});
  const double e1 = std::abs(v1 - exact) / std::abs(exact);
  const double e2 = std::abs(v2 - exact) / std::abs(exact);

  r.pass = lin_err <= 1e-2 && e2 <= 1e-2 && e2 <= 0.5 * e1;
  r.detail = fmt("linear err %.2e; gauss rel err %.2e -> %.2e (contract >= 2x)", lin_err, e1, e2);
  return r;
}

// ---- 6. Fourier-multiplier oracle for the squared-Riesz kernel ------------

CriterionResult crit_fourier_oracle(int) {
  CriterionResult r{6, "singular integral fourier oracle"};
  const int n = 256;
  const double L = 16.0;
  const Box box{{-8.0, -8.0}, {8.0, 8.0}};
  ScalarGrid f = ScalarGrid::sample(box, n, n, [](Vec2 x) {
    return std::exp(-x.norm2() / (2.0 * 0.5 * 0.5));
  });
  const RoughKernel kernel = RoughKernel::power_d(DirectionFn::riesz_sq_1(512));
  const ScalarGrid t = truncated_convolution_grid(kernel, f, f.h / 2.0, ConvMode::Fft);

  // oracle: multiplier pi (xi1^2 - xi2^2)/|xi|^2 applied on the zero-padded
  // transform, so both sides model the free-space operator
  const int np = 2 * n;
  const double Lp = 2.0 * L;
  std::vector<cplx> fa(static_cast<size_t>(np) * np, cplx(0, 0));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) fa[static_cast<size_t>(j) * np + i] = f.at(i, j);
  fft2(fa, np, np, false);
  for (int j = 0; j < np; ++j)
    for (int i = 0; i < np; ++i) {
      const int ki = i <= np / 2 ? i : i - np;
      const int kj = j <= np / 2 ? j : j - np;
      const double xi1 = 2.0 * kPi * ki / Lp, xi2 = 2.0 * kPi * kj / Lp;
      const double q = xi1 * xi1 + xi2 * xi2;
      const double m = q == 0.0 ? 0.0 : kPi * (xi1 * xi1 - xi2 * xi2) / q;
      fa[static_cast<size_t>(j) * np + i] *= m;
    }
  fft2(fa, np, np, true);

  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double o = fa[static_cast<size_t>(j) * np + i].real();
      const double d = t.at(i, j) - o;
      num += d * d;
      den += o * o;
    }
  const double rel = std::sqrt(num / den);
  r.pass = rel <= 1e-2;
  r.detail = fmt("L2 relative error = %.3e (tol 1e-2)", rel);
  return r;
}

// ---- 7. Cancellation of mean-zero kernels --------------------------------

CriterionResult crit_cancellation(int) {
  CriterionResult r{7, "mean-zero cancellation"};
  const AnnulusGrid annuli = AnnulusGrid::geometric(0.1, 10.0, 10);  // 20 annuli
  double worst = 0.0;
  for (const DirectionFn& omega :
       {DirectionFn::riesz_sq_1(512), DirectionFn::riesz_sq_2(512),
        DirectionFn::from_function([](double t) { return std::sin(t); }, 512),
        DirectionFn::from_function([](double t) { return t < kPi ? 1.0 : -1.0; }, 512)}) {
    RoughKernel k;
    k.omega = omega;
    worst = std::max(worst, cancellation_sup(k, annuli));
  }
  r.pass = worst <= 1e-10;
  r.detail = fmt("worst cancellation sup = %.2e (tol 1e-10)", worst);
  return r;
}

// ---- 8. Flow integrator correctness ---------------------------------------

CriterionResult crit_flow_correctness(int threads) {
  CriterionResult r{8, "flow integrator correctness"};
  const Box big{{-4, -4}, {4, 4}};
  const FieldSpec rot = rotation_field();
  const ParticleCloud cloud = ParticleCloud::lattice({{-1, -1}, {1, 1}}, 0.05);

  auto return_error = [&](double dt) {
    const ParticleFlow f =
        integrate_flow(rot, cloud, 0.0, 2.0 * kPi, dt, big, 1 << 20, threads);
    double worst = 0.0;
    for (size_t p = 0; p < cloud.points.size(); ++p)
      worst = std::max(worst, (f.final_positions()[p] - cloud.points[p]).norm());
    return worst;
  };
  const double ret = return_error(1e-3);

  const double e1 = return_error(2.0 * kPi / 128.0);
  const double e2 = return_error(2.0 * kPi / 256.0);
  const double ratio = e1 / e2;

  const FieldSpec sine = sine_shear_field();
  const ParticleCloud jc = ParticleCloud::lattice({{-1, -1}, {1, 1}}, 1e-2);
  const ParticleFlow jf = integrate_flow(sine, jc, 0.0, 1.0, 1e-3, big, 50, threads);
  const JacobianTrack track = jacobian_track(sine, jf);
  double jerr = 0.0;
  const size_t last = jf.times.size() - 1;
  for (int j = 1; j + 1 < jc.ny; ++j)
    for (int i = 1; i + 1 < jc.nx; ++i) {
      const int p = jc.index(i, j);
      if (std::isnan(track.det_fd[last][p])) continue;
      jerr = std::max(jerr, std::abs(track.jx_exp[last][p] - track.det_fd[last][p]));
    }

  r.pass = ret <= 1e-6 && ratio >= 12.0 && jerr <= 1e-3;
  r.detail = fmt("return %.2e (tol 1e-6); dt-halving ratio %.1f (>=12); |JX-detFD| %.2e (tol 1e-3)",
                 ret, ratio, jerr);
  return r;
}

// ---- 9. Anisotropic functional sanity --------------------------------------

CriterionResult crit_anisotropic_functional(int threads) {
  CriterionResult r{9, "anisotropic functional"};
  const Box big{{-4, -4}, {4, 4}};
  const Box cache_box{{-2.2, -2.2}, {2.2, 2.2}};
  const FieldSpec base = shear_field();
  const FieldSpec b1 = mollify(base, 0.1, cache_box, 440);
  const FieldSpec b2 = mollify(base, 0.05, cache_box, 440);
  const ParticleCloud cloud = ParticleCloud::lattice({{-1, -1}, {1, 1}}, 0.02);
  const FlowPairDomain dom{1.0};
  auto eta = [](double, Vec2) { return Vec2{0.0, 1.0}; };

  const ParticleFlow f1 = integrate_flow(b1, cloud, 0.0, 1.0, 2e-3, big, 8, threads);
  const ParticleFlow f2 = integrate_flow(b2, cloud, 0.0, 1.0, 2e-3, big, 8, threads);

  // exact jump normal makes the drift integrand vanish identically
  const double drift = anisotropic_drift_term(f1, f2, base, eta, 1e-3, dom);

  // pointwise log lower bound at every evaluated (delta, t) pair
  bool lower_ok = true;
  for (double delta : {1e-2, 1e-4}) {
    const std::vector<double> phis = phi_delta_per_time(f1, f2, delta, dom);
    for (size_t k = 0; k < phis.size(); ++k) {
      ParticleFlow g1 = f1, g2 = f2;  // restrict to a prefix so every time is final once
      g1.times.resize(k + 1);
      g1.positions.resize(k + 1);
      g2.times.resize(k + 1);
      g2.positions.resize(k + 1);
      const double sup = superlevel_flow_distance(g1, g2, delta, dom);
      if (phis[k] + 1e-12 < sup * std::log(1.0 + 1.0 / std::sqrt(delta))) lower_ok = false;
    }
  }

  // a Lipschitz field has one flow; the functional vanishes on the pair
  const ParticleCloud rc = ParticleCloud::lattice({{-1, -1}, {1, 1}}, 0.05);
  const ParticleFlow ra = integrate_flow(rotation_field(), rc, 0.0, 1.0, 1e-3, big, 16, threads);
  const ParticleFlow rb = integrate_flow(rotation_field(), rc, 0.0, 1.0, 1e-3, big, 16, threads);
  const double p2 = phi_delta(ra, rb, 1e-2, dom) / std::abs(std::log(1e-2));
  const double p6 = phi_delta(ra, rb, 1e-6, dom) / std::abs(std::log(1e-6));

  r.pass = drift <= 1e-14 && lower_ok && p6 <= p2 / 3.0 + 1e-15;
  r.detail = fmt("drift %.1e (tol 1e-14); log bound %s; phi/|log d| %.1e -> %.1e", drift,
                 lower_ok ? "holds" : "fails", p2, p6);
  return r;
}

// ---- 10. Stability bound shape over the mollified-shear sweep --------------

CriterionResult crit_stability_bound(int threads) {
  CriterionResult r{10, "stability bound shape"};
  const double kappa = 0.05;
  const Box big{{-4, -4}, {4, 4}};
  const Box cache_box{{-2.2, -2.2}, {2.2, 2.2}};
  const Box norm_box{{-2, -2}, {2, 2}};
  const FieldSpec base = shear_field();
  const ParticleCloud cloud = ParticleCloud::lattice({{-1, -1}, {1, 1}}, 0.02);
  const FlowPairDomain dom{1.0};
  auto eta = [](double, Vec2) { return Vec2{0.0, 1.0}; };
  const std::vector<double> deltas = {1e-2, 1e-3, 1e-4};

  std::vector<StabilityCell> cells;
  for (double sigma : {0.1, 0.05, 0.025, 0.0125}) {
    const int n = std::max(128, static_cast<int>(std::ceil(cache_box.width() / (sigma / 5.0))));
    const FieldSpec b1 = mollify(base, sigma, cache_box, n);
    const FieldSpec b2 = mollify(base, sigma / 2.0, cache_box, n);
    const StabilityExperiment exp = stability_experiment(
        base, b1, b2, eta, cloud, 1.0, 2e-3, big, norm_box, deltas, {1.0}, dom, sigma, threads);
    for (const StabilityCell& c : exp.cells) cells.push_back(c);
  }

  // monotone non-increasing in sigma for each delta
  bool monotone = true;
  for (size_t d = 0; d < deltas.size(); ++d)
    for (size_t s = 1; s < 4; ++s) {
      const double prev = cells[(s - 1) * deltas.size() + d].lhs;
      const double cur = cells[s * deltas.size() + d].lhs;
      if (cur > prev + 1e-9) monotone = false;
    }

  // constant fitted on the sigma = 0.1 row, validated on every cell
  double c_fit = 0.0;
  for (size_t d = 0; d < deltas.size(); ++d) {
    const StabilityCell& c = cells[d];
    c_fit = std::max(c_fit, std::max(0.0, c.lhs - kappa) * c.delta / c.perturbation_l1);
  }
  bool bound_ok = true;
  double worst_gap = 0.0;
  for (const StabilityCell& c : cells) {
    const double rhs = c.bound_term(c_fit, kappa);
    worst_gap = std::max(worst_gap, c.lhs - rhs);
    if (c.lhs > rhs + 1e-9) bound_ok = false;
  }

  r.pass = monotone && bound_ok;
  r.detail = fmt("monotone %s; C = %.3f, worst lhs-rhs = %.1e", monotone ? "yes" : "no", c_fit,
                 worst_gap);
  return r;
}

// ---- 11. Non-uniqueness branch flows ---------------------------------------

CriterionResult crit_counterexample(int) {
  CriterionResult r{11, "non-uniqueness branch flows"};
  const ParticleCloud cloud = ParticleCloud::lattice({{-1.0, 0.2}, {1.0, 1.0}}, 0.01);
  const ParticleFlow fa = counterexample_flows(cloud, 1.0, BranchRule::A, 16);
  const ParticleFlow fb = counterexample_flows(cloud, 1.0, BranchRule::B, 16);

  // pushforward density on interior cells of the image band
  auto density_ok = [&](const ParticleFlow& f, double* worst) {
    const std::vector<Box> cells = {{{-0.1, -1.3}, {0.1, -1.1}},
                                    {{0.3, -1.32}, {0.5, -1.12}},
                                    {{-0.5, -1.32}, {-0.3, -1.12}}};
    *worst = 0.0;
    bool ok = true;
    for (const Box& cell : cells) {
      long count = 0;
      for (const Vec2& p : f.final_positions())
        if (cell.contains(p)) ++count;
      const double dens = count * cloud.h_p * cloud.h_p / cell.area();
      *worst = std::max(*worst, std::abs(dens - 1.0));
      if (dens < 0.9 || dens > 1.1) ok = false;
    }
    return ok;
  };
  double wa = 0, wb = 0;
  const bool dens_ok = density_ok(fa, &wa) && density_ok(fb, &wb);

  // closed forms solve the ODE off the singular set
  double ode_res = 0.0;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<size_t> pick(0, cloud.points.size() - 1);
  std::uniform_real_distribution<double> tu(0.01, 0.99);
  for (int trial = 0; trial < 4000; ++trial) {
    const Vec2 x0 = cloud.points[pick(rng)];
    const double t = tu(rng);
    for (BranchRule rule : {BranchRule::A, BranchRule::B}) {
      const double tstar = counterexample_collision_time(x0);
      if (std::abs(t - tstar) < 1e-3) continue;
      if (cex_region(x0) == CexRegion::UpperOuter && std::abs(t - x0.y) < 1e-3) continue;
      const Vec2 pos = counterexample_position(x0, t, rule);
      if (cex_region(pos) == CexRegion::Singular) continue;
      const Vec2 vel = counterexample_velocity(x0, t, rule);
      ode_res = std::max(ode_res, (vel - counterexample_field(pos, cex_region(pos))).norm());
    }
  }

  long disagree = 0;
  for (size_t p = 0; p < cloud.points.size(); ++p)
    if ((fa.final_positions()[p] - fb.final_positions()[p]).norm() > 1e-9) ++disagree;
  const double frac = static_cast<double>(disagree) / cloud.points.size();

  r.pass = dens_ok && ode_res <= 1e-8 && frac >= 0.5;
  r.detail = fmt("density dev %.3f/%.3f (tol 0.1); ode residual %.1e; disagree %.1f%%", wa, wb,
                 ode_res, 100.0 * frac);
  return r;
}

// ---- 12. Lagrangian transport vs characteristics oracle --------------------

CriterionResult crit_transport(int threads) {
  CriterionResult r{12, "lagrangian transport"};
  TransportProblem prob;
  prob.field = rotation_field();
  prob.G = [](double, Vec2 x) { return x.x; };
  prob.T = 1.0;
  const Box box{{-1, -1}, {1, 1}};
  const Vec2 c{0.2, 0.0};
  const double s = 0.25;
  auto u0fn = [&](Vec2 x) { return std::exp(-(x - c).norm2() / (2 * s * s)); };
  prob.u0 = ScalarGrid::sample(box, 192, 192, u0fn);

  std::vector<double> times;
  for (int k = 0; k <= 16; ++k) times.push_back(k / 16.0);
  const LagrangianSolution sol =
      solve_lagrangian(prob, times, LagrangianForm::ExpIntegral, 1e-3, box.expanded(6.0), threads);

  // the two algebraic forms of the representation formula, compared on a
  // compressible field so the Jacobian factor is nontrivial
  TransportProblem probc = prob;
  probc.field = sine_shear_field();
  probc.G = [](double, Vec2) { return 0.3; };
  probc.F = [](double, Vec2) { return 0.2; };
  const LagrangianSolution sol_e =
      solve_lagrangian(probc, {1.0}, LagrangianForm::ExpIntegral, 1e-3, box.expanded(6.0), threads);
  const LagrangianSolution sol_j =
      solve_lagrangian(probc, {1.0}, LagrangianForm::Jacobian, 1e-3, box.expanded(6.0), threads);

  // characteristics oracle: rotated closed form, 10x finer time quadrature;
  // nodes whose foot point leaves the data grid are flagged and skipped
  double sup_err = 0.0;
  const ScalarGrid& uT = sol.u.back();
  const size_t flag_base = (sol.times.size() - 1) * uT.size();
  for (int j = 0; j < uT.ny; ++j)
    for (int i = 0; i < uT.nx; ++i) {
      if (sol.flagged[flag_base + static_cast<size_t>(j) * uT.nx + i]) continue;
      const Vec2 x = uT.cell_center(i, j);
      const double t = 1.0;
      const Vec2 xbar{x.x * std::cos(t) + x.y * std::sin(t),
                      -x.x * std::sin(t) + x.y * std::cos(t)};
      const int m = 10000;
      double gint = 0.0;
      for (int q = 0; q < m; ++q) {
        const double tau = (q + 0.5) * t / m;
        gint += (xbar.x * std::cos(tau) - xbar.y * std::sin(tau)) * t / m;
      }
      const double oracle = u0fn(xbar) * std::exp(gint);
      sup_err = std::max(sup_err, std::abs(uT.at(i, j) - oracle));
    }

  double form_diff = 0.0;
  for (size_t q = 0; q < sol_e.u.back().values.size(); ++q)
    form_diff = std::max(form_diff, std::abs(sol_e.u.back().values[q] - sol_j.u.back().values[q]));

  // renormalization defect halves under one refinement
  auto defect_at = [&](int n, double dtq, int ntimes) {
    TransportProblem p2 = prob;
    p2.u0 = ScalarGrid::sample(box, n, n, u0fn);
    std::vector<double> ts(ntimes);
    for (int k = 0; k < ntimes; ++k) ts[k] = static_cast<double>(k) / (ntimes - 1);
    const LagrangianSolution sl =
        solve_lagrangian(p2, ts, LagrangianForm::ExpIntegral, dtq, box.expanded(6.0), threads);
    return renormalization_defect(sl, p2, RenormFn::rational());
  };
  const double d1 = defect_at(32, 4e-3, 9);
  const double d2 = defect_at(64, 2e-3, 17);

  r.pass = sup_err <= 1e-3 && form_diff <= 1e-6 && d2 <= 0.5 * d1;
  r.detail = fmt("oracle sup err %.2e (tol 1e-3); forms agree %.1e (tol 1e-6); defect %.2e -> %.2e",
                 sup_err, form_diff, d1, d2);
  return r;
}

// ---- 13. Singular-mass detector --------------------------------------------

CriterionResult crit_singular_mass(int threads) {
  CriterionResult r{13, "singular-mass detector"};
  const Box region{{-0.25, -0.25}, {0.25, 0.25}};
  const double lam = 1e3;

  // absolutely continuous input: tail vanishes
  ScalarGrid dens = ScalarGrid::fill({{-0.2, -0.2}, {0.2, 0.2}}, 64, 64, 3.125);
  const DiscreteMeasure ac = DiscreteMeasure::from_density(std::move(dens), 2);
  const SingularMassReport rep_ac = singular_mass_detector(ac, region, 160, lam, 1.0, threads);

  // half mass diffuse, half mass in an off-center atom
  DiscreteMeasure mixed;
  mixed.subspace_dim = 2;
  mixed.density = ScalarGrid::fill({{-0.2, -0.2}, {0.2, 0.2}}, 64, 64, 3.125 * 0.5);
  mixed.atoms.push_back({{0.011, 0.007}, 0.5});
  const SingularMassReport rep =
      singular_mass_detector(mixed, region, 320, lam, 0.5, threads);
  const double ratio = rep.value / rep.reference;

  r.pass = rep_ac.value <= 0.05 && ratio >= 0.8 && ratio <= 1.25 && !rep.boundary_contact;
  r.detail = fmt("ac tail %.3f (tol 0.05); mixed/dirac ratio %.3f (in [0.8, 1.25])", rep_ac.value,
                 ratio);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(
    int threads, const std::vector<int>& only,
    const std::function<void(const CriterionResult&)>& on_done) {
  using Fn = CriterionResult (*)(int);
  const std::vector<Fn> criteria = {
      crit_hl_weak11,       crit_kakeya_blowup,           crit_kakeya_bv_bounded,
      crit_slice_bound,     crit_difference_representation, crit_fourier_oracle,
      crit_cancellation,    crit_flow_correctness,        crit_anisotropic_functional,
      crit_stability_bound, crit_counterexample,          crit_transport,
      crit_singular_mass};
  std::vector<CriterionResult> results;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = criteria[i](threads);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(r);
    if (on_done) on_done(results.back());
  }
  return results;
}

}  // namespace flowlab
