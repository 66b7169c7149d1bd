#include "flowlab/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "flowlab/acceptance.hpp"
#include "flowlab/convolution.hpp"
#include "flowlab/flow.hpp"
#include "flowlab/level_curve.hpp"
#include "flowlab/maximal.hpp"
#include "flowlab/stability.hpp"
#include "flowlab/transport.hpp"

namespace flowlab {

namespace fs = std::filesystem;
using nlohmann::json;

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw config_error("box must be [x0,y0,x1,y1]");
  return {{j[0].get<double>(), j[1].get<double>()}, {j[2].get<double>(), j[3].get<double>()}};
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(lo < hi) || count < 1) throw config_error("invalid geometric grid");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(i) / (count - 1));
  return g;
}

double smoothed_indicator_1d(double s, double half_width, double sigma) {
  // 1 inside [-half_width, half_width], smooth decay over a sigma-collar
  const double d = half_width + sigma - std::abs(s);
  return smoothstep(d / (2.0 * sigma));
}

DiscreteMeasure measure_from_json(const json& j, std::mt19937_64& /*rng*/) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "dirac") {
    const auto& p = j.at("pos");
    DiscreteMeasure mu = DiscreteMeasure::dirac({p[0].get<double>(), p[1].get<double>()},
                                                j.value("mass", 1.0), j.value("k", 2));
    return mu;
  }
  if (type == "atoms") {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back({{a[0].get<double>(), a[1].get<double>()}, a[2].get<double>()});
    return DiscreteMeasure::from_atoms(std::move(atoms), j.value("k", 2));
  }
  if (type == "uniform") {
    const Box b = box_from_json(j.at("box"));
    const int n = j.value("grid_n", 64);
    const double mass = j.value("mass", 1.0);
    ScalarGrid g = ScalarGrid::fill(b, n, n, mass / b.area());
    return DiscreteMeasure::from_density(std::move(g), 2);
  }
  if (type == "box_ring") {
    // |grad f| of a smoothed box indicator f(x) = S(x1) S(x2)
    const double hw = j.value("half_width", 0.5);
    const double sigma = j.value("sigma", 1.0 / 16.0);
    const int n = j.value("grid_n", 128);
    const Box b{{-(hw + 4 * sigma), -(hw + 4 * sigma)}, {hw + 4 * sigma, hw + 4 * sigma}};
    const double fd = 1e-6;
    ScalarGrid g = ScalarGrid::sample(b, n, n, [&](Vec2 x) {
      auto f = [&](Vec2 y) {
        return smoothed_indicator_1d(y.x, hw, sigma) * smoothed_indicator_1d(y.y, hw, sigma);
      };
      const double gx = (f({x.x + fd, x.y}) - f({x.x - fd, x.y})) / (2 * fd);
      const double gy = (f({x.x, x.y + fd}) - f({x.x, x.y - fd})) / (2 * fd);
      return std::hypot(gx, gy);
    });
    return DiscreteMeasure::from_density(std::move(g), 2);
  }
  if (type == "line_product") {
    // omega on the x-axis tensor a uniform transverse density
    std::vector<Atom> atoms;
    const double lo = j.at("transverse")[0].get<double>();
    const double hi = j.at("transverse")[1].get<double>();
    const double spacing = j.value("spacing", 0.02);
    const int nt = std::max(1, static_cast<int>(std::round((hi - lo) / spacing)));
    for (const auto& a : j.at("omega_atoms")) {
      const double x1 = a[0].get<double>(), w = a[1].get<double>();
      for (int t = 0; t < nt; ++t)
        atoms.push_back({{x1, lo + (t + 0.5) * (hi - lo) / nt}, w * (hi - lo) / nt});
    }
    return DiscreteMeasure::from_atoms(std::move(atoms), 2);
  }
  throw config_error("unknown measure type: " + type);
}

struct Sink {
  std::string dir;
  std::vector<std::string> files;
  std::vector<std::string> warnings;

  std::string path(const std::string& name) {
    files.push_back(name);
    return dir + "/" + name;
  }
};

void run_maximal(const ExperimentConfig& cfg, Sink& sink) {
  const json& j = cfg.raw;
  std::mt19937_64 rng(cfg.seed);
  const DiscreteMeasure mu = measure_from_json(j.at("measure"), rng);
  const std::string op = j.value("operator", "hl");
  const Box region = box_from_json(j.at("region"));
  const int grid_n = j.value("grid_n", 128);
  const json lam = j.at("lambda");
  const std::vector<double> lambda_grid =
      geometric_grid(lam.at("lo").get<double>(), lam.at("hi").get<double>(), lam.value("count", 16));

  SweepConfig sweep;
  if (j.contains("rho")) {
    sweep.rho_min = j["rho"].value("min", 1e-3);
    sweep.rho_max = j["rho"].value("max", 2.0);
    sweep.radii_per_octave = j["rho"].value("per_octave", 8);
  }
  sweep.threads = cfg.threads;

  const int k = mu.subspace_dim;
  ScalarGrid values;
  if (k == 1) {
    values = ScalarGrid({region.lo.x, 0.0}, region.width() / grid_n, grid_n, 1, 1);
    for (int i = 0; i < grid_n; ++i)
      sweep.eval_points.push_back(mu.line_origin + mu.axis * values.cell_center(i, 0).x);
  } else {
    values = ScalarGrid(region.lo, region.width() / grid_n, grid_n,
                        static_cast<int>(std::round(region.height() * grid_n / region.width())), 2);
    for (int jj = 0; jj < values.ny; ++jj)
      for (int ii = 0; ii < values.nx; ++ii)
        sweep.eval_points.push_back(values.cell_center(ii, jj));
  }

  json summary;
  summary["operator"] = op;
  if (op == "hl") {
    values.values = hl_maximal(mu, sweep);
    const Weak11Report rep = weak11_statistic(values, lambda_grid);
    write_level_curve_csv(rep.curve, sink.path("level_curve.csv"));
    summary["eps"] = nullptr;
    summary["tail_estimate"] = rep.tail_estimate;
    if (rep.boundary_contact) sink.warnings.push_back("superlevel set touches region boundary");
  } else if (op == "kakeya") {
    std::vector<double> eps_list;
    if (j.contains("eps_grid"))
      for (const auto& e : j["eps_grid"]) eps_list.push_back(e.get<double>());
    else
      eps_list.push_back(j.value("eps", 0.1));
    json tails = json::array();
    std::string eps_csv = "eps,tail\n";
    for (size_t i = 0; i < eps_list.size(); ++i) {
      values.values = kakeya_maximal(mu, eps_list[i], sweep);
      const Weak11Report rep = weak11_statistic(values, lambda_grid);
      const std::string suffix = eps_list.size() == 1 ? "" : "_" + std::to_string(i);
      write_level_curve_csv(rep.curve, sink.path("level_curve" + suffix + ".csv"));
      tails.push_back({{"eps", eps_list[i]}, {"tail_estimate", rep.tail_estimate}});
      char row[64];
      std::snprintf(row, sizeof(row), "%.17g,%.17g\n", eps_list[i], rep.tail_estimate);
      eps_csv += row;
      if (rep.boundary_contact)
        sink.warnings.push_back("superlevel set touches region boundary at eps=" +
                                std::to_string(eps_list[i]));
    }
    if (eps_list.size() > 1) write_text(sink.path("eps_scaling.csv"), eps_csv);
    summary["eps"] = tails;
    summary["tail_estimate"] = tails.back()["tail_estimate"];
  } else {
    throw config_error("maximal: unknown operator " + op);
  }
  summary["warnings"] = sink.warnings;
  write_text(sink.path("summary.json"), summary.dump(2) + "\n");
}

RoughKernel kernel_from_json(const json& j) {
  const std::string omega = j.value("omega", "riesz_sq_1");
  const double alpha0 = j.value("alpha0", 0.5);
  DirectionFn fn;
  if (omega == "riesz_sq_1") fn = DirectionFn::riesz_sq_1();
  else if (omega == "riesz_sq_2") fn = DirectionFn::riesz_sq_2();
  else if (omega == "table") {
    std::vector<double> s;
    for (const auto& v : j.at("samples")) s.push_back(v.get<double>());
    fn = DirectionFn(std::move(s));
  } else {
    throw config_error("unknown omega spec " + omega);
  }
  if (j.value("radial", "power_d") != "power_d")
    throw config_error("only the power_d radial part is configurable here");
  return RoughKernel::power_d(std::move(fn), alpha0);
}

void run_singular(const ExperimentConfig& cfg, Sink& sink) {
  const json& j = cfg.raw;
  const RoughKernel kernel = kernel_from_json(j.at("kernel"));
  const json in = j.at("input");
  const Box b = box_from_json(in.at("box"));
  const int n = in.value("grid_n", 128);
  const Vec2 c{in.at("center")[0].get<double>(), in.at("center")[1].get<double>()};
  const double s = in.value("sigma", 0.5);
  ScalarGrid f = ScalarGrid::sample(b, n, n, [&](Vec2 x) {
    return std::exp(-(x - c).norm2() / (2.0 * s * s));
  });

  const std::string op = j.value("operator", "truncated");
  ScalarGrid values;
  if (op == "truncated") {
    values = truncated_convolution_grid(kernel, f, j.value("eps_trunc", f.h / 2.0));
  } else if (op == "maximal") {
    const json eg = j.at("eps_grid");
    std::vector<double> eps;
    const int per_octave = eg.value("per_octave", 8);
    for (double e = eg.at("lo").get<double>(); e <= eg.at("hi").get<double>() * (1 + 1e-12);
         e *= std::pow(2.0, 1.0 / per_octave))
      eps.push_back(e);
    values = maximal_truncated_grid(kernel, f, eps,
                                    j.value("smooth_cutoff", false) ? TruncationKind::SmoothCutoff
                                                                    : TruncationKind::Hard);
  } else {
    throw config_error("singular: unknown operator " + op);
  }
  write_grid_csv(values, sink.path("values.csv"));

  ScalarGrid abs_vals = values;
  for (double& v : abs_vals.values) v = std::abs(v);
  const json lam = j.value("lambda", json{{"lo", 0.1}, {"hi", 100.0}, {"count", 16}});
  const LevelCurve curve = level_curve(
      abs_vals, geometric_grid(lam.at("lo").get<double>(), lam.at("hi").get<double>(),
                               lam.value("count", 16)));
  write_level_curve_csv(curve, sink.path("level_curve.csv"));

  json summary;
  summary["operator"] = op;
  summary["kernel"] = {{"omega", j.at("kernel").value("omega", "riesz_sq_1")},
                       {"alpha0", kernel.alpha0},
                       {"c1", kernel.c1},
                       {"c2", kernel.c2}};
  summary["warnings"] = sink.warnings;
  write_text(sink.path("summary.json"), summary.dump(2) + "\n");
}

void write_trajectories_csv(const ParticleFlow& flow, const std::string& path,
                            bool with_region) {
  std::ofstream out(path);
  out << (with_region ? "particle_id,t,x1,x2,region\n" : "particle_id,t,x1,x2\n");
  char buf[160];
  for (size_t p = 0; p < flow.cloud.points.size(); ++p)
    for (size_t k = 0; k < flow.times.size(); ++k) {
      if (with_region)
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%d\n", p, flow.times[k],
                      flow.positions[k][p].x, flow.positions[k][p].y,
                      static_cast<int>(flow.region[k][p]));
      else
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", p, flow.times[k],
                      flow.positions[k][p].x, flow.positions[k][p].y);
      out << buf;
    }
}

void run_flow(const ExperimentConfig& cfg, Sink& sink) {
  const json& j = cfg.raw;
  const FieldSpec field = field_from_json(j.at("field"));
  const Box box = box_from_json(j.at("box"));
  const ParticleCloud cloud = ParticleCloud::lattice(box, j.value("h_p", 0.05));
  const double T = j.value("T", 1.0);
  const double dt = j.value("dt", 1e-3);
  const Box eval_box = j.contains("eval_box") ? box_from_json(j["eval_box"]) : box.expanded(4.0);
  const int store_every = j.value("store_every", 16);

  const ParticleFlow flow =
      integrate_flow(field, cloud, 0.0, T, dt, eval_box, store_every, cfg.threads);
  write_trajectories_csv(flow, sink.path("trajectories.csv"), false);

  json summary;
  summary["particles"] = flow.n_particles();
  summary["escaped"] = flow.n_escaped();
  bool under = false;
  summary["compressibility"] = compressibility(flow, box, 10, &under);
  if (under) sink.warnings.push_back("compressibility cells under-resolved");

  if (field.has_analytic_div() || field.kind == FieldKind::Mollified) {
    const JacobianTrack track = jacobian_track(field, flow);
    std::ofstream out(sink.path("jacobian.csv"));
    out << "particle_id,t,jx_exp,jx_fd\n";
    char buf[160];
    for (size_t p = 0; p < cloud.points.size(); ++p)
      for (size_t k = 0; k < flow.times.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", p, flow.times[k],
                      track.jx_exp[k][p], track.det_fd[k][p]);
        out << buf;
      }
  }
  summary["warnings"] = sink.warnings;
  write_text(sink.path("summary.json"), summary.dump(2) + "\n");
}

void run_counterexample(const ExperimentConfig& cfg, Sink& sink) {
  const json& j = cfg.raw;
  const Box box = j.contains("box") ? box_from_json(j["box"]) : Box{{-1.0, 0.2}, {1.0, 1.0}};
  const ParticleCloud cloud = ParticleCloud::lattice(box, j.value("h_p", 0.02));
  const double T = j.value("T", 1.0);
  const int steps = j.value("store_steps", 32);

  const ParticleFlow fa = counterexample_flows(cloud, T, BranchRule::A, steps);
  const ParticleFlow fb = counterexample_flows(cloud, T, BranchRule::B, steps);
  write_trajectories_csv(fa, sink.path("trajectories_A.csv"), true);
  write_trajectories_csv(fb, sink.path("trajectories_B.csv"), true);

  std::ofstream out(sink.path("disagreement_map.csv"));
  out << "x1,x2,distance\n";
  char buf[160];
  long disagree = 0;
  for (size_t p = 0; p < cloud.points.size(); ++p) {
    const double d = (fa.final_positions()[p] - fb.final_positions()[p]).norm();
    if (d > 1e-9) ++disagree;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", cloud.points[p].x, cloud.points[p].y,
                  d);
    out << buf;
  }
  json summary;
  summary["particles"] = static_cast<long>(cloud.points.size());
  summary["disagree_fraction"] = static_cast<double>(disagree) / cloud.points.size();
  summary["warnings"] = sink.warnings;
  write_text(sink.path("summary.json"), summary.dump(2) + "\n");
}

void run_stability(const ExperimentConfig& cfg, Sink& sink) {
  const json& j = cfg.raw;
  std::vector<double> sigmas;
  for (const auto& s : j.value("sigma_grid", json::array({0.1, 0.05, 0.025, 0.0125})))
    sigmas.push_back(s.get<double>());
  std::vector<double> deltas;
  for (const auto& d : j.value("delta_grid", json::array({1e-2, 1e-3, 1e-4})))
    deltas.push_back(d.get<double>());
  std::vector<double> gammas;
  for (const auto& g : j.value("gamma_grid", json::array({1.0, 10.0, 100.0})))
    gammas.push_back(g.get<double>());

  const double T = j.value("T", 1.0);
  const double dt = j.value("dt", 2e-3);
  const double h_p = j.value("h_p", 0.02);
  FlowPairDomain dom{j.value("r", 1.0)};
  const FieldSpec base = shear_field();
  const Box cache_box{{-2.2, -2.2}, {2.2, 2.2}};
  const Box norm_box{{-2.0, -2.0}, {2.0, 2.0}};
  const ParticleCloud cloud = ParticleCloud::lattice({{-1.0, -1.0}, {1.0, 1.0}}, h_p);
  auto eta = [](double, Vec2) { return Vec2{0.0, 1.0}; };

  std::string cells_csv = "sigma,delta,lhs,perturbation_l1\n";
  int idx = 0;
  for (double sigma : sigmas) {
    const int n = std::max(64, static_cast<int>(std::ceil(cache_box.width() / (sigma / 5.0))));
    const FieldSpec b1 = mollify(base, sigma, cache_box, n);
    const FieldSpec b2 = mollify(base, sigma / 2.0, cache_box, n);
    const StabilityExperiment exp =
        stability_experiment(base, b1, b2, eta, cloud, T, dt, cache_box, norm_box, deltas, gammas,
                             dom, sigma, cfg.threads);
    write_stability_csv(exp.reports, sink.path("stability_sigma" + std::to_string(idx) + ".csv"));
    for (const StabilityCell& c : exp.cells) {
      char row[128];
      std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g\n", c.sigma, c.delta, c.lhs,
                    c.perturbation_l1);
      cells_csv += row;
    }
    ++idx;
  }
  write_text(sink.path("stability_cells.csv"), cells_csv);
  json summary;
  summary["sigma_grid"] = sigmas;
  summary["warnings"] = sink.warnings;
  write_text(sink.path("summary.json"), summary.dump(2) + "\n");
}

void run_transport(const ExperimentConfig& cfg, Sink& sink) {
  const json& j = cfg.raw;
  TransportProblem prob;
  prob.field = field_from_json(j.at("field"));
  const Box b = box_from_json(j.at("box"));
  const int n = j.value("grid_n", 96);
  const json u0 = j.at("u0");
  const Vec2 c{u0.at("center")[0].get<double>(), u0.at("center")[1].get<double>()};
  const double s = u0.value("sigma", 0.25);
  prob.u0 = ScalarGrid::sample(b, n, n, [&](Vec2 x) {
    return std::exp(-(x - c).norm2() / (2.0 * s * s));
  });
  const std::string gspec = j.value("G", "zero");
  if (gspec == "x1") prob.G = [](double, Vec2 x) { return x.x; };
  else if (gspec != "zero") prob.G = [v = std::stod(gspec)](double, Vec2) { return v; };
  const std::string fspec = j.value("F", "zero");
  if (fspec != "zero") prob.F = [v = std::stod(fspec)](double, Vec2) { return v; };
  prob.T = j.value("T", 1.0);

  const int nt = j.value("out_times", 9);
  std::vector<double> times(nt);
  for (int k = 0; k < nt; ++k) times[k] = prob.T * k / (nt - 1);
  const LagrangianSolution sol =
      solve_lagrangian(prob, times, LagrangianForm::ExpIntegral, j.value("dt", 1e-3),
                       b.expanded(6.0), cfg.threads);
  for (int k = 0; k < nt; ++k)
    write_grid_csv(sol.u[k], sink.path("u_" + std::to_string(k) + ".csv"));

  const RenormFn fn = RenormFn::rational();
  json defect;
  defect["beta"] = "rational";
  defect["residuals"] = json::array({renormalization_defect(sol, prob, fn)});
  write_text(sink.path("defect.json"), defect.dump(2) + "\n");

  json summary;
  summary["out_times"] = times;
  long flagged = 0;
  for (uint8_t f : sol.flagged) flagged += f;
  summary["flagged_nodes"] = flagged;
  summary["warnings"] = sink.warnings;
  write_text(sink.path("summary.json"), summary.dump(2) + "\n");
}

int run_all_acceptance(const ExperimentConfig& cfg, Sink& sink) {
  std::vector<int> only;
  if (cfg.raw.contains("only"))
    for (const auto& v : cfg.raw["only"]) only.push_back(v.get<int>());
  std::string report;
  json jrep = json::array();
  bool all_pass = true;
  const auto results = run_acceptance(cfg.threads, only, [&](const CriterionResult& r) {
    char line[512];
    std::snprintf(line, sizeof(line), "[%2d] %-38s %s  (%.2fs)  %s\n", r.id, r.name.c_str(),
                  r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    std::fputs(line, stdout);
    std::fflush(stdout);
  });
  for (const CriterionResult& r : results) {
    char line[512];
    std::snprintf(line, sizeof(line), "[%2d] %-38s %s  %s\n", r.id, r.name.c_str(),
                  r.pass ? "PASS" : "FAIL", r.detail.c_str());
    report += line;
    jrep.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"detail", r.detail},
                    {"seconds", r.seconds}});
    all_pass = all_pass && r.pass;
  }
  write_text(sink.path("acceptance_report.txt"), report);
  write_text(sink.path("acceptance_report.json"), jrep.dump(2) + "\n");
  return all_pass ? 0 : 3;
}

}  // namespace

FieldSpec field_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return zero_field();
  if (kind == "rotation") return rotation_field();
  if (kind == "linear") return linear_field();
  if (kind == "sine_shear") return sine_shear_field();
  if (kind == "shear") return shear_field();
  if (kind == "counterexample") return counterexample_field_spec();
  if (kind == "constant")
    return constant_field({j.value("vx", 0.0), j.value("vy", 0.0)});
  if (kind == "mollified") {
    const FieldSpec base = field_from_json(j.at("base"));
    const Box box = box_from_json(j.at("box"));
    return mollify(base, j.at("sigma").get<double>(), box, j.value("grid_n", 256));
  }
  throw config_error("unknown field kind: " + kind);
}

ExperimentConfig ExperimentConfig::parse(const json& j) {
  static const std::set<std::string> known = {"maximal",   "singular",  "flow",
                                              "stability", "transport", "counterexample",
                                              "all-acceptance"};
  ExperimentConfig cfg;
  if (!j.is_object()) throw config_error("config must be a JSON object");
  if (!j.contains("subcommand")) throw config_error("config missing subcommand");
  cfg.subcommand = j.at("subcommand").get<std::string>();
  if (!known.count(cfg.subcommand)) throw config_error("unknown subcommand " + cfg.subcommand);
  cfg.raw = j;
  cfg.out_dir = j.value("out", "out");
  cfg.seed = j.value("seed", 1ull);
  cfg.threads = j.value("threads", 1);
  if (cfg.threads < 1) throw config_error("threads must be >= 1");
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error(std::string("invalid config JSON: ") + e.what());
  }
  return parse(j);
}

RunResult run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  fs::create_directories(cfg.out_dir);
  Sink sink;
  sink.dir = cfg.out_dir;

  int code = 0;
  if (cfg.subcommand == "maximal") run_maximal(cfg, sink);
  else if (cfg.subcommand == "singular") run_singular(cfg, sink);
  else if (cfg.subcommand == "flow") run_flow(cfg, sink);
  else if (cfg.subcommand == "counterexample") run_counterexample(cfg, sink);
  else if (cfg.subcommand == "stability") run_stability(cfg, sink);
  else if (cfg.subcommand == "transport") run_transport(cfg, sink);
  else if (cfg.subcommand == "all-acceptance") code = run_all_acceptance(cfg, sink);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json manifest;
  manifest["tool"] = "flowlab 0.1.0";
  manifest["config_hash"] = hex64(fnv1a(cfg.raw.dump()));
  manifest["seed"] = cfg.seed;
  manifest["runtimes"] = {{"total_s", secs}};
  manifest["warnings"] = sink.warnings;
  json outputs;
  for (const std::string& f : sink.files)
    outputs[f] = hex64(fnv1a(read_bytes(cfg.out_dir + "/" + f)));
  manifest["outputs"] = outputs;
  write_text(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");

  res.exit_code = code;
  res.files = sink.files;
  res.warnings = sink.warnings;
  return res;
}

std::vector<std::string> emit_plots(const std::string& result_dir) {
  std::vector<std::string> scripts;
  std::vector<std::string> skipped;
  if (!fs::exists(result_dir)) return scripts;

  auto write_script = [&](const std::string& name, const std::string& body) {
    const std::string path = result_dir + "/" + name;
    write_text(path, body);
    scripts.push_back(path);
  };

  std::vector<std::string> level_curves, stability_files;
  bool have_eps = false, have_map = false;
  for (const auto& entry : fs::directory_iterator(result_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("level_curve", 0) == 0 && entry.path().extension() == ".csv")
      level_curves.push_back(name);
    if (name.rfind("stability_sigma", 0) == 0) stability_files.push_back(name);
    if (name == "eps_scaling.csv") have_eps = true;
    if (name == "disagreement_map.csv") have_map = true;
  }
  std::sort(level_curves.begin(), level_curves.end());
  std::sort(stability_files.begin(), stability_files.end());

  if (!level_curves.empty()) {
    std::string body = "set datafile separator ','\nset logscale xy\nset xlabel 'lambda'\n"
                       "set ylabel 'lambda * measure'\nset key left bottom\n"
                       "set term pngcairo size 900,700\nset output 'level_curves.png'\nplot ";
    for (size_t i = 0; i < level_curves.size(); ++i) {
      if (i) body += ", ";
      body += "'" + level_curves[i] + "' using 1:2 with linespoints title '" + level_curves[i] +
              "'";
    }
    body += "\n";
    write_script("plot_level_curves.gnuplot", body);
  } else {
    skipped.push_back("level curves: no level_curve*.csv present");
  }

  if (have_eps) {
    write_script("plot_eps_scaling.gnuplot",
                 "set datafile separator ','\nset logscale xy\nset xlabel 'eps'\n"
                 "set ylabel 'tail statistic'\nset term pngcairo size 900,700\n"
                 "set output 'eps_scaling.png'\n"
                 "plot 'eps_scaling.csv' using 1:2 with linespoints title 'tail(eps)'\n");
  } else {
    skipped.push_back("eps scaling: eps_scaling.csv missing");
  }

  if (!stability_files.empty()) {
    std::string body = "set datafile separator ','\nset logscale x\nset xlabel 'delta'\n"
                       "set ylabel 'phi / |log delta|'\nset term pngcairo size 900,700\n"
                       "set output 'stability.png'\nplot ";
    for (size_t i = 0; i < stability_files.size(); ++i) {
      if (i) body += ", ";
      body += "'" + stability_files[i] + "' using 1:4 with points title '" + stability_files[i] +
              "'";
    }
    body += "\n";
    write_script("plot_stability.gnuplot", body);
  } else {
    skipped.push_back("stability: no stability_sigma*.csv present");
  }

  if (have_map) {
    write_script("plot_disagreement_map.gnuplot",
                 "set datafile separator ','\nset xlabel 'x1'\nset ylabel 'x2'\n"
                 "set term pngcairo size 900,700\nset output 'disagreement_map.png'\n"
                 "plot 'disagreement_map.csv' using 1:2:3 with points palette pt 5 title "
                 "'|X_A - X_B|(T)'\n");
  } else {
    skipped.push_back("disagreement map: disagreement_map.csv missing");
  }

  std::string rep;
  for (const std::string& s : skipped) rep += s + "\n";
  write_text(result_dir + "/skipped_figures.txt", rep);
  return scripts;
}

}  // namespace flowlab
