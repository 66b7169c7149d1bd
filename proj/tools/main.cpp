#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flowlab/experiment.hpp"

using flowlab::ExperimentConfig;

int main(int argc, char** argv) {
  CLI::App app{"flowlab: maximal/singular operator sweeps, Lagrangian flows, "
               "stability functionals and transport solves"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  unsigned long long seed = 0;
  bool have_seed = false, have_threads = false, plots = false;

  for (const char* name : {"maximal", "singular", "flow", "stability", "transport",
                           "counterexample", "all-acceptance"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config JSON");
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--threads", threads, "worker count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed override");
    sub->add_flag("--plots", plots, "emit gnuplot scripts next to the results");
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  have_threads = sub->count("--threads") > 0;
  have_seed = sub->count("--seed") > 0;

  try {
    nlohmann::json j;
    if (!config_path.empty()) {
      j = ExperimentConfig::load(config_path).raw;
    } else {
      j = nlohmann::json::object();
    }
    j["subcommand"] = sub->get_name();
    if (!out_dir.empty()) j["out"] = out_dir;
    if (have_seed) j["seed"] = seed;
    if (have_threads) j["threads"] = threads;
    const ExperimentConfig cfg = ExperimentConfig::parse(j);

    const flowlab::RunResult res = flowlab::run(cfg);
    if (plots) flowlab::emit_plots(cfg.out_dir);
    for (const std::string& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return res.exit_code;
  } catch (const flowlab::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
