#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flowlab/fields.hpp"

namespace flowlab {

/// Validated batch-experiment description. All randomness (sampled clouds,
/// sampled eval points) comes from the single seeded generator.
struct ExperimentConfig {
  std::string subcommand;
  nlohmann::json raw;
  std::string out_dir = "out";
  uint64_t seed = 1;
  int threads = 1;

  static ExperimentConfig parse(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 config error, 3 acceptance failure
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Executes the experiment, writes its CSV/JSON artifacts and a
/// manifest.json holding the config hash, per-file content hashes, runtimes
/// and accumulated numerical warnings. Outputs are byte-reproducible for a
/// fixed config.
RunResult run(const ExperimentConfig& config);

/// Builds a FieldSpec from its JSON description
/// {"kind": "shear"|"rotation"|"counterexample"|"zero"|"linear"|"sine_shear"|
///  "constant"|"mollified", ...}.
FieldSpec field_from_json(const nlohmann::json& j);

/// Writes one gnuplot script per recognized result CSV in dir (level curves
/// log-log, eps-scaling overlays, stability functionals, disagreement maps)
/// plus a skipped-figures report for requested-but-missing inputs.
/// Returns the script paths.
std::vector<std::string> emit_plots(const std::string& result_dir);

/// FNV-1a hash used for config and artifact fingerprints in the manifest.
uint64_t fnv1a(const std::string& bytes);

}  // namespace flowlab
