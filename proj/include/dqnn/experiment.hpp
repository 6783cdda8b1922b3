#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqnn/metrics.hpp"
#include "dqnn/network.hpp"
#include "dqnn/train.hpp"

namespace dqnn {

// A fully validated experiment description.  Parsed from JSON with strict
// schemas: unknown keys are rejected with a diagnostic listing them.
struct ExperimentSpec {
  std::string kind;  // learn-random | werner-sweep | gradient-check | param-report
  Architecture arch;
  TrainConfig train;
  std::uint64_t seed = 0;
  int workers = 1;
  DiamondConfig final_diamond;  // post-training estimate (seed derived per run)

  std::vector<CostKind> costs;  // learn-random, gradient-check
  int channel_count = 0;        // learn-random

  std::vector<double> alphas;  // werner-sweep
  int dimension = 2;           // werner-sweep

  int trials = 50;          // gradient-check
  double tolerance = 1e-5;  // gradient-check
};

// architecture block: {"style": "extended"|"conventional",
//                      "layers": [[2],[2]], "ancillas": [[2]]?}
Architecture parse_architecture(const nlohmann::json& j);

ExperimentSpec parse_spec(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);

// scalar CLI overrides applied to the raw spec before parsing
struct SpecOverrides {
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_iterations = false;
  int iterations = 0;
  bool has_workers = false;
  int workers = 0;
};

void apply_overrides(nlohmann::json& j, const SpecOverrides& ov);

// Executes a parsed spec.  With a non-empty out_dir, writes one CSV per run
// (columns: iteration,cost,diamond), summary.json, and manifest.json; an empty
// out_dir skips the files.  Returns a process exit status (0 = success; a
// failing gradient-check returns 1).  Runs are distributed over `workers`
// threads and merged by run index, so output does not depend on worker count.
int run_experiment(const ExperimentSpec& spec, const nlohmann::json& raw,
                   const std::string& out_dir);

// per-perceptron active-parameter table, printed to stdout
void print_param_report(const Architecture& arch);

}  // namespace dqnn
