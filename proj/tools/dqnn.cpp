#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dqnn/experiment.hpp"

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("DQNN_OUT");
  return env ? env : "";
}

std::vector<std::string> split_tags(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tag;
  while (std::getline(ss, tag, ','))
    if (!tag.empty()) out.push_back(tag);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissipative quantum neural network training and channel benchmarks"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = default_out_dir();
  dqnn::SpecOverrides ov;
  std::uint64_t seed_flag = 0;
  int iterations_flag = 0;
  int workers_flag = 0;

  auto* run = app.add_subcommand("run", "execute an experiment spec");
  run->add_option("spec", spec_path, "experiment spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (default: $DQNN_OUT or spec-only run)");
  auto* run_seed = run->add_option("--seed", seed_flag, "override master seed");
  auto* run_iters =
      run->add_option("--iterations", iterations_flag, "override train.iterations");
  auto* run_workers = run->add_option("--workers", workers_flag, "override worker count");

  std::string gc_spec_path;
  std::string gc_costs;
  int gc_trials = 0;
  double gc_tolerance = 0.0;
  auto* gc = app.add_subcommand("gradient-check",
                                "compare analytic cost gradients against finite differences");
  gc->add_option("spec", gc_spec_path, "optional spec file (kind gradient-check)")
      ->check(CLI::ExistingFile);
  auto* gc_trials_opt = gc->add_option("--trials", gc_trials, "random instances per cost");
  auto* gc_costs_opt =
      gc->add_option("--costs", gc_costs, "comma-separated cost tags (default: all analytic)");
  auto* gc_seed_opt = gc->add_option("--seed", seed_flag, "master seed");
  auto* gc_tol_opt = gc->add_option("--tolerance", gc_tolerance, "relative tolerance");
  gc->add_option("--out", out_dir, "output directory for summary/manifest");

  std::string pr_path;
  auto* pr = app.add_subcommand("param-report",
                                "per-perceptron active parameter counts for an architecture");
  pr->add_option("file", pr_path, "architecture or spec file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      nlohmann::json raw = dqnn::load_json_file(spec_path);
      ov.has_seed = run_seed->count() > 0;
      ov.seed = seed_flag;
      ov.has_iterations = run_iters->count() > 0;
      ov.iterations = iterations_flag;
      ov.has_workers = run_workers->count() > 0;
      ov.workers = workers_flag;
      dqnn::apply_overrides(raw, ov);
      const dqnn::ExperimentSpec spec = dqnn::parse_spec(raw);
      return dqnn::run_experiment(spec, raw, out_dir);
    }

    if (gc->parsed()) {
      nlohmann::json raw;
      if (!gc_spec_path.empty()) {
        raw = dqnn::load_json_file(gc_spec_path);
      } else {
        raw["kind"] = "gradient-check";
        raw["network"] = {{"style", "extended"},
                          {"layers", nlohmann::json::array({{2}, {2}})},
                          {"ancillas", nlohmann::json::array({{2}})}};
      }
      if (gc_trials_opt->count()) raw["trials"] = gc_trials;
      if (gc_tol_opt->count()) raw["tolerance"] = gc_tolerance;
      if (gc_seed_opt->count()) raw["seed"] = seed_flag;
      if (gc_costs_opt->count()) raw["costs"] = split_tags(gc_costs);
      const dqnn::ExperimentSpec spec = dqnn::parse_spec(raw);
      return dqnn::run_experiment(spec, raw, out_dir);
    }

    if (pr->parsed()) {
      const nlohmann::json raw = dqnn::load_json_file(pr_path);
      if (raw.contains("kind")) {
        const dqnn::ExperimentSpec spec = dqnn::parse_spec(raw);
        dqnn::print_param_report(spec.arch);
      } else {
        dqnn::print_param_report(dqnn::parse_architecture(raw));
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
