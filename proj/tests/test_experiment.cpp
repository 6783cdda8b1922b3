#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqnn/experiment.hpp"

using namespace dqnn;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_network_block() {
  return json{{"style", "extended"},
              {"layers", json::array({json::array({2}), json::array({2})})}};
}

json tiny_learn_random() {
  return json{
      {"kind", "learn-random"},
      {"network", minimal_network_block()},
      {"train",
       {{"mode", "choi"}, {"cost", "hs"}, {"iterations", 5}, {"lr", 1e-3}}},
      {"seed", 4242},
      {"channel_count", 2},
      {"final_diamond", {{"samples", 10}, {"refine_steps", 5}}},
  };
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(static_cast<bool>(f));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

// fresh scratch directory under the test runner's working directory
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("experiment_test_tmp") / name;
  fs::remove_all(dir);
  return dir;
}

struct CsvRow {
  int iteration;
  double cost;
  bool has_diamond;
  double diamond;
};

std::vector<CsvRow> parse_csv(const std::string& body) {
  std::istringstream in(body);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "iteration,cost,diamond");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    REQUIRE(c1 != std::string::npos);
    REQUIRE(c2 != std::string::npos);
    CsvRow r{};
    r.iteration = std::stoi(line.substr(0, c1));
    r.cost = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
    const std::string d = line.substr(c2 + 1);
    r.has_diamond = !d.empty();
    r.diamond = r.has_diamond ? std::strtod(d.c_str(), nullptr) : 0.0;
    rows.push_back(r);
  }
  return rows;
}

bool throws_mentioning(const json& spec, const std::string& needle) {
  try {
    (void)parse_spec(spec);
  } catch (const std::exception& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("a minimal learn-random spec parses with defaults") {
  const ExperimentSpec s = parse_spec(tiny_learn_random());
  CHECK(s.kind == "learn-random");
  CHECK(s.seed == 4242);
  CHECK(s.workers == 1);
  CHECK(s.channel_count == 2);
  REQUIRE(s.costs.size() == 1);  // defaults to the training cost
  CHECK(s.costs[0] == CostKind::hs);
  CHECK(s.train.iterations == 5);
  CHECK(s.train.lr == 1e-3);
  CHECK(s.train.seed == s.seed);
  CHECK(s.final_diamond.samples == 10);
  CHECK(s.final_diamond.refine_steps == 5);
  CHECK(s.arch.d_in() == 2);
  CHECK(s.arch.d_out() == 2);
}

TEST_CASE("unknown keys are rejected by name at every level") {
  json spec = tiny_learn_random();
  spec["bogus_key"] = 1;
  CHECK(throws_mentioning(spec, "bogus_key"));

  spec = tiny_learn_random();
  spec["alphas"] = json::array({0.5});  // werner-only key on learn-random
  CHECK(throws_mentioning(spec, "alphas"));

  spec = tiny_learn_random();
  spec["train"]["momentum"] = 0.9;
  CHECK(throws_mentioning(spec, "momentum"));

  spec = tiny_learn_random();
  spec["network"]["depth"] = 3;
  CHECK(throws_mentioning(spec, "depth"));

  spec = tiny_learn_random();
  spec["final_diamond"]["iterations"] = 3;
  CHECK(throws_mentioning(spec, "iterations"));

  spec = tiny_learn_random();
  spec["train"]["diamond"] = json{{"samples", 5}, {"weird", 1}};
  CHECK(throws_mentioning(spec, "weird"));
}

TEST_CASE("missing required fields and bad values are diagnosed") {
  json spec = tiny_learn_random();
  spec.erase("channel_count");
  CHECK(throws_mentioning(spec, "channel_count"));

  spec = tiny_learn_random();
  spec.erase("network");
  CHECK(throws_mentioning(spec, "network"));

  spec = tiny_learn_random();
  spec.erase("kind");
  CHECK(throws_mentioning(spec, "kind"));

  spec = tiny_learn_random();
  spec["kind"] = "mystery";
  CHECK(throws_mentioning(spec, "mystery"));

  spec = tiny_learn_random();
  spec["train"]["cost"] = "nope";
  CHECK_THROWS((void)parse_spec(spec));

  spec = tiny_learn_random();
  spec["train"]["mode"] = "sideways";
  CHECK(throws_mentioning(spec, "train.mode"));

  spec = tiny_learn_random();
  spec["workers"] = 0;
  CHECK(throws_mentioning(spec, "workers"));

  spec = tiny_learn_random();
  spec["train"]["iterations"] = 0;
  CHECK(throws_mentioning(spec, "iterations"));
}

TEST_CASE("werner sweeps insist the network matches the sweep dimension") {
  json spec = {
      {"kind", "werner-sweep"},
      {"network", minimal_network_block()},
      {"alphas", json::array({0.0, 1.0})},
      {"dimension", 3},
  };
  CHECK(throws_mentioning(spec, "dimension"));
  spec["dimension"] = 2;
  const ExperimentSpec s = parse_spec(spec);
  CHECK(s.alphas.size() == 2);
  CHECK(s.dimension == 2);
}

TEST_CASE("gradient-check defaults to the six analytic costs") {
  const json spec = {{"kind", "gradient-check"},
                     {"network", minimal_network_block()},
                     {"trials", 2}};
  const ExperimentSpec s = parse_spec(spec);
  CHECK(s.trials == 2);
  CHECK(s.tolerance == 1e-5);
  CHECK(s.costs.size() == 6);
}

TEST_CASE("overrides reach into the raw spec") {
  json spec = tiny_learn_random();
  SpecOverrides ov;
  ov.has_seed = true;
  ov.seed = 99;
  ov.has_iterations = true;
  ov.iterations = 77;
  ov.has_workers = true;
  ov.workers = 3;
  apply_overrides(spec, ov);
  const ExperimentSpec s = parse_spec(spec);
  CHECK(s.seed == 99);
  CHECK(s.train.iterations == 77);
  CHECK(s.workers == 3);

  // iterations override creates the train block when absent
  json bare = {{"kind", "param-report"}, {"network", minimal_network_block()}};
  SpecOverrides ov2;
  ov2.has_iterations = true;
  ov2.iterations = 12;
  apply_overrides(bare, ov2);
  CHECK(bare["train"]["iterations"] == 12);
}

TEST_CASE("load_json_file reports unreadable or malformed input") {
  CHECK_THROWS((void)load_json_file("does_not_exist_anywhere.json"));
  const fs::path dir = scratch("badjson");
  fs::create_directories(dir);
  const fs::path p = dir / "broken.json";
  std::ofstream(p) << "{ not json";
  CHECK_THROWS((void)load_json_file(p.string()));
  fs::remove_all("experiment_test_tmp");
}

TEST_CASE("param-report runs and records the parameter table") {
  const json raw = {{"kind", "param-report"},
                    {"network", minimal_network_block()}};
  const fs::path out = scratch("param_report");
  CHECK(run_experiment(parse_spec(raw), raw, out.string()) == 0);
  const json summary = read_json(out / "summary.json");
  CHECK(summary["kind"] == "param-report");
  CHECK(summary["total_active_params"] == 28);
  REQUIRE(summary["perceptrons"].size() == 1);
  CHECK(summary["perceptrons"][0]["d_in"] == 2);
  CHECK(summary["perceptrons"][0]["d_out"] == 8);
  CHECK(summary["perceptrons"][0]["active_params"] == 28);
  const json manifest = read_json(out / "manifest.json");
  CHECK(manifest["kind"] == "param-report");
  CHECK(manifest["seeds"]["master"] == 0);
  CHECK(manifest["spec"] == raw);
  fs::remove_all("experiment_test_tmp");
}

TEST_CASE("gradient-check passes on the analytic costs and rejects the rest") {
  json raw = {{"kind", "gradient-check"},
              {"network", minimal_network_block()},
              {"trials", 2},
              {"costs", json::array({"hs", "f1"})},
              {"seed", 7}};
  const fs::path out = scratch("gradcheck");
  CHECK(run_experiment(parse_spec(raw), raw, out.string()) == 0);
  const json summary = read_json(out / "summary.json");
  CHECK(summary["pass"] == true);
  CHECK(summary["per_cost"]["hs"]["pass"] == true);
  CHECK(summary["per_cost"]["hs"]["max_rel_err"].get<double>() < 1e-5);

  raw["costs"] = json::array({"qcb"});
  CHECK_THROWS(run_experiment(parse_spec(raw), raw, ""));
  fs::remove_all("experiment_test_tmp");
}

TEST_CASE("learn-random writes consistent csv, summary, and manifest") {
  const json raw = tiny_learn_random();
  const ExperimentSpec s = parse_spec(raw);
  const fs::path out = scratch("learn_random");
  CHECK(run_experiment(s, raw, out.string()) == 0);

  const auto rows0 = parse_csv(read_file(out / "hs_chan0.csv"));
  const auto rows1 = parse_csv(read_file(out / "hs_chan1.csv"));
  REQUIRE(rows0.size() == 5);
  REQUIRE(rows1.size() == 5);
  for (size_t i = 0; i < rows0.size(); ++i) {
    CHECK(rows0[i].iteration == static_cast<int>(i));
    CHECK(!rows0[i].has_diamond);  // diamond_every defaults to off
  }

  const json summary = read_json(out / "summary.json");
  CHECK(summary["kind"] == "learn-random");
  CHECK(summary["channel_count"] == 2);
  CHECK(summary["iterations"] == 5);
  const auto& entry = summary["per_cost"]["hs"];
  REQUIRE(entry["mean_cost"].size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    const double want = 0.5 * (rows0[i].cost + rows1[i].cost);
    CHECK(entry["mean_cost"][i].get<double>() ==
          doctest::Approx(want).epsilon(1e-15));
  }
  REQUIRE(entry["final_diamond"]["values"].size() == 2);
  const double v0 = entry["final_diamond"]["values"][0].get<double>();
  const double v1 = entry["final_diamond"]["values"][1].get<double>();
  CHECK(entry["final_diamond"]["mean"].get<double>() ==
        doctest::Approx(0.5 * (v0 + v1)).epsilon(1e-15));

  const json manifest = read_json(out / "manifest.json");
  CHECK(manifest["seeds"]["master"] == 4242);
  REQUIRE(manifest["seeds"]["runs"].size() == 2);
  CHECK(manifest["spec"] == raw);
  CHECK(manifest["versions"].contains("dqnn"));
  fs::remove_all("experiment_test_tmp");
}

TEST_CASE("experiment outputs are byte-identical across reruns and worker counts") {
  json raw = tiny_learn_random();
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  REQUIRE(run_experiment(parse_spec(raw), raw, a.string()) == 0);
  json raw2 = raw;
  raw2["workers"] = 3;
  REQUIRE(run_experiment(parse_spec(raw2), raw2, b.string()) == 0);
  CHECK(read_file(a / "hs_chan0.csv") == read_file(b / "hs_chan0.csv"));
  CHECK(read_file(a / "hs_chan1.csv") == read_file(b / "hs_chan1.csv"));
  const json sa = read_json(a / "summary.json");
  const json sb = read_json(b / "summary.json");
  CHECK(sa == sb);
  fs::remove_all("experiment_test_tmp");
}

TEST_CASE("periodic diamond estimates appear in csv and summary") {
  json raw = tiny_learn_random();
  raw["train"]["iterations"] = 6;
  raw["train"]["diamond_every"] = 2;
  raw["train"]["diamond"] = json{{"samples", 8}, {"refine_steps", 4}};
  const fs::path out = scratch("diamond_series");
  REQUIRE(run_experiment(parse_spec(raw), raw, out.string()) == 0);
  const auto rows = parse_csv(read_file(out / "hs_chan0.csv"));
  REQUIRE(rows.size() == 6);
  for (size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i].has_diamond == (i % 2 == 0));
  const json summary = read_json(out / "summary.json");
  const auto& ds = summary["per_cost"]["hs"]["mean_diamond_series"];
  REQUIRE(ds["iterations"].size() == 3);
  CHECK(ds["iterations"][0] == 0);
  CHECK(ds["iterations"][1] == 2);
  CHECK(ds["iterations"][2] == 4);
  fs::remove_all("experiment_test_tmp");
}

TEST_CASE("werner sweeps record per-alpha runs with drop markers") {
  const json raw = {
      {"kind", "werner-sweep"},
      {"network", minimal_network_block()},
      {"train",
       {{"mode", "choi"},
        {"cost", "hs"},
        {"iterations", 8},
        {"lr", 1e-3},
        {"diamond_every", 4},
        {"diamond", {{"samples", 8}, {"refine_steps", 4}}}}},
      {"seed", 11},
      {"alphas", json::array({0.0, 1.0})},
      {"dimension", 2},
      {"final_diamond", {{"samples", 10}, {"refine_steps", 5}}},
  };
  const fs::path out = scratch("werner");
  REQUIRE(run_experiment(parse_spec(raw), raw, out.string()) == 0);
  CHECK(fs::exists(out / "alpha_0.csv"));
  CHECK(fs::exists(out / "alpha_1.csv"));
  const json summary = read_json(out / "summary.json");
  CHECK(summary["kind"] == "werner-sweep");
  REQUIRE(summary["alphas"].size() == 2);
  REQUIRE(summary["runs"].size() == 2);
  for (const auto& run : summary["runs"]) {
    CHECK(run.contains("alpha"));
    CHECK(run.contains("csv"));
    CHECK(run.contains("final_diamond"));
    CHECK(run.contains("diamond_series"));
    CHECK(run.contains("steepest_drop_iteration"));
    REQUIRE(run["diamond_series"]["iterations"].size() == 2);
    CHECK(run["diamond_series"]["iterations"][0] == 0);
    CHECK(run["diamond_series"]["iterations"][1] == 4);
  }
  fs::remove_all("experiment_test_tmp");
}

TEST_CASE("csv doubles round-trip exactly through the %.17g format") {
  json raw = tiny_learn_random();
  raw["channel_count"] = 1;
  const fs::path out = scratch("roundtrip");
  REQUIRE(run_experiment(parse_spec(raw), raw, out.string()) == 0);
  const auto rows = parse_csv(read_file(out / "hs_chan0.csv"));
  const json summary = read_json(out / "summary.json");
  const auto& mean_cost = summary["per_cost"]["hs"]["mean_cost"];
  REQUIRE(mean_cost.size() == rows.size());
  // single channel: the summary mean IS the run, so equality must be exact
  for (size_t i = 0; i < rows.size(); ++i)
    CHECK(mean_cost[i].get<double>() == rows[i].cost);
  fs::remove_all("experiment_test_tmp");
}
