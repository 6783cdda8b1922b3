#include "dqnn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Core>

namespace dqnn {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

// seed-derivation roles (manifest-recorded)
constexpr std::uint64_t kRoleChannel = 0xC4A;
constexpr std::uint64_t kRoleTrain = 0x7247;
constexpr std::uint64_t kRoleFinalDiamond = 0xD1AF;
constexpr std::uint64_t kRoleGradParams = 0x9C;

void require_keys(const json& j, const std::string& where,
                  const std::vector<std::string>& allowed) {
  if (!j.is_object())
    throw std::runtime_error("spec: " + where + " must be an object");
  std::vector<std::string> bad;
  for (const auto& item : j.items())
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      bad.push_back(item.key());
  if (!bad.empty()) {
    std::string msg = "spec: unknown key(s) in " + where + ":";
    for (const auto& k : bad) msg += " '" + k + "'";
    throw std::runtime_error(msg);
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

std::vector<std::vector<int>> parse_layer_list(const json& j,
                                               const std::string& where) {
  if (!j.is_array() || j.empty())
    throw std::runtime_error("spec: " + where + " must be a non-empty array");
  std::vector<std::vector<int>> out;
  for (const auto& layer : j) {
    if (!layer.is_array() || layer.empty())
      throw std::runtime_error("spec: each entry of " + where +
                               " must be a non-empty array of dimensions");
    out.push_back(layer.get<std::vector<int>>());
  }
  return out;
}

DiamondConfig parse_diamond(const json& j, const std::string& where,
                            const DiamondConfig& defaults) {
  require_keys(j, where, {"samples", "refine_steps", "perturb_scale", "decay"});
  DiamondConfig d = defaults;
  d.samples = get_or(j, "samples", d.samples);
  d.refine_steps = get_or(j, "refine_steps", d.refine_steps);
  d.perturb_scale = get_or(j, "perturb_scale", d.perturb_scale);
  d.decay = get_or(j, "decay", d.decay);
  if (d.samples < 1) throw std::runtime_error("spec: " + where + ".samples < 1");
  if (d.decay <= 0.0 || d.decay >= 1.0)
    throw std::runtime_error("spec: " + where + ".decay outside (0,1)");
  return d;
}

TrainConfig parse_train(const json& j) {
  require_keys(j, "train",
               {"mode", "cost", "iterations", "lr", "init_scale", "fd_epsilon",
                "batches", "batch_size", "resample_size", "plateau_window",
                "plateau_rel_tol", "plateau_cooldown", "diamond_every",
                "diamond"});
  TrainConfig c;
  const std::string mode = get_or<std::string>(j, "mode", "choi");
  if (mode == "choi")
    c.mode = TrainMode::choi;
  else if (mode == "random_state")
    c.mode = TrainMode::random_state;
  else
    throw std::runtime_error("spec: train.mode must be 'choi' or 'random_state'");
  c.cost = cost_from_tag(get_or<std::string>(j, "cost", "hs"));
  c.iterations = get_or(j, "iterations", c.iterations);
  c.lr = get_or(j, "lr", c.lr);
  c.init_scale = get_or(j, "init_scale", c.init_scale);
  c.fd_epsilon = get_or(j, "fd_epsilon", c.fd_epsilon);
  c.batches = get_or(j, "batches", c.batches);
  c.batch_size = get_or(j, "batch_size", c.batch_size);
  c.resample_size = get_or(j, "resample_size", c.resample_size);
  c.plateau_window = get_or(j, "plateau_window", c.plateau_window);
  c.plateau_rel_tol = get_or(j, "plateau_rel_tol", c.plateau_rel_tol);
  c.plateau_cooldown = get_or(j, "plateau_cooldown", c.plateau_cooldown);
  c.diamond_every = get_or(j, "diamond_every", c.diamond_every);
  if (j.contains("diamond"))
    c.diamond = parse_diamond(j.at("diamond"), "train.diamond", c.diamond);
  if (c.iterations < 1) throw std::runtime_error("spec: train.iterations < 1");
  if (c.lr <= 0.0) throw std::runtime_error("spec: train.lr must be positive");
  return c;
}

std::vector<CostKind> parse_costs(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::runtime_error("spec: costs must be a non-empty array of tags");
  std::vector<CostKind> out;
  for (const auto& tag : j) out.push_back(cost_from_tag(tag.get<std::string>()));
  return out;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string trace_csv(const TrainingTrace& trace) {
  std::string out = "iteration,cost,diamond\n";
  size_t di = 0;
  for (size_t it = 0; it < trace.cost.size(); ++it) {
    out += std::to_string(it);
    out += ',';
    out += format_g17(trace.cost[it]);
    out += ',';
    if (di < trace.diamond.size() &&
        trace.diamond[di].first == static_cast<int>(it)) {
      out += format_g17(trace.diamond[di].second);
      ++di;
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << body;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

double mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// run `count` jobs on `workers` threads; any exception is rethrown after join
void parallel_for(int count, int workers,
                  const std::function<void(int)>& job) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct RunOutputs {
  std::string csv_name;
  TrainingTrace trace;
  double final_diamond = 0.0;
};

json diamond_settings_json(const DiamondConfig& d) {
  return json{{"samples", d.samples},
              {"refine_steps", d.refine_steps},
              {"perturb_scale", d.perturb_scale},
              {"decay", d.decay}};
}

json base_manifest(const ExperimentSpec& spec, const json& raw) {
  json m;
  m["spec"] = raw;
  m["kind"] = spec.kind;
  m["seeds"] = json{{"master", spec.seed}};
  m["workers"] = spec.workers;
  m["estimator"] = json{{"final_diamond", diamond_settings_json(spec.final_diamond)},
                        {"note", "Monte-Carlo lower bound; see README"}};
  m["versions"] = json{
      {"dqnn", kVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__}};
  m["timestamp"] = iso_timestamp();
  return m;
}

void emit(const std::string& out_dir, const json& summary, const json& manifest,
          const std::vector<RunOutputs>* runs) {
  if (out_dir.empty()) return;
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  if (runs)
    for (const auto& r : *runs) write_file(dir / r.csv_name, trace_csv(r.trace));
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<double> mean_series(const std::vector<const TrainingTrace*>& traces) {
  std::vector<double> out(traces.front()->cost.size(), 0.0);
  for (const auto* t : traces) {
    if (t->cost.size() != out.size())
      throw std::logic_error("trace length mismatch across runs");
    for (size_t i = 0; i < out.size(); ++i) out[i] += t->cost[i];
  }
  for (double& x : out) x /= static_cast<double>(traces.size());
  return out;
}

// mean of the sparse diamond series across runs (same recording grid)
json mean_diamond_series(const std::vector<const TrainingTrace*>& traces) {
  const auto& first = traces.front()->diamond;
  if (first.empty()) return json();
  std::vector<int> its;
  std::vector<double> vals(first.size(), 0.0);
  for (const auto& [it, v] : first) its.push_back(it);
  for (const auto* t : traces) {
    if (t->diamond.size() != first.size())
      throw std::logic_error("diamond series mismatch across runs");
    for (size_t i = 0; i < vals.size(); ++i) vals[i] += t->diamond[i].second;
  }
  for (double& v : vals) v /= static_cast<double>(traces.size());
  return json{{"iterations", its}, {"values", vals}};
}

int run_learn_random(const ExperimentSpec& spec, const json& raw,
                     const std::string& out_dir) {
  const int n_costs = static_cast<int>(spec.costs.size());
  const int n_chan = spec.channel_count;
  const int d_in = spec.arch.d_in();
  const int d_out = spec.arch.d_out();

  // channels are shared across costs so per-cost results are comparable
  std::vector<Channel> channels;
  std::vector<std::uint64_t> channel_seeds;
  for (int c = 0; c < n_chan; ++c) {
    channel_seeds.push_back(derive_seed(spec.seed, kRoleChannel, c));
    Rng rng(channel_seeds.back());
    channels.push_back(random_channel(d_in, d_out, rng));
  }

  const Network proto = make_network(spec.arch);
  std::vector<RunOutputs> runs(static_cast<size_t>(n_costs) * n_chan);
  std::mutex log_mutex;

  parallel_for(n_costs * n_chan, spec.workers, [&](int idx) {
    const int ci = idx / n_chan;
    const int ch = idx % n_chan;
    TrainConfig tc = spec.train;
    tc.cost = spec.costs[ci];
    tc.seed = derive_seed(spec.seed, kRoleTrain, ci, ch);

    RunOutputs r;
    r.csv_name = cost_tag(tc.cost) + "_chan" + std::to_string(ch) + ".csv";
    r.trace = train(proto, channels[ch], tc);
    if (!std::all_of(r.trace.cost.begin(), r.trace.cost.end(),
                     [](double v) { return std::isfinite(v); }))
      throw std::runtime_error("non-finite cost in run " + r.csv_name);

    DiamondConfig dc = spec.final_diamond;
    dc.seed = derive_seed(spec.seed, kRoleFinalDiamond, ci, ch);
    const Channel net_ch = Channel::from_choi(
        choi_state(r.trace.final_net), d_in, d_out);
    r.final_diamond = diamond_distance(net_ch, channels[ch], dc);
    runs[idx] = std::move(r);

    std::lock_guard<std::mutex> lock(log_mutex);
    std::cout << "[learn-random] cost=" << cost_tag(spec.costs[ci])
              << " channel=" << ch + 1 << "/" << n_chan
              << " final_diamond=" << runs[idx].final_diamond << "\n";
  });

  json summary;
  summary["kind"] = "learn-random";
  summary["iterations"] = spec.train.iterations;
  summary["channel_count"] = n_chan;
  json per_cost = json::object();
  for (int ci = 0; ci < n_costs; ++ci) {
    std::vector<const TrainingTrace*> traces;
    std::vector<double> finals;
    for (int ch = 0; ch < n_chan; ++ch) {
      traces.push_back(&runs[static_cast<size_t>(ci) * n_chan + ch].trace);
      finals.push_back(runs[static_cast<size_t>(ci) * n_chan + ch].final_diamond);
    }
    json entry;
    entry["mean_cost"] = mean_series(traces);
    entry["final_diamond"] =
        json{{"values", finals}, {"mean", mean(finals)}, {"median", median(finals)}};
    const json ds = mean_diamond_series(traces);
    if (!ds.is_null()) entry["mean_diamond_series"] = ds;
    per_cost[cost_tag(spec.costs[ci])] = std::move(entry);
  }
  summary["per_cost"] = std::move(per_cost);

  json manifest = base_manifest(spec, raw);
  json seed_rows = json::array();
  for (int ci = 0; ci < n_costs; ++ci)
    for (int ch = 0; ch < n_chan; ++ch)
      seed_rows.push_back(json{
          {"run", ci * n_chan + ch},
          {"cost", cost_tag(spec.costs[ci])},
          {"channel", ch},
          {"channel_seed", channel_seeds[ch]},
          {"train_seed", derive_seed(spec.seed, kRoleTrain, ci, ch)},
          {"final_diamond_seed", derive_seed(spec.seed, kRoleFinalDiamond, ci, ch)}});
  manifest["seeds"]["runs"] = std::move(seed_rows);

  emit(out_dir, summary, manifest, &runs);
  return 0;
}

int run_werner_sweep(const ExperimentSpec& spec, const json& raw,
                     const std::string& out_dir) {
  const int n = static_cast<int>(spec.alphas.size());
  const int d = spec.dimension;

  const Network proto = make_network(spec.arch);
  std::vector<RunOutputs> runs(n);
  std::mutex log_mutex;

  parallel_for(n, spec.workers, [&](int j) {
    const Channel target = werner_channel(spec.alphas[j], d);
    TrainConfig tc = spec.train;
    tc.seed = derive_seed(spec.seed, kRoleTrain, 0, j);

    RunOutputs r;
    r.csv_name = "alpha_" + std::to_string(j) + ".csv";
    r.trace = train(proto, target, tc);

    DiamondConfig dc = spec.final_diamond;
    dc.seed = derive_seed(spec.seed, kRoleFinalDiamond, 0, j);
    const Channel net_ch =
        Channel::from_choi(choi_state(r.trace.final_net), d, d);
    r.final_diamond = diamond_distance(net_ch, target, dc);
    runs[j] = std::move(r);

    std::lock_guard<std::mutex> lock(log_mutex);
    std::cout << "[werner-sweep] alpha=" << spec.alphas[j]
              << " final_diamond=" << runs[j].final_diamond << "\n";
  });

  json summary;
  summary["kind"] = "werner-sweep";
  summary["alphas"] = spec.alphas;
  {
    std::vector<const TrainingTrace*> traces;
    for (const auto& r : runs) traces.push_back(&r.trace);
    summary["mean_cost"] = mean_series(traces);
  }
  json jr = json::array();
  for (int j = 0; j < n; ++j) {
    json entry;
    entry["alpha"] = spec.alphas[j];
    entry["csv"] = runs[j].csv_name;
    entry["final_diamond"] = runs[j].final_diamond;
    if (!runs[j].trace.diamond.empty()) {
      std::vector<int> its;
      std::vector<double> vals;
      for (const auto& [it, v] : runs[j].trace.diamond) {
        its.push_back(it);
        vals.push_back(v);
      }
      entry["diamond_series"] = json{{"iterations", its}, {"values", vals}};
      entry["steepest_drop_iteration"] = its[steepest_drop_index(vals)];
    }
    jr.push_back(std::move(entry));
  }
  summary["runs"] = std::move(jr);

  json manifest = base_manifest(spec, raw);
  json seed_rows = json::array();
  for (int j = 0; j < n; ++j)
    seed_rows.push_back(
        json{{"run", j},
             {"alpha", spec.alphas[j]},
             {"train_seed", derive_seed(spec.seed, kRoleTrain, 0, j)},
             {"final_diamond_seed", derive_seed(spec.seed, kRoleFinalDiamond, 0, j)}});
  manifest["seeds"]["runs"] = std::move(seed_rows);

  emit(out_dir, summary, manifest, &runs);
  return 0;
}

int run_gradient_check(const ExperimentSpec& spec, const json& raw,
                       const std::string& out_dir) {
  const int d_in = spec.arch.d_in();
  const int d_out = spec.arch.d_out();
  const Network proto = make_network(spec.arch);
  const double eps = spec.train.fd_epsilon;

  struct CostResult {
    double max_rel_err = 0.0;
    bool pass = true;
  };
  std::vector<CostResult> results(spec.costs.size());

  for (size_t ci = 0; ci < spec.costs.size(); ++ci) {
    const CostKind kind = spec.costs[ci];
    if (!has_analytic_gradient(kind))
      throw std::runtime_error("gradient-check: cost '" + cost_tag(kind) +
                               "' has no analytic gradient to check");
    for (int t = 0; t < spec.trials; ++t) {
      Rng prng(derive_seed(spec.seed, kRoleGradParams, ci, t));
      Network net = proto;
      for (auto& p : net.params)
        for (auto [x, y] : active_entries(p.d_in, p.d_out))
          p.lambda(x, y) = prng.uniform(-0.5, 0.5);

      Rng crng(derive_seed(spec.seed, kRoleChannel, t));
      const Mat j_tar = random_channel(d_in, d_out, crng).choi();
      const Mat j_net = choi_state(net);
      const std::vector<Mat> dj = choi_gradients(net);

      GradRequest req;
      req.kind = kind;
      req.mode = GradMode::analytic;
      Eigen::VectorXd params = flatten(net);
      Network work = net;
      for (Eigen::Index k = 0; k < params.size(); ++k) {
        const double analytic =
            gradient_term(req, j_tar, j_net, dj[k]).value_or(0.0);
        const double save = params[k];
        params[k] = save + eps;
        unflatten(params, work);
        const double plus = evaluate(kind, j_tar, choi_state(work));
        params[k] = save - eps;
        unflatten(params, work);
        const double minus = evaluate(kind, j_tar, choi_state(work));
        params[k] = save;
        const double fd = (plus - minus) / (2.0 * eps);

        const double scale = std::max(std::abs(analytic), std::abs(fd));
        const double err = std::abs(analytic - fd);
        const double rel = err / std::max(scale, 1e-8);
        results[ci].max_rel_err = std::max(results[ci].max_rel_err, rel);
        if (err > std::max(1e-8, spec.tolerance * scale))
          results[ci].pass = false;
      }
    }
  }

  bool all_pass = true;
  json per_cost = json::object();
  for (size_t ci = 0; ci < spec.costs.size(); ++ci) {
    std::cout << "[gradient-check] " << cost_tag(spec.costs[ci])
              << ": max_rel_err=" << results[ci].max_rel_err << " "
              << (results[ci].pass ? "PASS" : "FAIL") << "\n";
    per_cost[cost_tag(spec.costs[ci])] = json{
        {"max_rel_err", results[ci].max_rel_err}, {"pass", results[ci].pass}};
    all_pass = all_pass && results[ci].pass;
  }

  json summary;
  summary["kind"] = "gradient-check";
  summary["trials"] = spec.trials;
  summary["tolerance"] = spec.tolerance;
  summary["fd_epsilon"] = eps;
  summary["per_cost"] = std::move(per_cost);
  summary["pass"] = all_pass;
  emit(out_dir, summary, base_manifest(spec, raw), nullptr);
  return all_pass ? 0 : 1;
}

int run_param_report(const ExperimentSpec& spec, const json& raw,
                     const std::string& out_dir) {
  print_param_report(spec.arch);
  json rows = json::array();
  int total = 0;
  for (const auto& ps : spec.arch.perceptrons) {
    const int n = active_param_count(ps.d_in, ps.d_out);
    total += n;
    rows.push_back(json{{"transition", ps.transition},
                        {"neuron", ps.neuron},
                        {"d_in", ps.d_in},
                        {"d_out", ps.d_out},
                        {"active_params", n}});
  }
  json summary;
  summary["kind"] = "param-report";
  summary["perceptrons"] = std::move(rows);
  summary["total_active_params"] = total;
  emit(out_dir, summary, base_manifest(spec, raw), nullptr);
  return 0;
}

}  // namespace

Architecture parse_architecture(const json& j) {
  require_keys(j, "network", {"style", "layers", "ancillas"});
  const std::string style_s = get_or<std::string>(j, "style", "extended");
  Style style;
  if (style_s == "extended")
    style = Style::extended;
  else if (style_s == "conventional")
    style = Style::conventional;
  else
    throw std::runtime_error(
        "spec: network.style must be 'extended' or 'conventional'");
  if (!j.contains("layers"))
    throw std::runtime_error("spec: network.layers is required");
  auto layers = parse_layer_list(j.at("layers"), "network.layers");
  std::vector<std::vector<int>> ancillas;
  if (j.contains("ancillas"))
    ancillas = parse_layer_list(j.at("ancillas"), "network.ancillas");
  return make_architecture(style, std::move(layers), std::move(ancillas));
}

ExperimentSpec parse_spec(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::runtime_error("spec: 'kind' is required");
  ExperimentSpec s;
  s.kind = j.at("kind").get<std::string>();

  std::vector<std::string> allowed = {"kind",    "network",      "train",
                                      "seed",    "workers",      "final_diamond"};
  if (s.kind == "learn-random") {
    allowed.insert(allowed.end(), {"costs", "channel_count"});
  } else if (s.kind == "werner-sweep") {
    allowed.insert(allowed.end(), {"alphas", "dimension"});
  } else if (s.kind == "gradient-check") {
    allowed.insert(allowed.end(), {"costs", "trials", "tolerance"});
  } else if (s.kind != "param-report") {
    throw std::runtime_error("spec: unknown kind '" + s.kind + "'");
  }
  require_keys(j, "top level", allowed);

  if (!j.contains("network"))
    throw std::runtime_error("spec: 'network' is required");
  s.arch = parse_architecture(j.at("network"));
  if (j.contains("train")) s.train = parse_train(j.at("train"));
  s.seed = get_or<std::uint64_t>(j, "seed", 0);
  s.train.seed = s.seed;  // per-run seeds are derived from the master
  s.workers = get_or(j, "workers", 1);
  if (s.workers < 1) throw std::runtime_error("spec: workers < 1");
  if (j.contains("final_diamond"))
    s.final_diamond =
        parse_diamond(j.at("final_diamond"), "final_diamond", s.final_diamond);

  if (j.contains("costs")) s.costs = parse_costs(j.at("costs"));

  if (s.kind == "learn-random") {
    if (!j.contains("channel_count"))
      throw std::runtime_error("spec: learn-random requires 'channel_count'");
    s.channel_count = j.at("channel_count").get<int>();
    if (s.channel_count < 1)
      throw std::runtime_error("spec: channel_count < 1");
    if (s.costs.empty()) s.costs = {s.train.cost};
  } else if (s.kind == "werner-sweep") {
    if (!j.contains("alphas"))
      throw std::runtime_error("spec: werner-sweep requires 'alphas'");
    s.alphas = j.at("alphas").get<std::vector<double>>();
    if (s.alphas.empty()) throw std::runtime_error("spec: empty alphas");
    s.dimension = get_or(j, "dimension", 2);
    if (s.arch.d_in() != s.dimension || s.arch.d_out() != s.dimension)
      throw std::runtime_error(
          "spec: werner-sweep dimension must match network input/output");
  } else if (s.kind == "gradient-check") {
    s.trials = get_or(j, "trials", 50);
    if (s.trials < 1) throw std::runtime_error("spec: trials < 1");
    s.tolerance = get_or(j, "tolerance", 1e-5);
    if (s.costs.empty())
      s.costs = {CostKind::hs, CostKind::trace, CostKind::f1,
                 CostKind::d1, CostKind::f2,    CostKind::d2};
  }
  return s;
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open spec file: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("spec parse error in " + path + ": " + e.what());
  }
  return j;
}

void apply_overrides(json& j, const SpecOverrides& ov) {
  if (ov.has_seed) j["seed"] = ov.seed;
  if (ov.has_workers) j["workers"] = ov.workers;
  if (ov.has_iterations) {
    if (!j.contains("train")) j["train"] = json::object();
    j["train"]["iterations"] = ov.iterations;
  }
}

int run_experiment(const ExperimentSpec& spec, const json& raw,
                   const std::string& out_dir) {
  if (spec.kind == "learn-random") return run_learn_random(spec, raw, out_dir);
  if (spec.kind == "werner-sweep") return run_werner_sweep(spec, raw, out_dir);
  if (spec.kind == "gradient-check")
    return run_gradient_check(spec, raw, out_dir);
  if (spec.kind == "param-report") return run_param_report(spec, raw, out_dir);
  throw std::logic_error("run_experiment: unknown kind");
}

void print_param_report(const Architecture& arch) {
  std::printf("%-10s %-8s %-8s %-8s %s\n", "transition", "neuron", "d_in",
              "d_out", "active_params");
  int total = 0;
  for (const auto& ps : arch.perceptrons) {
    const int n = active_param_count(ps.d_in, ps.d_out);
    total += n;
    std::printf("%-10d %-8d %-8d %-8d %d\n", ps.transition, ps.neuron, ps.d_in,
                ps.d_out, n);
  }
  std::printf("total: %d active parameters (%d perceptrons)\n", total,
              static_cast<int>(arch.perceptrons.size()));
}

}  // namespace dqnn
