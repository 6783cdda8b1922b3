#include "dqnn/train.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dqnn {

void adam_step(AdamState& state, const Eigen::VectorXd& grad,
               Eigen::VectorXd& params) {
  if (grad.size() != params.size() || grad.size() != state.m.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  if (!grad.allFinite())
    throw std::runtime_error("adam_step: non-finite gradient entry");
  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v +
            (1.0 - state.beta2) * grad.cwiseProduct(grad).eval();
  const double mc = 1.0 - std::pow(state.beta1, state.t);
  const double vc = 1.0 - std::pow(state.beta2, state.t);
  const Eigen::VectorXd mh = state.m / mc;
  const Eigen::VectorXd vh = state.v / vc;
  params -= state.lr * (mh.array() / (vh.array().sqrt() + state.eps)).matrix();
}

void init_params(Network& net, double scale, Rng& rng) {
  if (scale < 0.0) throw std::invalid_argument("init_params: negative scale");
  for (auto& p : net.params) {
    p.lambda.setZero();
    for (auto [x, y] : active_entries(p.d_in, p.d_out))
      p.lambda(x, y) = rng.uniform(-scale, scale);
  }
}

namespace {

void check_dims(const Network& net, const Channel& target) {
  if (net.arch.d_in() != target.d_in() || net.arch.d_out() != target.d_out())
    throw std::invalid_argument("train: network/target dimension mismatch");
}

EvalOptions train_opts() {
  EvalOptions o;
  o.qre_regularize = true;  // keep the cost finite near the spectrum boundary
  return o;
}

double optimum_value(CostKind kind) {
  return cost_direction(kind) == Direction::maximize ? 1.0 : 0.0;
}

// central differences of f over each active parameter
Eigen::VectorXd fd_gradient(const Network& net, double eps,
                            const std::function<double(const Network&)>& f) {
  Eigen::VectorXd p = flatten(net);
  Eigen::VectorXd g(p.size());
  Network work = net;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double save = p[k];
    p[k] = save + eps;
    unflatten(p, work);
    const double plus = f(work);
    p[k] = save - eps;
    unflatten(p, work);
    const double minus = f(work);
    p[k] = save;
    g[k] = (plus - minus) / (2.0 * eps);
  }
  return g;
}

void maybe_record_diamond(TrainingTrace& trace, const Network& net,
                          const Channel& target, const TrainConfig& cfg,
                          int it) {
  if (cfg.diamond_every <= 0 || it % cfg.diamond_every != 0) return;
  DiamondConfig dc = cfg.diamond;
  dc.seed = derive_seed(cfg.seed, 3, static_cast<std::uint64_t>(it));
  const Channel net_ch = Channel::from_choi(choi_state(net), net.arch.d_in(),
                                            net.arch.d_out());
  trace.diamond.emplace_back(it, diamond_distance(net_ch, target, dc));
}

}  // namespace

TrainingTrace choi_train(const Network& start, const Channel& target,
                         const TrainConfig& cfg) {
  check_dims(start, target);
  if (cfg.iterations < 1) throw std::invalid_argument("train: iterations < 1");

  Network net = start;
  Rng init_rng(derive_seed(cfg.seed, 1));
  init_params(net, cfg.init_scale, init_rng);

  const Mat j_tar = target.choi();
  const EvalOptions opts = train_opts();
  const bool analytic = has_analytic_gradient(cfg.cost);
  const bool maximize = cost_direction(cfg.cost) == Direction::maximize;

  Eigen::VectorXd params = flatten(net);
  AdamState adam(params.size(), cfg.lr);
  TrainingTrace trace;
  trace.cost.reserve(cfg.iterations);

  for (int it = 0; it < cfg.iterations; ++it) {
    maybe_record_diamond(trace, net, target, cfg, it);
    const Mat j = choi_state(net);

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
    if (trace_distance(j_tar, j) < 1e-12) {
      trace.cost.push_back(optimum_value(cfg.cost));  // exact match: stay put
    } else {
      trace.cost.push_back(evaluate(cfg.cost, j_tar, j, opts));
      if (analytic) {
        const std::vector<Mat> dj = choi_gradients(net);
        GradRequest req;
        req.kind = cfg.cost;
        req.mode = GradMode::analytic;
        req.opts = opts;
        for (Eigen::Index k = 0; k < grad.size(); ++k)
          grad[k] = gradient_term(req, j_tar, j, dj[k]).value_or(0.0);
      } else {
        grad = fd_gradient(net, cfg.fd_epsilon, [&](const Network& n) {
          return evaluate(cfg.cost, j_tar, choi_state(n), opts);
        });
      }
    }

    if (maximize) grad = -grad;
    adam_step(adam, grad, params);
    unflatten(params, net);
  }

  trace.final_net = net;
  return trace;
}

TrainingTrace random_state_train(const Network& start, const Channel& target,
                                 const TrainConfig& cfg) {
  check_dims(start, target);
  if (cfg.iterations < 1) throw std::invalid_argument("train: iterations < 1");
  if (cfg.batches < 1 || cfg.batch_size < 1)
    throw std::invalid_argument("train: batch config invalid");

  Network net = start;
  Rng init_rng(derive_seed(cfg.seed, 1));
  init_params(net, cfg.init_scale, init_rng);

  Rng state_rng(derive_seed(cfg.seed, 2));
  std::vector<std::vector<Mat>> batches(cfg.batches);
  for (auto& b : batches)
    for (int k = 0; k < cfg.batch_size; ++k)
      b.push_back(random_density_hs(net.arch.d_in(), state_rng));

  const EvalOptions opts = train_opts();
  const bool analytic = has_analytic_gradient(cfg.cost);
  const bool maximize = cost_direction(cfg.cost) == Direction::maximize;

  Eigen::VectorXd params = flatten(net);
  AdamState adam(params.size(), cfg.lr);
  TrainingTrace trace;
  trace.cost.reserve(cfg.iterations);
  int cooldown = 0;

  for (int it = 0; it < cfg.iterations; ++it) {
    maybe_record_diamond(trace, net, target, cfg, it);
    const auto& batch = batches[it % cfg.batches];

    double total = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
    if (analytic) {
      GradRequest req;
      req.kind = cfg.cost;
      req.mode = GradMode::analytic;
      req.opts = opts;
      for (const Mat& rho : batch) {
        const Mat tar = target.apply(rho);
        const Mat out = dqnn::apply(net, rho);
        total += evaluate(cfg.cost, tar, out, opts);
        const std::vector<Mat> drho = output_gradients(net, rho);
        for (Eigen::Index k = 0; k < grad.size(); ++k)
          grad[k] += gradient_term(req, tar, out, drho[k]).value_or(0.0);
      }
      grad /= static_cast<double>(cfg.batch_size);
    } else {
      for (const Mat& rho : batch)
        total += evaluate(cfg.cost, target.apply(rho), dqnn::apply(net, rho), opts);
      grad = fd_gradient(net, cfg.fd_epsilon, [&](const Network& n) {
        double acc = 0.0;
        for (const Mat& rho : batch)
          acc += evaluate(cfg.cost, target.apply(rho), dqnn::apply(n, rho), opts);
        return acc / static_cast<double>(cfg.batch_size);
      });
    }
    trace.cost.push_back(total / static_cast<double>(cfg.batch_size));

    if (cooldown > 0) --cooldown;
    if (static_cast<int>(trace.cost.size()) > cfg.plateau_window &&
        cooldown == 0) {
      const double prev =
          trace.cost[trace.cost.size() - 1 - cfg.plateau_window];
      const double cur = trace.cost.back();
      if (std::abs(prev) > 1e-15) {
        const double gain = maximize ? cur - prev : prev - cur;
        if (gain / std::abs(prev) < cfg.plateau_rel_tol) {
          for (int j = 0; j < cfg.resample_size; ++j)
            batches[j % cfg.batches][(j / cfg.batches) % cfg.batch_size] =
                random_density_hs(net.arch.d_in(), state_rng);
          trace.resamples.push_back({it});
          cooldown = cfg.plateau_cooldown;
        }
      }
    }

    if (maximize) grad = -grad;
    adam_step(adam, grad, params);
    unflatten(params, net);
  }

  trace.final_net = net;
  return trace;
}

TrainingTrace train(const Network& net, const Channel& target,
                    const TrainConfig& cfg) {
  return cfg.mode == TrainMode::choi ? choi_train(net, target, cfg)
                                     : random_state_train(net, target, cfg);
}

}  // namespace dqnn
