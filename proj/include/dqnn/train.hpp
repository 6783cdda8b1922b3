#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dqnn/channels.hpp"
#include "dqnn/cost.hpp"
#include "dqnn/metrics.hpp"
#include "dqnn/network.hpp"
#include "dqnn/rng.hpp"

namespace dqnn {

struct AdamState {
  Eigen::VectorXd m;  // first moment
  Eigen::VectorXd v;  // second moment
  int t = 0;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  AdamState(Eigen::Index n, double learning_rate)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)), lr(learning_rate) {}
};

// bias-corrected descent step, in place; throws on non-finite gradient entries
void adam_step(AdamState& state, const Eigen::VectorXd& grad,
               Eigen::VectorXd& params);

enum class TrainMode { choi, random_state };

struct TrainConfig {
  TrainMode mode = TrainMode::choi;
  CostKind cost = CostKind::hs;
  int iterations = 1000;
  double lr = 0.01;
  double init_scale = 0.01;
  std::uint64_t seed = 0;
  double fd_epsilon = 1e-6;  // parameter-space step for costs without analytic gradients

  // random-state mode only
  int batches = 8;
  int batch_size = 4;
  int resample_size = 32;
  int plateau_window = 20;
  double plateau_rel_tol = 1e-4;
  int plateau_cooldown = 200;  // iterations the detector stays quiet after firing

  // sparse diamond-distance series; 0 disables recording
  int diamond_every = 0;
  DiamondConfig diamond;  // settings for the periodic estimates (seed derived per estimate)
};

struct ResampleEvent {
  int iteration = 0;
};

struct TrainingTrace {
  std::vector<double> cost;                        // one entry per iteration
  std::vector<std::pair<int, double>> diamond;     // (iteration, estimate)
  std::vector<ResampleEvent> resamples;
  Network final_net;
};

// every active λ uniform in [−scale, scale]
void init_params(Network& net, double scale, Rng& rng);

TrainingTrace choi_train(const Network& net, const Channel& target,
                         const TrainConfig& cfg);

TrainingTrace random_state_train(const Network& net, const Channel& target,
                                 const TrainConfig& cfg);

TrainingTrace train(const Network& net, const Channel& target,
                    const TrainConfig& cfg);

}  // namespace dqnn
