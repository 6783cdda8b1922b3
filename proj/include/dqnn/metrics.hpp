#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dqnn/channels.hpp"
#include "dqnn/linalg.hpp"

namespace dqnn {

struct DiamondConfig {
  int samples = 2000;
  int refine_steps = 200;
  double perturb_scale = 0.1;
  double decay = 0.98;
  std::uint64_t seed = 0;
};

// Monte-Carlo lower bound on ‖E₁ − E₂‖_⋄: max over Haar-random pure states
// |ψ⟩ on H_in ⊗ H_in of ‖(id ⊗ ΔE)(|ψ⟩⟨ψ|)‖₁, followed by stochastic
// hill-climbing from the best sample.  Symmetric in its arguments and
// monotone in `samples` under a fixed seed.
double diamond_distance(const Channel& e1, const Channel& e2,
                        const DiamondConfig& cfg);

// trace distance of the two Choi states
double choi_trace_distance(const Channel& e1, const Channel& e2);

// index of the largest drop between consecutive entries of a recorded series
// (returns the position of the later entry; 0 if fewer than two entries)
std::size_t steepest_drop_index(const std::vector<double>& series);

}  // namespace dqnn
