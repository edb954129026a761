#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gwrl::rl {

// Generalized advantage estimation over one env stream. `trunc_next_values`
// holds V(s_{t+1}) of the pre-reset observation for truncated steps (ignored
// elsewhere); terminated steps bootstrap with zero; the final step bootstraps
// with `bootstrap_value` unless it ended the episode.
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> terminated, std::span<const std::uint8_t> truncated,
                 std::span<const double> trunc_next_values, double bootstrap_value, double gamma,
                 double lam, std::span<double> out_advantages, std::span<double> out_returns);

// Running standard deviation of discounted return accumulators, for reward
// scaling inside the agent. Reported episode returns never use this.
class ReturnNormalizer {
public:
  ReturnNormalizer(int n_envs, double gamma) : gamma_(gamma), acc_(n_envs, 0.0) {}

  double scale(int env_index, double reward, bool episode_done) {
    auto& acc = acc_[static_cast<std::size_t>(env_index)];
    acc = gamma_ * acc + reward;
    push(acc);
    if (episode_done) acc = 0.0;
    return reward / std();
  }

  double std() const {
    if (count_ < 2) return 1.0;
    const double var = m2_ / static_cast<double>(count_ - 1);
    return var > 1e-8 ? std::sqrt(var) : 1e-4;
  }

private:
  void push(double x) {
    ++count_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (x - mean_);
  }

  double gamma_;
  std::vector<double> acc_;
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace gwrl::rl
