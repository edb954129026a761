#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "gwrl/rl/adapter.hpp"
#include "gwrl/rl/policy.hpp"

namespace gwrl::rl {

enum class Algo { ppo, a2c };

const char* to_string(Algo a);
Algo algo_from_string(const std::string& s);

struct TrainConfig {
  Algo algo = Algo::ppo;
  std::int64_t max_env_steps = 400'000;
  std::int64_t min_env_steps = 100'000;
  int n_envs = 8;
  int horizon = 2048;        // env steps per PPO update, across all envs
  int epochs = 10;
  int minibatch = 256;
  double lr = 3e-4;
  double gamma = 0.99;
  double lam = 0.95;
  double clip = 0.2;
  double ent_coef = 0.01;
  bool ent_decay = true;
  double vf_coef = 0.5;
  double grad_clip = 0.5;
  bool normalize_returns = true;
  // Critic-target floor (e.g. the factory collision penalty is clipped to
  // -100 for value learning); reported returns stay raw.
  double critic_reward_floor = -std::numeric_limits<double>::infinity();
  int a2c_nstep = 5;
  std::vector<int> policy_hidden = {64, 64};
  std::uint64_t seed = 0;
  // Early stopping on the rolling mean of raw episode returns.
  double target_return = std::numeric_limits<double>::quiet_NaN();
  int window_episodes = 100;
  int plateau_patience_updates = 0;  // 0 disables
  double plateau_eps = 3.0;
};

struct TrainResult {
  ActorCritic policy{nullptr};
  std::vector<std::pair<std::int64_t, double>> curve;  // (env steps, rolling mean return)
  std::int64_t env_steps = 0;
  std::int64_t episodes = 0;
  double final_window_mean = 0.0;
  bool reached_target = false;
};

// Learns a policy over the frozen adapter's representation. The adapter is
// read-only throughout; `TrainResult::policy` is the only thing trained.
template <class EnvT>
TrainResult train_policy(const AdapterPtr& adapter, const TrainConfig& cfg);

struct EvalResult {
  double mean_return = 0.0;
  std::vector<double> returns;  // per episode, index-aligned with the seed set
};

// Runs `episodes` evaluation episodes with a fixed seed schedule (episode k
// always plays the same initial state, whatever policy/adapter is plugged
// in). The adapter must match the policy's input width; a mismatch throws,
// which is what stops evaluations across representation families.
template <class EnvT>
EvalResult evaluate_policy(ActorCritic& policy, const AdapterPtr& adapter, int episodes,
                           std::uint64_t seed, bool greedy = true);

}  // namespace gwrl::rl
