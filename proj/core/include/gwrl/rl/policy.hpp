#pragma once

#include <vector>

#include <torch/torch.h>

#include "gwrl/models/mlp.hpp"

namespace gwrl::rl {

struct PolicySpec {
  int obs_dim = 0;
  std::vector<int> hidden = {64, 64};
  bool discrete = true;
  int action_dim = 6;  // categories (discrete) or components (continuous)

  bool operator==(const PolicySpec&) const = default;
};

// Shared tanh trunk with separate policy and value heads. Continuous actions
// are tanh-squashed diagonal Gaussians; the pre-squash sample is kept so the
// log-density (with the tanh change-of-variables term) can be re-evaluated
// under updated parameters.
struct ActorCriticImpl : torch::nn::Module {
  explicit ActorCriticImpl(const PolicySpec& spec);

  torch::Tensor features(torch::Tensor obs);

  struct ActOut {
    torch::Tensor action;  // env action: long [B] or float [B, dim] in (-1,1)
    torch::Tensor raw;     // pre-squash sample (continuous only)
    torch::Tensor log_prob;
    torch::Tensor value;
  };
  ActOut act(torch::Tensor obs, bool greedy = false);

  struct EvalOut {
    torch::Tensor log_prob;
    torch::Tensor entropy;
    torch::Tensor value;
  };
  // `stored` is the long action tensor (discrete) or the raw pre-squash
  // sample (continuous) captured at collection time.
  EvalOut evaluate_actions(torch::Tensor obs, torch::Tensor stored);

  torch::Tensor value(torch::Tensor obs);

  PolicySpec spec;
  models::Mlp trunk{nullptr};
  torch::nn::Linear pi_head{nullptr};
  torch::nn::Linear v_head{nullptr};
  torch::Tensor log_std;  // continuous only
};
TORCH_MODULE(ActorCritic);

}  // namespace gwrl::rl
