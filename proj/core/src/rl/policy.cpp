#include "gwrl/rl/policy.hpp"

#include <cmath>

namespace gwrl::rl {

namespace {
constexpr double kLogTwoPi = 1.8378770664093453;
}

ActorCriticImpl::ActorCriticImpl(const PolicySpec& s) : spec(s) {
  std::vector<int> hidden(spec.hidden.begin(), spec.hidden.end() - 1);
  trunk = register_module(
      "trunk", models::Mlp(spec.obs_dim, hidden, spec.hidden.back(), models::Act::tanh));
  pi_head = register_module("pi_head", torch::nn::Linear(spec.hidden.back(), spec.action_dim));
  v_head = register_module("v_head", torch::nn::Linear(spec.hidden.back(), 1));
  if (!spec.discrete) {
    log_std = register_parameter("log_std", torch::full({spec.action_dim}, -0.5));
  }
  // Small policy head keeps the initial distribution near-uniform.
  torch::NoGradGuard guard;
  pi_head->weight.mul_(0.01);
  pi_head->bias.zero_();
}

torch::Tensor ActorCriticImpl::features(torch::Tensor obs) {
  if (obs.dim() != 2 || obs.size(1) != spec.obs_dim) {
    throw std::invalid_argument("ActorCritic: representation dimension mismatch (expected " +
                                std::to_string(spec.obs_dim) + ", got " +
                                std::to_string(obs.dim() == 2 ? obs.size(1) : -1) + ")");
  }
  return torch::tanh(trunk->forward(obs));
}

ActorCriticImpl::ActOut ActorCriticImpl::act(torch::Tensor obs, bool greedy) {
  torch::NoGradGuard guard;
  auto h = features(obs);
  auto v = v_head->forward(h).squeeze(1);
  ActOut out;
  out.value = v;
  if (spec.discrete) {
    auto logits = pi_head->forward(h);
    auto logp = torch::log_softmax(logits, 1);
    out.action = greedy ? logits.argmax(1) : torch::multinomial(logp.exp(), 1).squeeze(1);
    out.raw = out.action;
    out.log_prob = logp.gather(1, out.action.unsqueeze(1)).squeeze(1);
  } else {
    auto mean = pi_head->forward(h);
    auto std = log_std.exp().expand_as(mean);
    auto raw = greedy ? mean : mean + std * torch::randn_like(mean);
    auto z = (raw - mean) / std;
    auto gauss_logp = (-0.5 * z.pow(2) - log_std.expand_as(mean) - 0.5 * kLogTwoPi).sum(1);
    auto squashed = torch::tanh(raw);
    out.action = squashed;
    out.raw = raw;
    out.log_prob = gauss_logp - torch::log1p(-squashed.pow(2) + 1e-6).sum(1);
  }
  return out;
}

ActorCriticImpl::EvalOut ActorCriticImpl::evaluate_actions(torch::Tensor obs,
                                                           torch::Tensor stored) {
  auto h = features(obs);
  EvalOut out;
  out.value = v_head->forward(h).squeeze(1);
  if (spec.discrete) {
    auto logp = torch::log_softmax(pi_head->forward(h), 1);
    out.log_prob = logp.gather(1, stored.unsqueeze(1)).squeeze(1);
    out.entropy = -(logp.exp() * logp).sum(1);
  } else {
    auto mean = pi_head->forward(h);
    auto std = log_std.exp().expand_as(mean);
    auto z = (stored - mean) / std;
    auto gauss_logp = (-0.5 * z.pow(2) - log_std.expand_as(mean) - 0.5 * kLogTwoPi).sum(1);
    out.log_prob = gauss_logp - torch::log1p(-torch::tanh(stored).pow(2) + 1e-6).sum(1);
    // Entropy of the unsquashed Gaussian; the squash correction has no
    // closed form and a constant offset does not affect the gradient
    // direction of the bonus.
    out.entropy = (log_std + 0.5 * (kLogTwoPi + 1.0)).sum().expand({obs.size(0)});
  }
  return out;
}

torch::Tensor ActorCriticImpl::value(torch::Tensor obs) {
  torch::NoGradGuard guard;
  return v_head->forward(features(obs)).squeeze(1);
}

}  // namespace gwrl::rl
