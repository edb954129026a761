#include "gwrl/rl/train.hpp"

#include <cmath>
#include <deque>

#include "gwrl/env/factory.hpp"
#include "gwrl/env/simple_shapes.hpp"
#include "gwrl/rl/gae.hpp"
#include "gwrl/util/rng.hpp"

namespace gwrl::rl {

const char* to_string(Algo a) { return a == Algo::ppo ? "ppo" : "a2c"; }

Algo algo_from_string(const std::string& s) {
  if (s == "ppo") return Algo::ppo;
  if (s == "a2c") return Algo::a2c;
  throw data::ConfigError("unknown algorithm: '" + s + "'");
}

namespace {

template <class EnvT>
typename EnvT::ActionT action_from_row(const torch::Tensor& actions, std::int64_t row);

template <>
env::ss::Action action_from_row<env::ss::SimpleShapesEnv>(const torch::Tensor& actions,
                                                          std::int64_t row) {
  return static_cast<env::ss::Action>(actions[row].item<std::int64_t>());
}

template <>
env::fac::Action action_from_row<env::fac::FactoryEnv>(const torch::Tensor& actions,
                                                       std::int64_t row) {
  return {actions[row][0].item<double>(), actions[row][1].item<double>()};
}

template <class EnvT>
PolicySpec make_spec(const AdapterPtr& adapter, const std::vector<int>& hidden) {
  PolicySpec spec;
  spec.obs_dim = adapter->dim();
  spec.hidden = hidden;
  spec.discrete = EnvT::kDiscrete;
  if constexpr (EnvT::kDiscrete) {
    spec.action_dim = EnvT::kActionCount;
  } else {
    spec.action_dim = EnvT::kActionDim;
  }
  return spec;
}

// Fixed-size roll of completed-episode returns.
class EpisodeWindow {
public:
  explicit EpisodeWindow(int capacity) : capacity_(capacity) {}
  void push(double v) {
    values_.push_back(v);
    if (values_.size() > static_cast<std::size_t>(capacity_)) values_.pop_front();
    ++total_;
  }
  double rolling_mean() const {
    if (values_.empty()) return -std::numeric_limits<double>::infinity();
    double s = 0;
    for (const double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }
  bool full() const { return values_.size() == static_cast<std::size_t>(capacity_); }
  std::int64_t total() const { return total_; }

private:
  int capacity_;
  std::deque<double> values_;
  std::int64_t total_ = 0;
};

}  // namespace

template <class EnvT>
TrainResult train_policy(const AdapterPtr& adapter, const TrainConfig& cfg) {
  torch::manual_seed(cfg.seed);

  const PolicySpec spec = make_spec<EnvT>(adapter, cfg.policy_hidden);
  ActorCritic policy(spec);
  torch::optim::Adam opt(policy->parameters(), torch::optim::AdamOptions(cfg.lr));

  const int n_envs = cfg.n_envs;
  const int steps_per_env =
      cfg.algo == Algo::ppo ? std::max(1, cfg.horizon / n_envs) : cfg.a2c_nstep;
  const int batch = steps_per_env * n_envs;

  std::vector<EnvT> envs(static_cast<std::size_t>(n_envs));
  std::vector<env::Observation> obs(static_cast<std::size_t>(n_envs));
  std::vector<double> episode_returns(static_cast<std::size_t>(n_envs), 0.0);
  std::uint64_t episode_counter = 0;
  const std::uint64_t env_seed_root = util::mix64(cfg.seed ^ 0x656e7673ULL);
  for (int i = 0; i < n_envs; ++i) {
    envs[static_cast<std::size_t>(i)].set_render_enabled(adapter->needs_images());
    obs[static_cast<std::size_t>(i)] =
        envs[static_cast<std::size_t>(i)].reset(util::substream(env_seed_root, episode_counter++));
  }

  ReturnNormalizer normalizer(n_envs, cfg.gamma);
  EpisodeWindow window(cfg.window_episodes);

  // Collection buffers, one slot per (step, env).
  auto feats = torch::empty({steps_per_env, n_envs, spec.obs_dim}, torch::kFloat32);
  auto stored = spec.discrete
                    ? torch::empty({steps_per_env, n_envs}, torch::kLong)
                    : torch::empty({steps_per_env, n_envs, spec.action_dim}, torch::kFloat32);
  auto old_logp = torch::empty({steps_per_env, n_envs}, torch::kFloat32);
  auto values_buf = torch::empty({steps_per_env, n_envs}, torch::kFloat32);
  std::vector<std::vector<double>> rewards(static_cast<std::size_t>(n_envs),
                                           std::vector<double>(steps_per_env));
  std::vector<std::vector<std::uint8_t>> term_flags(
      static_cast<std::size_t>(n_envs), std::vector<std::uint8_t>(steps_per_env));
  std::vector<std::vector<std::uint8_t>> trunc_flags(
      static_cast<std::size_t>(n_envs), std::vector<std::uint8_t>(steps_per_env));
  std::vector<std::vector<double>> trunc_next(static_cast<std::size_t>(n_envs),
                                              std::vector<double>(steps_per_env, 0.0));

  TrainResult result;
  result.policy = policy;

  double best_rolling = -std::numeric_limits<double>::infinity();
  int updates_since_best = 0;
  std::int64_t env_steps = 0;

  while (env_steps < cfg.max_env_steps) {
    policy->eval();
    for (int t = 0; t < steps_per_env; ++t) {
      auto obs_feat = adapter->encode(obs);
      auto action_out = policy->act(obs_feat, /*greedy=*/false);
      feats[t] = obs_feat;
      stored[t] = action_out.raw;
      old_logp[t] = action_out.log_prob.to(torch::kFloat32);
      values_buf[t] = action_out.value.to(torch::kFloat32);

      std::vector<std::pair<int, env::Observation>> truncated_finals;
      for (int i = 0; i < n_envs; ++i) {
        auto r = envs[static_cast<std::size_t>(i)].step(
            action_from_row<EnvT>(action_out.action, i));
        episode_returns[static_cast<std::size_t>(i)] += r.reward;

        double train_reward = std::max(r.reward, cfg.critic_reward_floor);
        const bool done = r.terminated || r.truncated;
        if (cfg.normalize_returns) {
          train_reward = normalizer.scale(i, train_reward, done);
        }
        rewards[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = train_reward;
        term_flags[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = r.terminated;
        trunc_flags[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = r.truncated;

        if (done) {
          window.push(episode_returns[static_cast<std::size_t>(i)]);
          episode_returns[static_cast<std::size_t>(i)] = 0.0;
          if (r.truncated) {
            truncated_finals.emplace_back(i, std::move(r.obs));
          }
          obs[static_cast<std::size_t>(i)] = envs[static_cast<std::size_t>(i)].reset(
              util::substream(env_seed_root, episode_counter++));
        } else {
          obs[static_cast<std::size_t>(i)] = std::move(r.obs);
        }
      }
      if (!truncated_finals.empty()) {
        std::vector<env::Observation> finals;
        finals.reserve(truncated_finals.size());
        for (auto& [i, o] : truncated_finals) finals.push_back(std::move(o));
        auto v = policy->value(adapter->encode(finals));
        for (std::size_t k = 0; k < truncated_finals.size(); ++k) {
          trunc_next[static_cast<std::size_t>(truncated_finals[k].first)]
                    [static_cast<std::size_t>(t)] = v[static_cast<std::int64_t>(k)].item<double>();
        }
      }
      env_steps += n_envs;
    }

    auto bootstrap = policy->value(adapter->encode(obs));

    // GAE per env stream, then flatten to [T * N].
    auto advantages = torch::empty({steps_per_env, n_envs}, torch::kFloat32);
    auto returns = torch::empty({steps_per_env, n_envs}, torch::kFloat32);
    {
      std::vector<double> vals(steps_per_env), adv(steps_per_env), ret(steps_per_env);
      auto values_acc = values_buf.accessor<float, 2>();
      for (int i = 0; i < n_envs; ++i) {
        for (int t = 0; t < steps_per_env; ++t) vals[static_cast<std::size_t>(t)] = values_acc[t][i];
        compute_gae(rewards[static_cast<std::size_t>(i)], vals,
                    term_flags[static_cast<std::size_t>(i)],
                    trunc_flags[static_cast<std::size_t>(i)],
                    trunc_next[static_cast<std::size_t>(i)], bootstrap[i].item<double>(),
                    cfg.gamma, cfg.lam, adv, ret);
        for (int t = 0; t < steps_per_env; ++t) {
          advantages[t][i] = static_cast<float>(adv[static_cast<std::size_t>(t)]);
          returns[t][i] = static_cast<float>(ret[static_cast<std::size_t>(t)]);
        }
      }
    }

    auto flat_feats = feats.view({batch, spec.obs_dim});
    auto flat_stored = spec.discrete ? stored.view({batch}) : stored.view({batch, spec.action_dim});
    auto flat_old_logp = old_logp.view({batch});
    auto flat_adv = advantages.view({batch});
    auto flat_ret = returns.view({batch});
    if (cfg.algo == Algo::ppo) {
      flat_adv = (flat_adv - flat_adv.mean()) / (flat_adv.std() + 1e-8);
    }

    const double progress = static_cast<double>(env_steps) / static_cast<double>(cfg.max_env_steps);
    const double ent_coef = cfg.ent_decay ? cfg.ent_coef * std::max(0.0, 1.0 - progress)
                                          : cfg.ent_coef;

    policy->train();
    if (cfg.algo == Algo::ppo) {
      for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto perm = torch::randperm(batch, torch::kLong);
        for (int start = 0; start < batch; start += cfg.minibatch) {
          const auto count = std::min<std::int64_t>(cfg.minibatch, batch - start);
          auto mb = perm.narrow(0, start, count);
          auto eval = policy->evaluate_actions(flat_feats.index_select(0, mb),
                                               flat_stored.index_select(0, mb));
          auto adv_mb = flat_adv.index_select(0, mb);
          auto ratio = (eval.log_prob - flat_old_logp.index_select(0, mb)).exp();
          auto unclipped = ratio * adv_mb;
          auto clipped = ratio.clamp(1.0 - cfg.clip, 1.0 + cfg.clip) * adv_mb;
          auto policy_loss = -torch::min(unclipped, clipped).mean();
          auto value_loss = torch::mse_loss(eval.value, flat_ret.index_select(0, mb));
          auto loss = policy_loss + cfg.vf_coef * value_loss - ent_coef * eval.entropy.mean();
          opt.zero_grad();
          loss.backward();
          torch::nn::utils::clip_grad_norm_(policy->parameters(), cfg.grad_clip);
          opt.step();
        }
      }
    } else {
      auto eval = policy->evaluate_actions(flat_feats, flat_stored);
      auto policy_loss = -(eval.log_prob * flat_adv).mean();
      auto value_loss = torch::mse_loss(eval.value, flat_ret);
      auto loss = policy_loss + cfg.vf_coef * value_loss - ent_coef * eval.entropy.mean();
      opt.zero_grad();
      loss.backward();
      torch::nn::utils::clip_grad_norm_(policy->parameters(), cfg.grad_clip);
      opt.step();
    }

    const double rolling = window.rolling_mean();
    result.curve.emplace_back(env_steps, rolling);

    if (env_steps >= cfg.min_env_steps && window.full()) {
      if (std::isfinite(cfg.target_return) && rolling >= cfg.target_return) {
        result.reached_target = true;
        break;
      }
      if (cfg.plateau_patience_updates > 0) {
        if (rolling > best_rolling + cfg.plateau_eps) {
          best_rolling = rolling;
          updates_since_best = 0;
        } else if (++updates_since_best >= cfg.plateau_patience_updates) {
          break;
        }
      }
    }
  }

  policy->eval();
  result.env_steps = env_steps;
  result.episodes = window.total();
  result.final_window_mean = window.rolling_mean();
  return result;
}

template <class EnvT>
EvalResult evaluate_policy(ActorCritic& policy, const AdapterPtr& adapter, int episodes,
                           std::uint64_t seed, bool greedy) {
  if (adapter->dim() != policy->spec.obs_dim) {
    throw std::invalid_argument(
        "evaluate_policy: adapter width " + std::to_string(adapter->dim()) +
        " does not match the policy input width " + std::to_string(policy->spec.obs_dim));
  }
  torch::manual_seed(util::mix64(seed ^ 0x6576616cULL));
  policy->eval();

  const int n_envs = std::min(8, episodes);
  std::vector<EnvT> envs(static_cast<std::size_t>(n_envs));
  std::vector<env::Observation> obs(static_cast<std::size_t>(n_envs));
  std::vector<int> episode_of(static_cast<std::size_t>(n_envs));
  std::vector<double> acc(static_cast<std::size_t>(n_envs), 0.0);
  std::vector<bool> active(static_cast<std::size_t>(n_envs), true);

  EvalResult result;
  result.returns.assign(static_cast<std::size_t>(episodes), 0.0);
  int next_episode = 0;
  int finished = 0;

  for (int i = 0; i < n_envs; ++i) {
    envs[static_cast<std::size_t>(i)].set_render_enabled(adapter->needs_images());
    episode_of[static_cast<std::size_t>(i)] = next_episode;
    obs[static_cast<std::size_t>(i)] = envs[static_cast<std::size_t>(i)].reset(
        util::substream(seed, static_cast<std::uint64_t>(next_episode++)));
  }

  while (finished < episodes) {
    auto actions = policy->act(adapter->encode(obs), greedy).action;
    for (int i = 0; i < n_envs; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      auto r = envs[static_cast<std::size_t>(i)].step(action_from_row<EnvT>(actions, i));
      acc[static_cast<std::size_t>(i)] += r.reward;
      if (r.terminated || r.truncated) {
        result.returns[static_cast<std::size_t>(episode_of[static_cast<std::size_t>(i)])] =
            acc[static_cast<std::size_t>(i)];
        acc[static_cast<std::size_t>(i)] = 0.0;
        ++finished;
        if (next_episode < episodes) {
          episode_of[static_cast<std::size_t>(i)] = next_episode;
          obs[static_cast<std::size_t>(i)] = envs[static_cast<std::size_t>(i)].reset(
              util::substream(seed, static_cast<std::uint64_t>(next_episode++)));
        } else {
          active[static_cast<std::size_t>(i)] = false;
        }
      } else {
        obs[static_cast<std::size_t>(i)] = std::move(r.obs);
      }
    }
  }

  double sum = 0;
  for (const double v : result.returns) sum += v;
  result.mean_return = sum / static_cast<double>(episodes);
  return result;
}

template TrainResult train_policy<env::ss::SimpleShapesEnv>(const AdapterPtr&, const TrainConfig&);
template TrainResult train_policy<env::fac::FactoryEnv>(const AdapterPtr&, const TrainConfig&);
template EvalResult evaluate_policy<env::ss::SimpleShapesEnv>(ActorCritic&, const AdapterPtr&, int,
                                                              std::uint64_t, bool);
template EvalResult evaluate_policy<env::fac::FactoryEnv>(ActorCritic&, const AdapterPtr&, int,
                                                          std::uint64_t, bool);

}  // namespace gwrl::rl
