#include <doctest.h>

#include <cmath>

#include <torch/torch.h>

#include "gwrl/env/simple_shapes.hpp"
#include "gwrl/exp/stats.hpp"
#include "gwrl/models/gw.hpp"
#include "gwrl/rl/adapter.hpp"
#include "gwrl/rl/gae.hpp"
#include "gwrl/rl/train.hpp"

using namespace gwrl;
using namespace gwrl::rl;

TEST_CASE("GAE of a constant-reward stream under the true value function is zero") {
  const double gamma = 0.99;
  const double c = 2.0;
  const double v = c / (1.0 - gamma);
  std::vector<double> rewards(32, c), values(32, v), trunc_next(32, 0.0);
  std::vector<std::uint8_t> term(32, 0), trunc(32, 0);
  std::vector<double> adv(32), ret(32);
  compute_gae(rewards, values, term, trunc, trunc_next, v, gamma, 0.95, adv, ret);
  for (const double a : adv) {
    CHECK(a == doctest::Approx(0.0).epsilon(1e-9));
  }
  for (const double r : ret) {
    CHECK(r == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("GAE resets across episode boundaries") {
  // One-step episodes: advantage is just r - V(s).
  std::vector<double> rewards{1.0, 2.0, 3.0}, values{0.5, 0.5, 0.5}, trunc_next(3, 0.0);
  std::vector<std::uint8_t> term{1, 1, 1}, trunc{0, 0, 0};
  std::vector<double> adv(3), ret(3);
  compute_gae(rewards, values, term, trunc, trunc_next, 9.9, 0.99, 0.95, adv, ret);
  CHECK(adv[0] == doctest::Approx(0.5));
  CHECK(adv[1] == doctest::Approx(1.5));
  CHECK(adv[2] == doctest::Approx(2.5));
}

TEST_CASE("truncation bootstraps with the stored next value") {
  std::vector<double> rewards{1.0}, values{0.0}, trunc_next{10.0};
  std::vector<std::uint8_t> term{0}, trunc{1};
  std::vector<double> adv(1), ret(1);
  compute_gae(rewards, values, term, trunc, trunc_next, 0.0, 0.5, 1.0, adv, ret);
  CHECK(adv[0] == doctest::Approx(1.0 + 0.5 * 10.0));
}

TEST_CASE("clipped surrogate never exceeds the unclipped one") {
  torch::manual_seed(7);
  auto ratio = torch::rand({512}) * 3.0;
  auto adv = torch::randn({512});
  auto unclipped = ratio * adv;
  auto clipped = ratio.clamp(0.8, 1.2) * adv;
  auto objective = torch::min(unclipped, clipped);
  CHECK((objective <= unclipped + 1e-7).all().item<bool>());
  // Inside the trust region the two coincide.
  auto inside = torch::full({16}, 1.05) * adv.narrow(0, 0, 16);
  auto inside_clipped = torch::full({16}, 1.05).clamp(0.8, 1.2) * adv.narrow(0, 0, 16);
  CHECK(torch::allclose(inside, inside_clipped));
}

TEST_CASE("policy act/evaluate agree on log-probabilities") {
  torch::manual_seed(8);
  SUBCASE("discrete") {
    PolicySpec spec;
    spec.obs_dim = 11;
    spec.discrete = true;
    spec.action_dim = 6;
    ActorCritic pi(spec);
    auto obs = torch::randn({16, 11});
    auto out = pi->act(obs);
    auto eval = pi->evaluate_actions(obs, out.raw);
    CHECK(torch::allclose(out.log_prob, eval.log_prob, 1e-5, 1e-6));
    CHECK((eval.entropy >= 0).all().item<bool>());
  }
  SUBCASE("continuous, tanh-squashed") {
    PolicySpec spec;
    spec.obs_dim = 10;
    spec.discrete = false;
    spec.action_dim = 2;
    ActorCritic pi(spec);
    auto obs = torch::randn({16, 10});
    auto out = pi->act(obs);
    CHECK(out.action.abs().max().item<double>() < 1.0);
    auto eval = pi->evaluate_actions(obs, out.raw);
    CHECK(torch::allclose(out.log_prob, eval.log_prob, 1e-4, 1e-5));
  }
}

TEST_CASE("value loss of a perfect critic is zero") {
  auto returns = torch::randn({64});
  CHECK(torch::mse_loss(returns, returns).item<double>() == 0.0);
}

TEST_CASE("attr adapter is the identity on attribute vectors") {
  auto adapter = make_attr_adapter(11);
  env::ss::SimpleShapesEnv e;
  e.set_render_enabled(false);
  auto obs = e.reset(4);
  std::vector<env::Observation> batch{obs};
  auto t = adapter->encode(batch);
  REQUIRE(t.sizes() == torch::IntArrayRef({1, 11}));
  for (int i = 0; i < 11; ++i) {
    CHECK(t[0][i].item<float>() == obs.attr[static_cast<std::size_t>(i)]);
  }
  CHECK(adapter->modality() == models::Modality::attr);
  CHECK(adapter->source() == Source::unimodal_attr);
}

TEST_CASE("gw adapter output width is the workspace width") {
  torch::manual_seed(9);
  models::GWModel gw(models::GwConfig::simple_shapes_desk());
  auto adapter = make_gw_adapter(Source::gw, gw, make_attr_adapter(11));
  CHECK(adapter->dim() == 12);
  env::ss::SimpleShapesEnv e;
  e.set_render_enabled(false);
  std::vector<env::Observation> batch{e.reset(1), e.reset(2)};
  CHECK(adapter->encode(batch).sizes() == torch::IntArrayRef({2, 12}));
  CHECK(adapter->source() == Source::gw);
}

TEST_CASE("cross-family evaluation is rejected by width checking") {
  torch::manual_seed(10);
  PolicySpec spec;
  spec.obs_dim = 12;
  spec.discrete = true;
  spec.action_dim = 6;
  ActorCritic pi(spec);
  auto adapter = make_attr_adapter(11);  // wrong family: 11 != 12
  CHECK_THROWS_AS(evaluate_policy<env::ss::SimpleShapesEnv>(pi, adapter, 4, 0),
                  std::invalid_argument);
}

TEST_CASE("policy training runs and the adapter stays frozen") {
  torch::manual_seed(11);
  models::GWModel gw(models::GwConfig::simple_shapes_desk());
  auto adapter = make_gw_adapter(Source::gw, gw, make_attr_adapter(11));
  const auto before = adapter->fingerprint();

  TrainConfig cfg;
  cfg.algo = Algo::ppo;
  cfg.max_env_steps = 4096;
  cfg.min_env_steps = 4096;
  cfg.horizon = 1024;
  cfg.epochs = 2;
  cfg.minibatch = 256;
  cfg.seed = 11;
  auto result = train_policy<env::ss::SimpleShapesEnv>(adapter, cfg);
  CHECK(result.env_steps >= 4096);
  CHECK(result.episodes > 0);
  REQUIRE_FALSE(result.curve.empty());
  CHECK(adapter->fingerprint() == before);

  auto eval = evaluate_policy<env::ss::SimpleShapesEnv>(result.policy, adapter, 8, 42);
  CHECK(eval.returns.size() == 8);
  // Same seeds, same greedy policy: evaluation is reproducible.
  auto eval2 = evaluate_policy<env::ss::SimpleShapesEnv>(result.policy, adapter, 8, 42);
  CHECK(eval.mean_return == doctest::Approx(eval2.mean_return));
}

TEST_CASE("a stochastic random-weight policy matches the random baseline") {
  torch::manual_seed(12);
  PolicySpec spec;
  spec.obs_dim = 11;
  spec.discrete = true;
  spec.action_dim = 6;
  ActorCritic pi(spec);  // near-uniform logits at init
  auto adapter = make_attr_adapter(11);
  auto eval = evaluate_policy<env::ss::SimpleShapesEnv>(pi, adapter, 300, 5, /*greedy=*/false);
  const auto baseline = exp::random_baseline(data::EnvId::simple_shapes, 1000, 5);
  const auto ci = exp::bootstrap_ci(eval.returns, 0.95, 4000, 5);
  // The two confidence intervals overlap.
  CHECK(ci.lo <= baseline.ci.hi);
  CHECK(baseline.ci.lo <= ci.hi);
}

TEST_CASE("a2c update path runs") {
  torch::manual_seed(13);
  auto adapter = make_attr_adapter(11);
  TrainConfig cfg;
  cfg.algo = Algo::a2c;
  cfg.max_env_steps = 2000;
  cfg.min_env_steps = 2000;
  cfg.a2c_nstep = 5;
  cfg.lr = 7e-4;
  cfg.seed = 13;
  auto result = train_policy<env::ss::SimpleShapesEnv>(adapter, cfg);
  CHECK(result.env_steps >= 2000);
}
