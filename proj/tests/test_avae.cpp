#include <doctest.h>

#include <torch/torch.h>

#include "gwrl/data/dataset.hpp"
#include "gwrl/data/regime.hpp"
#include "gwrl/models/avae.hpp"
#include "gwrl/models/checkpoint.hpp"

using namespace gwrl;
using namespace gwrl::models;

TEST_CASE("symmetric KL: identical posteriors align for free") {
  auto m = torch::randn({6, 4});
  auto lv = torch::randn({6, 4});
  CHECK(symmetric_kl(m, lv, m, lv).item<double>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("symmetric KL of unit-variance posteriors at means 0 and 1 is 1") {
  auto m0 = torch::zeros({1, 1});
  auto m1 = torch::ones({1, 1});
  auto lv = torch::zeros({1, 1});
  // KL(N(0,1)||N(1,1)) = KL(N(1,1)||N(0,1)) = 0.5; the symmetrized sum is 1.
  CHECK(symmetric_kl(m0, lv, m1, lv).item<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("latent dimensionalities match the per-environment layouts") {
  AvaeModel ss(AvaeArch::simple_shapes_desk());
  auto attrs = torch::randn({3, 11});
  auto [ma, la] = ss->encode_attr(attrs);
  CHECK(ma.sizes() == torch::IntArrayRef({3, 12}));
  auto dec = ss->decode_attr(ma);
  CHECK(dec.sizes() == torch::IntArrayRef({3, 11}));
  // Continuous block is tanh-bounded; categorical block is raw logits.
  CHECK(dec.narrow(1, 3, 8).abs().max().item<double>() <= 1.0);

  AvaeModel fac(AvaeArch::factory_desk());
  auto [mf, lf] = fac->encode_attr(torch::randn({2, 10}));
  CHECK(mf.sizes() == torch::IntArrayRef({2, 40}));
  CHECK(fac->decode_attr(mf).sizes() == torch::IntArrayRef({2, 10}));

  CHECK_THROWS_AS(ss->encode_attr(torch::randn({2, 10})), std::invalid_argument);
}

TEST_CASE("parameter counts stay within 10% of the reference budgets") {
  // Vision/attribute pairs: 6M/0.6M (32x32 setup) and 11M/2M (128x128).
  AvaeModel ss(AvaeArch::simple_shapes_paper());
  const auto ss_vision = parameter_count(*ss->vis_enc) + parameter_count(*ss->vis_dec);
  const auto ss_attr = parameter_count(*ss->attr_enc) + parameter_count(*ss->attr_dec);
  CHECK(ss_vision > 6.0e6 * 0.9);
  CHECK(ss_vision < 6.0e6 * 1.1);
  CHECK(ss_attr > 0.6e6 * 0.9);
  CHECK(ss_attr < 0.6e6 * 1.1);

  AvaeModel fac(AvaeArch::factory_paper());
  const auto fac_vision = parameter_count(*fac->vis_enc) + parameter_count(*fac->vis_dec);
  const auto fac_attr = parameter_count(*fac->attr_enc) + parameter_count(*fac->attr_dec);
  CHECK(fac_vision > 11.0e6 * 0.9);
  CHECK(fac_vision < 11.0e6 * 1.1);
  CHECK(fac_attr > 2.0e6 * 0.9);
  CHECK(fac_attr < 2.0e6 * 1.1);
}

TEST_CASE("training consumes the paired set only and moves both posteriors") {
  torch::manual_seed(6);
  const auto d = data::generate_dataset(data::EnvId::simple_shapes, 48, 8);
  const auto split = data::split_regime(d, 0.5, 2);

  AvaeModel model(AvaeArch::simple_shapes_desk());
  AvaeTrainConfig cfg;
  cfg.max_steps = 25;
  cfg.batch_size = 8;
  cfg.seed = 6;
  const auto before = module_param_hash(*model);
  const auto log = train_avae(model, d, split.paired, cfg);
  CHECK(log.steps_run == 25);
  CHECK(module_param_hash(*model) != before);
  REQUIRE_FALSE(log.alignment.empty());

  CHECK_THROWS_AS(train_avae(model, d, {}, cfg), data::ConfigError);
}
