#include "gwrl/models/avae.hpp"

#include "gwrl/models/batch.hpp"
#include "gwrl/util/rng.hpp"

namespace gwrl::models {

AvaeArch AvaeArch::simple_shapes_paper() {
  AvaeArch a;
  a.name = "avae-ss-paper";
  a.vision = VaeArch::simple_shapes_paper();  // latent 12 already
  a.attr_dim = 11;
  a.attr_hidden = {512, 512};
  a.attr_loss = AttrLossKind::onehot_nll_mse;
  a.onehot_dim = 3;
  return a;
}

AvaeArch AvaeArch::factory_paper() {
  AvaeArch a;
  a.name = "avae-factory-paper";
  a.vision = VaeArch::factory_paper();
  a.vision.latent_dim = 40;
  a.attr_dim = 10;
  a.attr_hidden = {960, 960};
  a.attr_loss = AttrLossKind::mse;
  a.beta_vision = 1e-4;
  return a;
}

AvaeArch AvaeArch::simple_shapes_desk() {
  AvaeArch a = simple_shapes_paper();
  a.name = "avae-ss-desk";
  a.vision = VaeArch::simple_shapes_desk();
  a.attr_hidden = {128, 128};
  return a;
}

AvaeArch AvaeArch::factory_desk() {
  AvaeArch a = factory_paper();
  a.name = "avae-factory-desk";
  a.vision = VaeArch::factory_desk();
  a.vision.latent_dim = 40;
  a.attr_hidden = {128, 128};
  return a;
}

AvaeModelImpl::AvaeModelImpl(const AvaeArch& a) : arch(a) {
  vis_enc = register_module("vis_enc", VaeEncoder(arch.vision));
  vis_dec = register_module("vis_dec", VaeDecoder(arch.vision));
  attr_enc = register_module("attr_enc",
                             Mlp(arch.attr_dim, arch.attr_hidden, 2 * arch.latent_dim()));
  attr_dec = register_module("attr_dec", Mlp(arch.latent_dim(), arch.attr_hidden, arch.attr_dim));
}

std::pair<torch::Tensor, torch::Tensor> AvaeModelImpl::encode_vision(torch::Tensor images) {
  return vis_enc->forward(images);
}

std::pair<torch::Tensor, torch::Tensor> AvaeModelImpl::encode_attr(torch::Tensor attrs) {
  if (attrs.dim() != 2 || attrs.size(1) != arch.attr_dim) {
    throw std::invalid_argument("AvaeModel: expected [B," + std::to_string(arch.attr_dim) +
                                "] attribute batch");
  }
  auto out = attr_enc->forward(attrs);
  return {out.narrow(1, 0, arch.latent_dim()), out.narrow(1, arch.latent_dim(), arch.latent_dim())};
}

torch::Tensor AvaeModelImpl::decode_vision(torch::Tensor z) { return vis_dec->forward(z); }

torch::Tensor AvaeModelImpl::decode_attr(torch::Tensor z) {
  auto raw = attr_dec->forward(z);
  if (arch.onehot_dim == 0) {
    return torch::tanh(raw);
  }
  // Raw logits for the categorical block, tanh for the continuous rest.
  auto logits = raw.narrow(1, 0, arch.onehot_dim);
  auto rest = torch::tanh(raw.narrow(1, arch.onehot_dim, arch.attr_dim - arch.onehot_dim));
  return torch::cat({logits, rest}, 1);
}

torch::Tensor symmetric_kl(torch::Tensor mean_p, torch::Tensor logvar_p, torch::Tensor mean_q,
                           torch::Tensor logvar_q) {
  auto var_p = logvar_p.exp();
  auto var_q = logvar_q.exp();
  auto diff2 = (mean_p - mean_q).pow(2);
  auto kl_pq = 0.5 * (logvar_q - logvar_p + (var_p + diff2) / var_q - 1.0);
  auto kl_qp = 0.5 * (logvar_p - logvar_q + (var_q + diff2) / var_p - 1.0);
  return (kl_pq + kl_qp).sum(1).mean();
}

AvaeTrainLog train_avae(AvaeModel& model, const data::Dataset& dataset,
                        const std::vector<std::uint32_t>& paired, const AvaeTrainConfig& cfg) {
  if (paired.empty()) {
    throw data::ConfigError("train_avae: empty paired set");
  }
  torch::manual_seed(cfg.seed);
  model->train();
  torch::optim::Adam opt(model->parameters(), torch::optim::AdamOptions(cfg.lr));

  GwConfig attr_loss_cfg;
  attr_loss_cfg.attr_loss = model->arch.attr_loss;
  attr_loss_cfg.onehot_dim = model->arch.onehot_dim;

  util::Rng rng(util::mix64(cfg.seed ^ 0x61766165ULL));
  std::vector<std::uint32_t> idx(cfg.batch_size);

  AvaeTrainLog log;
  double acc_v = 0, acc_a = 0, acc_al = 0;
  int acc_n = 0;

  for (int step = 0; step < cfg.max_steps; ++step) {
    for (auto& ix : idx) ix = paired[rng.below(paired.size())];
    auto x = images_to_tensor(dataset, idx);
    auto attrs = attrs_to_tensor(dataset, idx);

    opt.zero_grad();
    auto [mv, lv] = model->encode_vision(x);
    auto [ma, la] = model->encode_attr(attrs);
    auto zv = reparameterize(mv, lv, torch::randn_like(mv));
    auto za = reparameterize(ma, la, torch::randn_like(ma));

    auto vis_recon = torch::mse_loss(model->decode_vision(zv), x);
    auto attr_recon = attr_recon_loss(model->decode_attr(za), attrs, attr_loss_cfg);
    auto align = symmetric_kl(mv, lv, ma, la);
    auto loss = vis_recon + model->arch.beta_vision * vae_kl(mv, lv) + attr_recon +
                model->arch.beta_attr * vae_kl(ma, la) + model->arch.alignment_weight * align;
    if (!std::isfinite(loss.item<double>())) {
      throw TrainingDiverged("train_avae: non-finite loss at step " + std::to_string(step));
    }
    loss.backward();
    opt.step();

    acc_v += vis_recon.item<double>();
    acc_a += attr_recon.item<double>();
    acc_al += align.item<double>();
    ++acc_n;
    log.steps_run = step + 1;
    if ((step + 1) % cfg.log_every == 0) {
      log.vision_recon.push_back(acc_v / acc_n);
      log.attr_recon.push_back(acc_a / acc_n);
      log.alignment.push_back(acc_al / acc_n);
      acc_v = acc_a = acc_al = 0;
      acc_n = 0;
    }
  }
  if (acc_n > 0) {
    log.vision_recon.push_back(acc_v / acc_n);
    log.attr_recon.push_back(acc_a / acc_n);
    log.alignment.push_back(acc_al / acc_n);
  }
  model->eval();
  return log;
}

}  // namespace gwrl::models
