#include "gwrl/models/gw.hpp"

#include <cmath>

#include "gwrl/util/rng.hpp"

namespace gwrl::models {

const char* to_string(GwPreset p) {
  switch (p) {
    case GwPreset::gw: return "gw";
    case GwPreset::gw_nocycles: return "gw_nocycles";
    case GwPreset::clip_like: return "clip_like";
  }
  return "?";
}

const char* to_string(Regime r) { return r == Regime::full ? "full" : "low"; }

GwPreset gw_preset_from_string(const std::string& s) {
  if (s == "gw") return GwPreset::gw;
  if (s == "gw_nocycles") return GwPreset::gw_nocycles;
  if (s == "clip_like") return GwPreset::clip_like;
  throw data::ConfigError("unknown GW preset: '" + s + "'");
}

Regime regime_from_string(const std::string& s) {
  if (s == "full") return Regime::full;
  if (s == "low") return Regime::low;
  throw data::ConfigError("unknown regime: '" + s + "'");
}

LossWeights preset_weights(GwPreset preset, data::EnvId env, Regime regime) {
  switch (preset) {
    case GwPreset::clip_like:
      return {0.0, 1.0, 0.0, 0.0};
    case GwPreset::gw_nocycles:
      return {1.0, 0.1, 0.0, 0.0};
    case GwPreset::gw:
      if (env == data::EnvId::simple_shapes) {
        return regime == Regime::full ? LossWeights{1.0, 0.1, 5.0, 5.0}
                                      : LossWeights{1.0, 0.1, 10.0, 10.0};
      }
      return regime == Regime::full ? LossWeights{1.0, 0.1, 1.0, 1.0}
                                    : LossWeights{1.0, 0.1, 5.0, 5.0};
  }
  throw data::ConfigError("unknown GW preset");
}

GwConfig GwConfig::simple_shapes_desk() {
  GwConfig c;
  c.attr_dim = 11;
  c.vision_dim = 12;
  c.gw_dim = 12;
  c.hidden_enc = {128, 128, 128};
  c.hidden_dec = {128, 128, 128};
  c.attr_loss = AttrLossKind::onehot_nll_mse;
  c.onehot_dim = 3;
  return c;
}

GwConfig GwConfig::factory_desk() {
  GwConfig c;
  c.attr_dim = 10;
  c.vision_dim = 10;
  c.gw_dim = 40;
  c.hidden_enc = {128, 128, 128};
  c.hidden_dec = {128, 128, 128};
  c.attr_loss = AttrLossKind::mse;
  return c;
}

GwConfig GwConfig::simple_shapes_paper() {
  GwConfig c = simple_shapes_desk();
  c.hidden_enc = {128, 128, 128};
  c.hidden_dec = {128, 128, 128};
  return c;
}

GwConfig GwConfig::factory_paper() {
  GwConfig c = factory_desk();
  c.hidden_enc = {512, 512, 512, 512, 512};
  c.hidden_dec = {512, 512, 512, 512, 512};
  return c;
}

GWModelImpl::GWModelImpl(const GwConfig& c) : cfg(c) {
  e_v = register_module("e_v", Mlp(cfg.vision_dim, cfg.hidden_enc, cfg.gw_dim));
  e_attr = register_module("e_attr", Mlp(cfg.attr_dim, cfg.hidden_enc, cfg.gw_dim));
  d_v = register_module("d_v", Mlp(cfg.gw_dim, cfg.hidden_dec, cfg.vision_dim));
  d_attr = register_module("d_attr", Mlp(cfg.gw_dim, cfg.hidden_dec, cfg.attr_dim));
  // CLIP-style learnable logit scale, initialized to 1/0.07.
  log_temp = register_parameter("log_temp", torch::tensor(std::log(1.0 / 0.07)));
}

torch::Tensor GWModelImpl::logit_scale() const {
  return log_temp.clamp_max(std::log(100.0)).exp();
}

namespace {

void check_dim(const torch::Tensor& x, int expected, const char* what) {
  if (x.dim() != 2 || x.size(1) != expected) {
    throw std::invalid_argument(std::string(what) + ": expected [B," +
                                std::to_string(expected) + "], got " +
                                std::to_string(x.dim() == 2 ? x.size(1) : -1) + " columns");
  }
}

}  // namespace

torch::Tensor GWModelImpl::encode(torch::Tensor x, Modality m) {
  if (m == Modality::vision) {
    check_dim(x, cfg.vision_dim, "gw encode(vision)");
    return e_v->forward(x);
  }
  check_dim(x, cfg.attr_dim, "gw encode(attr)");
  return e_attr->forward(x);
}

torch::Tensor GWModelImpl::decode(torch::Tensor z, Modality m) {
  check_dim(z, cfg.gw_dim, "gw decode");
  return m == Modality::vision ? d_v->forward(z) : d_attr->forward(z);
}

torch::Tensor attr_recon_loss(torch::Tensor pred, torch::Tensor target, const GwConfig& cfg) {
  if (cfg.attr_loss == AttrLossKind::mse) {
    return torch::mse_loss(pred, target);
  }
  const int k = cfg.onehot_dim;
  auto logits = pred.narrow(1, 0, k);
  auto classes = target.narrow(1, 0, k).argmax(1);
  auto nll = torch::cross_entropy_loss(logits, classes);
  auto mse = torch::mse_loss(pred.narrow(1, k, pred.size(1) - k),
                             target.narrow(1, k, target.size(1) - k));
  return nll + mse;
}

torch::Tensor loss_translation(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr) {
  if (o_v.size(0) != o_attr.size(0)) {
    throw std::invalid_argument("loss_translation: needs a paired batch");
  }
  auto attr_from_v = m->decode(m->encode(o_v, Modality::vision), Modality::attr);
  auto v_from_attr = m->decode(m->encode(o_attr, Modality::attr), Modality::vision);
  return 0.5 * (attr_recon_loss(attr_from_v, o_attr, m->cfg) + torch::mse_loss(v_from_attr, o_v));
}

torch::Tensor loss_contrastive(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr) {
  if (o_v.size(0) != o_attr.size(0)) {
    throw std::invalid_argument("loss_contrastive: needs a paired batch");
  }
  auto zv = m->encode(o_v, Modality::vision);
  auto za = m->encode(o_attr, Modality::attr);
  auto nv = zv.norm(2, 1, true);
  auto na = za.norm(2, 1, true);
  if (nv.min().item<double>() < 1e-12 || na.min().item<double>() < 1e-12) {
    throw std::runtime_error("loss_contrastive: zero-norm GW embedding");
  }
  auto logits = torch::mm(zv / nv, (za / na).t()) * m->logit_scale();
  auto targets = torch::arange(o_v.size(0), torch::kLong);
  return 0.5 * (torch::cross_entropy_loss(logits, targets) +
                torch::cross_entropy_loss(logits.t(), targets));
}

torch::Tensor loss_demicycle(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr) {
  auto v_cycle = m->decode(m->encode(o_v, Modality::vision), Modality::vision);
  auto a_cycle = m->decode(m->encode(o_attr, Modality::attr), Modality::attr);
  return 0.5 * (torch::mse_loss(v_cycle, o_v) + attr_recon_loss(a_cycle, o_attr, m->cfg));
}

torch::Tensor loss_fullcycle(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr) {
  auto v_out = m->decode(
      m->encode(m->decode(m->encode(o_v, Modality::vision), Modality::attr), Modality::attr),
      Modality::vision);
  auto a_out = m->decode(
      m->encode(m->decode(m->encode(o_attr, Modality::attr), Modality::vision), Modality::vision),
      Modality::attr);
  return 0.5 * (torch::mse_loss(v_out, o_v) + attr_recon_loss(a_out, o_attr, m->cfg));
}

torch::Tensor total_gw_loss(GWModel& m, torch::Tensor paired_v, torch::Tensor paired_attr,
                            torch::Tensor uni_v, torch::Tensor uni_attr, const LossWeights& w) {
  auto total = torch::zeros({}, torch::kFloat32);
  if (w.translation != 0.0) total = total + w.translation * loss_translation(m, paired_v, paired_attr);
  if (w.contrastive != 0.0) total = total + w.contrastive * loss_contrastive(m, paired_v, paired_attr);
  if (w.demicycle != 0.0) total = total + w.demicycle * loss_demicycle(m, uni_v, uni_attr);
  if (w.fullcycle != 0.0) total = total + w.fullcycle * loss_fullcycle(m, uni_v, uni_attr);
  return total;
}

GwTrainLog train_gw(GWModel& model, const GwData& data, const LossWeights& w,
                    const GwTrainConfig& cfg) {
  torch::manual_seed(cfg.seed);
  model->train();
  torch::optim::Adam opt(model->parameters(), torch::optim::AdamOptions(cfg.lr));

  const auto n = static_cast<std::uint64_t>(data.attrs.size(0));
  const auto m_count = data.split.paired.size();
  if (m_count == 0) {
    throw data::ConfigError("train_gw: empty paired set");
  }
  const bool uses_cycles = w.demicycle != 0.0 || w.fullcycle != 0.0;

  util::Rng rng(util::mix64(cfg.seed ^ 0x67777472ULL));
  GwTrainLog log;
  double acc_tr = 0, acc_ct = 0, acc_dc = 0, acc_fc = 0, acc_total = 0;
  int acc_n = 0;

  auto gather = [](const torch::Tensor& t, const std::vector<std::int64_t>& idx) {
    return t.index_select(0, torch::tensor(idx, torch::kLong));
  };

  std::vector<std::int64_t> pi(cfg.batch_paired);
  std::vector<std::int64_t> ui(cfg.batch_unimodal);
  std::vector<std::int64_t> uj(cfg.batch_unimodal);

  for (int step = 0; step < cfg.steps; ++step) {
    for (auto& ix : pi) ix = static_cast<std::int64_t>(data.split.paired[rng.below(m_count)]);
    auto pv = gather(data.vision, pi);
    auto pa = gather(data.attrs, pi);

    torch::Tensor uv, ua;

    opt.zero_grad();
    torch::Tensor l_tr, l_ct, l_dc, l_fc;
    auto total = torch::zeros({}, torch::kFloat32);
    if (w.translation != 0.0) {
      l_tr = loss_translation(model, pv, pa);
      total = total + w.translation * l_tr;
    }
    if (w.contrastive != 0.0) {
      l_ct = loss_contrastive(model, pv, pa);
      total = total + w.contrastive * l_ct;
    }
    if (uses_cycles) {
      // Independent draws from U_v and U_attr; no pairing is used.
      for (auto& ix : ui) ix = static_cast<std::int64_t>(data.split.vision_order[rng.below(n)]);
      for (auto& ix : uj) ix = static_cast<std::int64_t>(data.split.attr_order[rng.below(n)]);
      uv = gather(data.vision, ui);
      ua = gather(data.attrs, uj);
      log.unpaired_batches_consumed += 2;
      if (w.demicycle != 0.0) {
        l_dc = loss_demicycle(model, uv, ua);
        total = total + w.demicycle * l_dc;
      }
      if (w.fullcycle != 0.0) {
        l_fc = loss_fullcycle(model, uv, ua);
        total = total + w.fullcycle * l_fc;
      }
    }

    if (!std::isfinite(total.item<double>())) {
      throw TrainingDiverged("train_gw: non-finite loss at step " + std::to_string(step));
    }
    total.backward();
    opt.step();

    acc_tr += l_tr.defined() ? l_tr.item<double>() : 0.0;
    acc_ct += l_ct.defined() ? l_ct.item<double>() : 0.0;
    acc_dc += l_dc.defined() ? l_dc.item<double>() : 0.0;
    acc_fc += l_fc.defined() ? l_fc.item<double>() : 0.0;
    acc_total += total.item<double>();
    ++acc_n;
    log.steps_run = step + 1;

    if ((step + 1) % cfg.log_every == 0) {
      log.translation.push_back(acc_tr / acc_n);
      log.contrastive.push_back(acc_ct / acc_n);
      log.demicycle.push_back(acc_dc / acc_n);
      log.fullcycle.push_back(acc_fc / acc_n);
      log.total.push_back(acc_total / acc_n);
      acc_tr = acc_ct = acc_dc = acc_fc = acc_total = 0;
      acc_n = 0;
    }
  }
  if (acc_n > 0) {
    log.translation.push_back(acc_tr / acc_n);
    log.contrastive.push_back(acc_ct / acc_n);
    log.demicycle.push_back(acc_dc / acc_n);
    log.fullcycle.push_back(acc_fc / acc_n);
    log.total.push_back(acc_total / acc_n);
  }
  model->eval();
  return log;
}

}  // namespace gwrl::models
