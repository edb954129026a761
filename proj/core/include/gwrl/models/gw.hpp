#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "gwrl/data/regime.hpp"
#include "gwrl/models/mlp.hpp"
#include "gwrl/models/vae.hpp"

namespace gwrl::models {

enum class Modality { attr, vision };

enum class AttrLossKind {
  mse,             // all-continuous attribute vectors
  onehot_nll_mse,  // leading categorical block scored by NLL, rest by MSE
};

// Weights of the four training objectives (alpha, beta, gamma, theta order:
// translation, contrastive, demi-cycle, full-cycle).
struct LossWeights {
  double translation = 1.0;
  double contrastive = 0.1;
  double demicycle = 0.0;
  double fullcycle = 0.0;

  bool operator==(const LossWeights&) const = default;
};

enum class GwPreset { gw, gw_nocycles, clip_like };
enum class Regime { full, low };

const char* to_string(GwPreset p);
const char* to_string(Regime r);
GwPreset gw_preset_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

// Named weight tables. The full-GW values differ per environment and regime;
// the ablations are shared.
LossWeights preset_weights(GwPreset preset, data::EnvId env, Regime regime);

struct GwConfig {
  int attr_dim = 11;
  int vision_dim = 12;
  int gw_dim = 12;
  std::vector<int> hidden_enc = {128, 128, 128};
  std::vector<int> hidden_dec = {128, 128, 128};
  AttrLossKind attr_loss = AttrLossKind::mse;
  int onehot_dim = 0;  // leading categorical block when onehot_nll_mse

  static GwConfig simple_shapes_desk();
  static GwConfig factory_desk();
  static GwConfig simple_shapes_paper();
  static GwConfig factory_paper();
};

// Encoder/decoder pair per modality plus the learnable contrastive
// temperature (CLIP-style logit scale, clamped at 100).
struct GWModelImpl : torch::nn::Module {
  explicit GWModelImpl(const GwConfig& cfg);

  torch::Tensor encode(torch::Tensor x, Modality m);
  torch::Tensor decode(torch::Tensor z, Modality m);
  torch::Tensor logit_scale() const;

  GwConfig cfg;
  Mlp e_v{nullptr}, e_attr{nullptr}, d_v{nullptr}, d_attr{nullptr};
  torch::Tensor log_temp;
};
TORCH_MODULE(GWModel);

// Attribute-side reconstruction error; vision always uses MSE.
torch::Tensor attr_recon_loss(torch::Tensor pred, torch::Tensor target, const GwConfig& cfg);

// 0.5 * [L_attr(d_attr(e_v(o_v)), o_attr) + L_v(d_v(e_attr(o_attr)), o_v)]
torch::Tensor loss_translation(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr);

// Symmetric InfoNCE over cosine similarities of the paired GW encodings.
torch::Tensor loss_contrastive(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr);

// 0.5 * [L_v(d_v(e_v(o_v)), o_v) + L_attr(d_attr(e_attr(o_attr)), o_attr)];
// the two batches need not be paired or equally sized.
torch::Tensor loss_demicycle(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr);

// 0.5 * [L_v(d_v(e_attr(d_attr(e_v(o_v)))), o_v) +
//        L_attr(d_attr(e_v(d_v(e_attr(o_attr)))), o_attr)]
torch::Tensor loss_fullcycle(GWModel& m, torch::Tensor o_v, torch::Tensor o_attr);

// alpha*L_tr + beta*L_cont + gamma*L_dcy + theta*L_cy. Terms with zero weight
// are not evaluated (so their parameters see no gradient traffic at all).
torch::Tensor total_gw_loss(GWModel& m, torch::Tensor paired_v, torch::Tensor paired_attr,
                            torch::Tensor uni_v, torch::Tensor uni_attr, const LossWeights& w);

// Unimodal latent views used by GW training: precomputed VAE posterior means
// for the vision side, normalized attribute vectors for the attribute side.
struct GwData {
  torch::Tensor attrs;    // [n, attr_dim]
  torch::Tensor vision;   // [n, vision_dim]
  data::RegimeSplit split;
};

struct GwTrainConfig {
  int steps = 8000;
  int batch_paired = 128;
  int batch_unimodal = 128;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  int log_every = 200;
};

struct GwTrainLog {
  std::vector<double> translation, contrastive, demicycle, fullcycle, total;
  std::int64_t unpaired_batches_consumed = 0;
  int steps_run = 0;
};

// Supervised terms sample from M; cycle terms sample from the full unimodal
// sets. A preset with zero cycle weights therefore consumes no unpaired data.
GwTrainLog train_gw(GWModel& model, const GwData& data, const LossWeights& weights,
                    const GwTrainConfig& cfg);

}  // namespace gwrl::models
