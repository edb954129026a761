#pragma once

#include <cstdint>
#include <vector>

#include <torch/torch.h>

#include "gwrl/data/regime.hpp"
#include "gwrl/models/gw.hpp"
#include "gwrl/models/mlp.hpp"
#include "gwrl/models/vae.hpp"

namespace gwrl::models {

struct AvaeArch {
  std::string name;
  VaeArch vision;                        // latent_dim = shared latent
  int attr_dim = 11;
  std::vector<int> attr_hidden = {128, 128};
  AttrLossKind attr_loss = AttrLossKind::mse;
  int onehot_dim = 0;
  double beta_vision = 1e-3;
  double beta_attr = 1e-3;
  double alignment_weight = 1.0;

  int latent_dim() const { return vision.latent_dim; }

  static AvaeArch simple_shapes_paper();
  static AvaeArch factory_paper();
  static AvaeArch simple_shapes_desk();
  static AvaeArch factory_desk();
};

// Two modality VAEs sharing a latent dimensionality, aligned during training
// by a symmetric KL between the paired posteriors. The attribute decoder
// emits raw logits for the categorical block and tanh-bounded values for the
// continuous block.
struct AvaeModelImpl : torch::nn::Module {
  explicit AvaeModelImpl(const AvaeArch& arch);

  std::pair<torch::Tensor, torch::Tensor> encode_vision(torch::Tensor images);
  std::pair<torch::Tensor, torch::Tensor> encode_attr(torch::Tensor attrs);
  torch::Tensor decode_vision(torch::Tensor z);
  torch::Tensor decode_attr(torch::Tensor z);

  AvaeArch arch;
  VaeEncoder vis_enc{nullptr};
  VaeDecoder vis_dec{nullptr};
  Mlp attr_enc{nullptr};
  Mlp attr_dec{nullptr};
};
TORCH_MODULE(AvaeModel);

// Jeffreys divergence KL(p||q) + KL(q||p) of two diagonal Gaussians, summed
// over dims, averaged over the batch.
torch::Tensor symmetric_kl(torch::Tensor mean_p, torch::Tensor logvar_p, torch::Tensor mean_q,
                           torch::Tensor logvar_q);

struct AvaeTrainConfig {
  int max_steps = 2000;
  int batch_size = 128;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  int log_every = 100;
};

struct AvaeTrainLog {
  std::vector<double> vision_recon, attr_recon, alignment;
  int steps_run = 0;
};

// Fully supervised: minibatches come from the paired subset only.
AvaeTrainLog train_avae(AvaeModel& model, const data::Dataset& dataset,
                        const std::vector<std::uint32_t>& paired, const AvaeTrainConfig& cfg);

}  // namespace gwrl::models
