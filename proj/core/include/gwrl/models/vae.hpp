#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "gwrl/data/dataset.hpp"

namespace gwrl::models {

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Convolutional VAE geometry. Encoder: stride-2 4x4 convs with BN+ReLU, then
// (optionally pooled) flatten into mean/log-variance heads. Decoder: FC to a
// small spatial map, stride-2 transposed convs, final sigmoid conv back to
// RGB.
struct VaeArch {
  std::string name;
  int image_size = 32;
  std::vector<int> enc_channels;   // one stride-2 stage per entry
  bool enc_avgpool = false;        // 2x2 average pool before the heads
  int latent_dim = 12;
  int dec_start_channels = 256;
  int dec_start_hw = 4;
  std::vector<int> dec_channels;   // one stride-2 upsampling stage per entry
  int dec_kernel = 4;              // 4 (pad 1) or 5 (pad 2 + output padding 1)

  static VaeArch simple_shapes_paper();
  static VaeArch factory_paper();
  static VaeArch simple_shapes_desk();
  static VaeArch factory_desk();
};

struct VaeEncoderImpl : torch::nn::Module {
  explicit VaeEncoderImpl(const VaeArch& arch);
  // images [B,3,H,W] in [0,1] -> (mean, logvar), each [B, latent].
  std::pair<torch::Tensor, torch::Tensor> forward(torch::Tensor x);

  torch::nn::Sequential conv{nullptr};
  torch::nn::Linear head_mean{nullptr};
  torch::nn::Linear head_logvar{nullptr};
  int image_size_ = 0;
};
TORCH_MODULE(VaeEncoder);

struct VaeDecoderImpl : torch::nn::Module {
  explicit VaeDecoderImpl(const VaeArch& arch);
  torch::Tensor forward(torch::Tensor z);  // [B, latent] -> [B,3,H,W] in (0,1)

  torch::nn::Linear fc{nullptr};
  torch::nn::Sequential deconv{nullptr};
  int start_channels_ = 0;
  int start_hw_ = 0;
};
TORCH_MODULE(VaeDecoder);

struct VaeModelImpl : torch::nn::Module {
  VaeModelImpl(const VaeArch& arch, double beta_kl);

  std::pair<torch::Tensor, torch::Tensor> encode(torch::Tensor images);
  torch::Tensor decode(torch::Tensor z);
  torch::Tensor encode_mean(torch::Tensor images);

  VaeArch arch;
  double beta_kl = 1e-3;
  VaeEncoder enc{nullptr};
  VaeDecoder dec{nullptr};
};
TORCH_MODULE(VaeModel);

// z = mean + exp(logvar / 2) * noise
torch::Tensor reparameterize(torch::Tensor mean, torch::Tensor logvar, torch::Tensor noise);

// KL(q || N(0, I)) summed over dims, averaged over the batch:
// 0.5 * sum(exp(lv) + m^2 - 1 - lv).
torch::Tensor vae_kl(torch::Tensor mean, torch::Tensor logvar);

struct VaeTrainConfig {
  int max_steps = 2000;
  int batch_size = 128;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  int log_every = 100;
  double target_mse = -1.0;  // early stop when the running recon MSE drops below
};

struct VaeTrainLog {
  std::vector<double> recon_curve;  // per log interval
  std::vector<double> kl_curve;
  int steps_run = 0;
};

// MSE reconstruction + beta_kl * KL, Adam. Aborts with TrainingDiverged on a
// non-finite loss.
VaeTrainLog train_vae(VaeModel& model, const data::Dataset& dataset, const VaeTrainConfig& cfg);

// Posterior means of every image in the dataset, [n, latent] (no grad).
torch::Tensor encode_dataset_means(VaeModel& model, const data::Dataset& dataset,
                                   int batch_size = 256);

}  // namespace gwrl::models
