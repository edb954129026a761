#include "gwrl/models/vae.hpp"

#include <cmath>

#include "gwrl/models/batch.hpp"
#include "gwrl/util/rng.hpp"

namespace gwrl::models {

VaeArch VaeArch::simple_shapes_paper() {
  VaeArch a;
  a.name = "ss-paper";
  a.image_size = 32;
  a.enc_channels = {64, 128, 256, 512};
  a.latent_dim = 12;
  a.dec_start_channels = 512;
  a.dec_start_hw = 4;
  a.dec_channels = {256, 128, 64};
  a.dec_kernel = 4;
  return a;
}

VaeArch VaeArch::factory_paper() {
  VaeArch a;
  a.name = "factory-paper";
  a.image_size = 128;
  a.enc_channels = {64, 128, 256, 512};
  a.enc_avgpool = true;
  a.latent_dim = 10;
  a.dec_start_channels = 512;
  a.dec_start_hw = 8;
  a.dec_channels = {256, 128, 64, 32};
  a.dec_kernel = 5;
  return a;
}

VaeArch VaeArch::simple_shapes_desk() {
  VaeArch a;
  a.name = "ss-desk";
  a.image_size = 32;
  a.enc_channels = {8, 16, 32, 64};
  a.latent_dim = 12;
  a.dec_start_channels = 64;
  a.dec_start_hw = 4;
  a.dec_channels = {48, 32, 16};
  a.dec_kernel = 4;
  return a;
}

VaeArch VaeArch::factory_desk() {
  VaeArch a;
  a.name = "factory-desk";
  a.image_size = 128;
  a.enc_channels = {8, 16, 32, 64};
  a.latent_dim = 10;
  a.dec_start_channels = 64;
  a.dec_start_hw = 8;
  a.dec_channels = {32, 16, 8, 8};
  a.dec_kernel = 4;
  return a;
}

VaeEncoderImpl::VaeEncoderImpl(const VaeArch& arch) : image_size_(arch.image_size) {
  conv = torch::nn::Sequential();
  int in_ch = 3;
  for (const int ch : arch.enc_channels) {
    conv->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(in_ch, ch, 4).stride(2).padding(1)));
    conv->push_back(torch::nn::BatchNorm2d(ch));
    conv->push_back(torch::nn::ReLU());
    in_ch = ch;
  }
  if (arch.enc_avgpool) {
    conv->push_back(torch::nn::AvgPool2d(torch::nn::AvgPool2dOptions(2)));
  }
  register_module("conv", conv);

  int hw = arch.image_size >> arch.enc_channels.size();
  if (arch.enc_avgpool) hw /= 2;
  const int flat = in_ch * hw * hw;
  head_mean = register_module("head_mean", torch::nn::Linear(flat, arch.latent_dim));
  head_logvar = register_module("head_logvar", torch::nn::Linear(flat, arch.latent_dim));
}

std::pair<torch::Tensor, torch::Tensor> VaeEncoderImpl::forward(torch::Tensor x) {
  if (x.dim() != 4 || x.size(1) != 3 || x.size(2) != image_size_ || x.size(3) != image_size_) {
    throw std::invalid_argument("VaeEncoder: expected [B,3," + std::to_string(image_size_) + "," +
                                std::to_string(image_size_) + "] input");
  }
  auto h = conv->forward(x).flatten(1);
  return {head_mean->forward(h), head_logvar->forward(h)};
}

VaeDecoderImpl::VaeDecoderImpl(const VaeArch& arch)
    : start_channels_(arch.dec_start_channels), start_hw_(arch.dec_start_hw) {
  fc = register_module(
      "fc", torch::nn::Linear(arch.latent_dim, start_channels_ * start_hw_ * start_hw_));
  deconv = torch::nn::Sequential();
  int in_ch = start_channels_;
  for (const int ch : arch.dec_channels) {
    auto opts = torch::nn::ConvTranspose2dOptions(in_ch, ch, arch.dec_kernel).stride(2);
    if (arch.dec_kernel == 5) {
      opts = opts.padding(2).output_padding(1);
    } else {
      opts = opts.padding(1);
    }
    deconv->push_back(torch::nn::ConvTranspose2d(opts));
    deconv->push_back(torch::nn::BatchNorm2d(ch));
    deconv->push_back(torch::nn::ReLU());
    in_ch = ch;
  }
  deconv->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(in_ch, 3, 3).stride(1).padding(1)));
  deconv->push_back(torch::nn::Sigmoid());
  register_module("deconv", deconv);
}

torch::Tensor VaeDecoderImpl::forward(torch::Tensor z) {
  auto h = fc->forward(z).view({z.size(0), start_channels_, start_hw_, start_hw_});
  return deconv->forward(h);
}

VaeModelImpl::VaeModelImpl(const VaeArch& a, double beta) : arch(a), beta_kl(beta) {
  enc = register_module("enc", VaeEncoder(arch));
  dec = register_module("dec", VaeDecoder(arch));
}

std::pair<torch::Tensor, torch::Tensor> VaeModelImpl::encode(torch::Tensor images) {
  return enc->forward(images);
}

torch::Tensor VaeModelImpl::decode(torch::Tensor z) { return dec->forward(z); }

torch::Tensor VaeModelImpl::encode_mean(torch::Tensor images) {
  return enc->forward(images).first;
}

torch::Tensor reparameterize(torch::Tensor mean, torch::Tensor logvar, torch::Tensor noise) {
  return mean + torch::exp(0.5 * logvar) * noise;
}

torch::Tensor vae_kl(torch::Tensor mean, torch::Tensor logvar) {
  return 0.5 * (logvar.exp() + mean.pow(2) - 1.0 - logvar).sum(1).mean();
}

VaeTrainLog train_vae(VaeModel& model, const data::Dataset& dataset, const VaeTrainConfig& cfg) {
  torch::manual_seed(cfg.seed);
  model->train();
  torch::optim::Adam opt(model->parameters(), torch::optim::AdamOptions(cfg.lr));

  const auto n = static_cast<std::uint32_t>(dataset.manifest.n);
  util::Rng rng(util::mix64(cfg.seed ^ 0x76616574ULL));
  std::vector<std::uint32_t> batch_idx(cfg.batch_size);

  VaeTrainLog log;
  double acc_recon = 0, acc_kl = 0;
  int acc_count = 0;
  double running_mse = -1.0;

  for (int step = 0; step < cfg.max_steps; ++step) {
    for (auto& ix : batch_idx) ix = static_cast<std::uint32_t>(rng.below(n));
    auto x = images_to_tensor(dataset, batch_idx);

    opt.zero_grad();
    auto [mean, logvar] = model->encode(x);
    auto z = reparameterize(mean, logvar, torch::randn_like(mean));
    auto recon = model->decode(z);
    auto mse = torch::mse_loss(recon, x);
    auto kl = vae_kl(mean, logvar);
    auto loss = mse + model->beta_kl * kl;
    if (!std::isfinite(loss.item<double>())) {
      throw TrainingDiverged("train_vae: non-finite loss at step " + std::to_string(step) +
                             " (mse=" + std::to_string(mse.item<double>()) +
                             ", kl=" + std::to_string(kl.item<double>()) + ")");
    }
    loss.backward();
    opt.step();

    const double mse_v = mse.item<double>();
    acc_recon += mse_v;
    acc_kl += kl.item<double>();
    ++acc_count;
    running_mse = running_mse < 0 ? mse_v : 0.95 * running_mse + 0.05 * mse_v;
    log.steps_run = step + 1;

    if ((step + 1) % cfg.log_every == 0) {
      log.recon_curve.push_back(acc_recon / acc_count);
      log.kl_curve.push_back(acc_kl / acc_count);
      acc_recon = acc_kl = 0;
      acc_count = 0;
    }
    if (cfg.target_mse > 0 && running_mse < cfg.target_mse && step >= 50) {
      break;
    }
  }
  if (acc_count > 0) {
    log.recon_curve.push_back(acc_recon / acc_count);
    log.kl_curve.push_back(acc_kl / acc_count);
  }
  model->eval();
  return log;
}

torch::Tensor encode_dataset_means(VaeModel& model, const data::Dataset& dataset, int batch_size) {
  torch::NoGradGuard guard;
  model->eval();
  const auto n = dataset.manifest.n;
  auto out = torch::empty({n, model->arch.latent_dim}, torch::kFloat32);
  std::vector<std::uint32_t> idx;
  for (std::int64_t at = 0; at < n; at += batch_size) {
    const auto count = std::min<std::int64_t>(batch_size, n - at);
    idx.resize(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(at + i);
    auto means = model->encode(images_to_tensor(dataset, idx)).first;
    out.narrow(0, at, count).copy_(means);
  }
  return out;
}

}  // namespace gwrl::models
