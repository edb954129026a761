#include "gwrl/rl/adapter.hpp"

#include <cstring>

#include "gwrl/models/checkpoint.hpp"

namespace gwrl::rl {

const char* to_string(Source s) {
  switch (s) {
    case Source::unimodal_attr: return "attr";
    case Source::unimodal_vision: return "vision";
    case Source::gw: return "gw";
    case Source::gw_nocycles: return "gw_nocycles";
    case Source::clip_like: return "clip_like";
    case Source::avae: return "avae";
  }
  return "?";
}

Source source_from_string(const std::string& s) {
  if (s == "attr") return Source::unimodal_attr;
  if (s == "vision") return Source::unimodal_vision;
  if (s == "gw") return Source::gw;
  if (s == "gw_nocycles") return Source::gw_nocycles;
  if (s == "clip_like") return Source::clip_like;
  if (s == "avae") return Source::avae;
  throw data::ConfigError("unknown representation source: '" + s + "'");
}

bool is_multimodal(Source s) {
  return s == Source::gw || s == Source::gw_nocycles || s == Source::clip_like ||
         s == Source::avae;
}

namespace {

torch::Tensor stack_attrs(std::span<const env::Observation> obs) {
  const auto b = static_cast<std::int64_t>(obs.size());
  const auto dim = static_cast<std::int64_t>(obs[0].attr.size());
  auto out = torch::empty({b, dim}, torch::kFloat32);
  auto* dst = out.data_ptr<float>();
  for (std::int64_t i = 0; i < b; ++i) {
    std::memcpy(dst + i * dim, obs[i].attr.data(), sizeof(float) * static_cast<std::size_t>(dim));
  }
  return out;
}

torch::Tensor stack_images(std::span<const env::Observation> obs) {
  const auto b = static_cast<std::int64_t>(obs.size());
  const int h = obs[0].image.height;
  const int w = obs[0].image.width;
  if (h == 0 || w == 0) {
    throw std::invalid_argument("vision adapter fed an observation without an image");
  }
  auto out = torch::empty({b, h, w, 3}, torch::kUInt8);
  auto* dst = out.data_ptr<std::uint8_t>();
  const std::size_t stride = static_cast<std::size_t>(h) * w * 3;
  for (std::int64_t i = 0; i < b; ++i) {
    std::memcpy(dst + static_cast<std::size_t>(i) * stride, obs[i].image.rgb.data(), stride);
  }
  return out.permute({0, 3, 1, 2}).to(torch::kFloat32).div_(255.0);
}

class AttrAdapter final : public Adapter {
public:
  explicit AttrAdapter(int dim) : dim_(dim) {}
  int dim() const override { return dim_; }
  models::Modality modality() const override { return models::Modality::attr; }
  Source source() const override { return Source::unimodal_attr; }
  std::string fingerprint() const override { return "attr-identity"; }
  torch::Tensor encode(std::span<const env::Observation> obs) const override {
    auto out = stack_attrs(obs);
    if (out.size(1) != dim_) {
      throw std::invalid_argument("attr adapter: observation modality/dimension mismatch");
    }
    return out;
  }

private:
  int dim_;
};

class VisionAdapter final : public Adapter {
public:
  explicit VisionAdapter(models::VaeModel vae)
      : vae_(std::move(vae)), hash_(models::module_param_hash(*vae_)) {
    vae_->eval();
  }
  int dim() const override { return vae_->arch.latent_dim; }
  models::Modality modality() const override { return models::Modality::vision; }
  Source source() const override { return Source::unimodal_vision; }
  std::string fingerprint() const override { return hash_; }
  torch::Tensor encode(std::span<const env::Observation> obs) const override {
    torch::NoGradGuard guard;
    return vae_->encode_mean(stack_images(obs));
  }

private:
  mutable models::VaeModel vae_;
  std::string hash_;
};

class GwAdapter final : public Adapter {
public:
  GwAdapter(Source src, models::GWModel gw, AdapterPtr inner)
      : src_(src), gw_(std::move(gw)), inner_(std::move(inner)) {
    gw_->eval();
    hash_ = models::module_param_hash(*gw_) + ":" + inner_->fingerprint();
  }
  int dim() const override { return gw_->cfg.gw_dim; }
  models::Modality modality() const override { return inner_->modality(); }
  Source source() const override { return src_; }
  std::string fingerprint() const override { return hash_; }
  torch::Tensor encode(std::span<const env::Observation> obs) const override {
    torch::NoGradGuard guard;
    return gw_->encode(inner_->encode(obs), inner_->modality());
  }

private:
  Source src_;
  mutable models::GWModel gw_;
  AdapterPtr inner_;
  std::string hash_;
};

class AvaeAdapter final : public Adapter {
public:
  AvaeAdapter(models::AvaeModel avae, models::Modality m)
      : avae_(std::move(avae)), modality_(m), hash_(models::module_param_hash(*avae_)) {
    avae_->eval();
  }
  int dim() const override { return avae_->arch.latent_dim(); }
  models::Modality modality() const override { return modality_; }
  Source source() const override { return Source::avae; }
  std::string fingerprint() const override { return hash_; }
  torch::Tensor encode(std::span<const env::Observation> obs) const override {
    torch::NoGradGuard guard;
    if (modality_ == models::Modality::vision) {
      return avae_->encode_vision(stack_images(obs)).first;
    }
    return avae_->encode_attr(stack_attrs(obs)).first;
  }

private:
  mutable models::AvaeModel avae_;
  models::Modality modality_;
  std::string hash_;
};

}  // namespace

AdapterPtr make_attr_adapter(int attr_dim) { return std::make_shared<AttrAdapter>(attr_dim); }

AdapterPtr make_vision_adapter(models::VaeModel vae) {
  return std::make_shared<VisionAdapter>(std::move(vae));
}

AdapterPtr make_gw_adapter(Source src, models::GWModel gw, AdapterPtr inner) {
  if (!is_multimodal(src) || src == Source::avae) {
    throw data::ConfigError("make_gw_adapter: source must be a GW family preset");
  }
  return std::make_shared<GwAdapter>(src, std::move(gw), std::move(inner));
}

AdapterPtr make_avae_adapter(models::AvaeModel avae, models::Modality m) {
  return std::make_shared<AvaeAdapter>(std::move(avae), m);
}

}  // namespace gwrl::rl
