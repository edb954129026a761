#pragma once

#include <memory>
#include <span>
#include <string>

#include <torch/torch.h>

#include "gwrl/env/types.hpp"
#include "gwrl/models/avae.hpp"
#include "gwrl/models/gw.hpp"
#include "gwrl/models/vae.hpp"

namespace gwrl::rl {

enum class Source { unimodal_attr, unimodal_vision, gw, gw_nocycles, clip_like, avae };

const char* to_string(Source s);
Source source_from_string(const std::string& s);
bool is_multimodal(Source s);

// Frozen observation -> feature-vector function feeding the policy. Pure:
// policy training never updates anything behind it (fingerprint() lets tests
// verify that).
class Adapter {
public:
  virtual ~Adapter() = default;
  virtual int dim() const = 0;
  virtual models::Modality modality() const = 0;
  virtual Source source() const = 0;
  virtual std::string fingerprint() const = 0;
  // [B, dim] float32 from B observations of this adapter's modality.
  virtual torch::Tensor encode(std::span<const env::Observation> obs) const = 0;

  bool needs_images() const { return modality() == models::Modality::vision; }
};

using AdapterPtr = std::shared_ptr<const Adapter>;

AdapterPtr make_attr_adapter(int attr_dim);
AdapterPtr make_vision_adapter(models::VaeModel vae);
// `inner` supplies the unimodal latent that the GW encoder projects.
AdapterPtr make_gw_adapter(Source src, models::GWModel gw, AdapterPtr inner);
AdapterPtr make_avae_adapter(models::AvaeModel avae, models::Modality m);

}  // namespace gwrl::rl
