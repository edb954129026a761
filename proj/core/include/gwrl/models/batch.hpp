#pragma once

#include <span>

#include <torch/torch.h>

#include "gwrl/data/dataset.hpp"
#include "gwrl/env/types.hpp"

namespace gwrl::models {

// [B, 3, H, W] float32 in [0,1] (dequantized as v/255).
torch::Tensor images_to_tensor(const data::Dataset& d, std::span<const std::uint32_t> indices);
torch::Tensor image_to_tensor(const env::Image& img);

// [B, attr_dim] float32.
torch::Tensor attrs_to_tensor(const data::Dataset& d, std::span<const std::uint32_t> indices);
torch::Tensor attr_to_tensor(const env::AttrVec& attr);

}  // namespace gwrl::models
