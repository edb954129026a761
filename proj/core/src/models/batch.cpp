#include "gwrl/models/batch.hpp"

namespace gwrl::models {

torch::Tensor images_to_tensor(const data::Dataset& d, std::span<const std::uint32_t> indices) {
  const auto b = static_cast<std::int64_t>(indices.size());
  const int h = d.manifest.height;
  const int w = d.manifest.width;
  auto out = torch::empty({b, h, w, 3}, torch::kUInt8);
  auto* dst = out.data_ptr<std::uint8_t>();
  const std::size_t stride = d.image_stride();
  for (std::int64_t i = 0; i < b; ++i) {
    std::memcpy(dst + static_cast<std::size_t>(i) * stride,
                d.images.data() + static_cast<std::size_t>(indices[i]) * stride, stride);
  }
  return out.permute({0, 3, 1, 2}).to(torch::kFloat32).div_(255.0);
}

torch::Tensor image_to_tensor(const env::Image& img) {
  auto t = torch::from_blob(const_cast<std::uint8_t*>(img.rgb.data()),
                            {1, img.height, img.width, 3}, torch::kUInt8);
  return t.permute({0, 3, 1, 2}).to(torch::kFloat32).div_(255.0);
}

torch::Tensor attrs_to_tensor(const data::Dataset& d, std::span<const std::uint32_t> indices) {
  const auto b = static_cast<std::int64_t>(indices.size());
  const int dim = d.manifest.attr_dim;
  auto out = torch::empty({b, dim}, torch::kFloat32);
  auto* dst = out.data_ptr<float>();
  for (std::int64_t i = 0; i < b; ++i) {
    std::memcpy(dst + i * dim, d.attrs.data() + static_cast<std::size_t>(indices[i]) * dim,
                sizeof(float) * dim);
  }
  return out;
}

torch::Tensor attr_to_tensor(const env::AttrVec& attr) {
  auto t = torch::from_blob(const_cast<float*>(attr.data()),
                            {1, static_cast<std::int64_t>(attr.size())}, torch::kFloat32);
  return t.clone();
}

}  // namespace gwrl::models
