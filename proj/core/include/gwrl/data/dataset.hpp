#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwrl/env/types.hpp"

namespace gwrl::data {

enum class EnvId { simple_shapes, factory };

const char* to_string(EnvId id);
EnvId env_from_string(const std::string& name);  // throws ConfigError

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Container/loader version mismatch.
struct IncompatibleDatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or inconsistent file contents.
struct CorruptDatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatasetManifest {
  EnvId env = EnvId::simple_shapes;
  std::string renderer_version;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  int height = 0;
  int width = 0;
  int attr_dim = 0;

  bool operator==(const DatasetManifest&) const = default;
};

// Columnar paired dataset: images as 8-bit (dequantized to [0,1] floats at
// the model boundary), attribute vectors as float32.
struct Dataset {
  DatasetManifest manifest;
  std::vector<std::uint8_t> images;  // n * h * w * 3
  std::vector<float> attrs;          // n * attr_dim

  bool operator==(const Dataset&) const = default;

  std::size_t image_stride() const {
    return static_cast<std::size_t>(manifest.height) * manifest.width * 3;
  }
  std::span<const std::uint8_t> image(std::int64_t i) const {
    return {images.data() + static_cast<std::size_t>(i) * image_stride(), image_stride()};
  }
  std::span<const float> attr(std::int64_t i) const {
    return {attrs.data() + static_cast<std::size_t>(i) * manifest.attr_dim,
            static_cast<std::size_t>(manifest.attr_dim)};
  }
  env::Image image_copy(std::int64_t i) const;
};

// n i.i.d. uniform states, rendered and encoded. Sample i depends only on
// substream(seed, i), so sharded generation reproduces the single-worker
// artifact byte for byte.
Dataset generate_dataset(EnvId env, std::int64_t n, std::uint64_t seed);

void save_dataset(const Dataset& d, const std::string& path);
Dataset load_dataset(const std::string& path);

std::string dataset_hash(const Dataset& d);

}  // namespace gwrl::data
