#pragma once

#include <cstdint>
#include <vector>

namespace gwrl::env {

// Row-major H x W x 3, 8-bit channels. Float views dequantize as v / 255.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> rgb;

  bool operator==(const Image&) const = default;

  std::size_t size_bytes() const { return rgb.size(); }
};

using AttrVec = std::vector<float>;

// Both modalities of one environment state.
struct Observation {
  Image image;
  AttrVec attr;
};

struct RgbF {
  double r = 0, g = 0, b = 0;
};

// HSL -> RGB, all components in [0,1].
RgbF hsl_to_rgb(double h, double s, double l);
// Inverse; hue of achromatic input is 0.
void rgb_to_hsl(const RgbF& c, double& h, double& s, double& l);
// HSV with s = v = 1 (high-contrast hues).
RgbF hue_to_rgb(double h);

}  // namespace gwrl::env
