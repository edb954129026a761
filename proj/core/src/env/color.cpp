#include "gwrl/env/types.hpp"

#include <algorithm>
#include <cmath>

namespace gwrl::env {

namespace {

double hue_segment(double p, double q, double t) {
  if (t < 0) t += 1;
  if (t > 1) t -= 1;
  if (t < 1.0 / 6.0) return p + (q - p) * 6.0 * t;
  if (t < 1.0 / 2.0) return q;
  if (t < 2.0 / 3.0) return p + (q - p) * (2.0 / 3.0 - t) * 6.0;
  return p;
}

}  // namespace

RgbF hsl_to_rgb(double h, double s, double l) {
  if (s <= 0.0) {
    return {l, l, l};
  }
  const double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
  const double p = 2 * l - q;
  return {hue_segment(p, q, h + 1.0 / 3.0), hue_segment(p, q, h), hue_segment(p, q, h - 1.0 / 3.0)};
}

void rgb_to_hsl(const RgbF& c, double& h, double& s, double& l) {
  const double mx = std::max({c.r, c.g, c.b});
  const double mn = std::min({c.r, c.g, c.b});
  l = (mx + mn) / 2.0;
  const double d = mx - mn;
  if (d <= 0.0) {
    h = 0.0;
    s = 0.0;
    return;
  }
  s = l > 0.5 ? d / (2.0 - mx - mn) : d / (mx + mn);
  if (mx == c.r) {
    h = (c.g - c.b) / d + (c.g < c.b ? 6.0 : 0.0);
  } else if (mx == c.g) {
    h = (c.b - c.r) / d + 2.0;
  } else {
    h = (c.r - c.g) / d + 4.0;
  }
  h /= 6.0;
  if (h >= 1.0) h -= 1.0;
}

RgbF hue_to_rgb(double h) {
  // HSV with s = v = 1.
  const double hp = (h - std::floor(h)) * 6.0;
  const int i = std::min(5, static_cast<int>(hp));
  const double f = hp - i;
  switch (i) {
    case 0: return {1, f, 0};
    case 1: return {1 - f, 1, 0};
    case 2: return {0, 1, f};
    case 3: return {0, 1 - f, 1};
    case 4: return {f, 0, 1};
    default: return {1, 0, 1 - f};
  }
}

}  // namespace gwrl::env
