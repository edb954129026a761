#include "gwrl/env/simple_shapes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gwrl::env::ss {

namespace {

double wrap_2pi(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

// Point-in-shape test in the local frame: u is the lateral axis, v points
// toward the shape apex ("up" on screen at theta = 0). Sizes in pixels.
bool inside_local(Shape shape, double size, double u, double v) {
  switch (shape) {
    case Shape::triangle: {
      // Isosceles, apex (0, s/2), base corners (+-0.4 s, -s/2).
      if (v < -0.5 * size || v > 0.5 * size) return false;
      const double half_width = 0.4 * size * (0.5 * size - v) / size;
      return std::abs(u) <= half_width;
    }
    case Shape::diamond: {
      // Rhombus: vertical semi-diagonal s/2, horizontal 0.35 s.
      return std::abs(u) / (0.35 * size) + std::abs(v) / (0.5 * size) <= 1.0;
    }
    case Shape::egg: {
      // Two half-ellipses sharing the horizontal axis; taller above it.
      const double w = 0.3 * size;
      const double semi = v >= 0 ? 0.6 * size : 0.4 * size;
      const double a = u / w;
      const double b = v / semi;
      return a * a + b * b <= 1.0;
    }
  }
  return false;
}

}  // namespace

double wrapped_angle(double theta) {
  const double t = wrap_2pi(theta);
  return std::min(t, kTwoPi - t);
}

double reward(const ShapeState& s) {
  const double dx = s.x - kCenter;
  const double dy = s.y - kCenter;
  return -std::sqrt(dx * dx + dy * dy) - 10.0 * wrapped_angle(s.theta);
}

bool is_goal(const ShapeState& s) {
  return std::abs(s.x - kCenter) < kGoalPosTol && std::abs(s.y - kCenter) < kGoalPosTol &&
         wrapped_angle(s.theta) < kGoalAngleTol;
}

ShapeState sample_state(util::Rng& rng) {
  ShapeState s;
  do {
    s.shape = static_cast<Shape>(rng.uniform_int(0, 2));
    s.size = rng.uniform(kSizeMin, kSizeMax);
    s.x = rng.uniform(kPosLo, kPosHi);
    s.y = rng.uniform(kPosLo, kPosHi);
    s.theta = rng.uniform(0.0, kTwoPi);
    s.hue = rng.uniform(0.0, 1.0);
    s.sat = rng.uniform(0.0, 1.0);
    s.lightness = rng.uniform(kLightnessMin, 1.0);
  } while (is_goal(s));
  return s;
}

Transition step(const ShapeState& s, Action a) {
  ShapeState n = s;
  auto try_move = [](double& coord, double delta) {
    const double proposed = coord + delta;
    if (proposed >= kPosLo && proposed < kPosHi) coord = proposed;
  };
  switch (a) {
    case Action::left: try_move(n.x, -1.0); break;
    case Action::right: try_move(n.x, 1.0); break;
    case Action::up: try_move(n.y, -1.0); break;
    case Action::down: try_move(n.y, 1.0); break;
    case Action::rot_cw: n.theta = wrap_2pi(n.theta - kRotStep); break;
    case Action::rot_ccw: n.theta = wrap_2pi(n.theta + kRotStep); break;
  }
  return {n, reward(n), is_goal(n)};
}

Image render(const ShapeState& s) {
  constexpr int kSuper = 4;
  constexpr double kInv = 1.0 / kSuper;
  const RgbF fill = hsl_to_rgb(s.hue, s.sat, s.lightness);

  // Screen "up" at theta = 0 is decreasing row index; theta rotates the
  // pointing direction clockwise on screen.
  const double point_x = std::sin(s.theta);
  const double point_y = -std::cos(s.theta);
  const double lat_x = std::cos(s.theta);
  const double lat_y = std::sin(s.theta);

  Image img;
  img.height = kImageSize;
  img.width = kImageSize;
  img.rgb.assign(static_cast<std::size_t>(kImageSize) * kImageSize * 3, 0);

  // Shape axis-aligned bound: max half-extent is 0.6 * size (egg apex).
  const double r = 0.6 * s.size + 1.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(s.x - r)));
  const int x1 = std::min(kImageSize - 1, static_cast<int>(std::ceil(s.x + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(s.y - r)));
  const int y1 = std::min(kImageSize - 1, static_cast<int>(std::ceil(s.y + r)));

  for (int py = y0; py <= y1; ++py) {
    for (int px = x0; px <= x1; ++px) {
      int hits = 0;
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          const double wx = px + (sx + 0.5) * kInv - s.x;
          const double wy = py + (sy + 0.5) * kInv - s.y;
          const double u = wx * lat_x + wy * lat_y;
          const double v = wx * point_x + wy * point_y;
          if (inside_local(s.shape, s.size, u, v)) ++hits;
        }
      }
      if (hits == 0) continue;
      const double cov = static_cast<double>(hits) / (kSuper * kSuper);
      auto* px_ptr = &img.rgb[(static_cast<std::size_t>(py) * kImageSize + px) * 3];
      px_ptr[0] = static_cast<std::uint8_t>(std::lround(fill.r * cov * 255.0));
      px_ptr[1] = static_cast<std::uint8_t>(std::lround(fill.g * cov * 255.0));
      px_ptr[2] = static_cast<std::uint8_t>(std::lround(fill.b * cov * 255.0));
    }
  }
  return img;
}

AttrVec to_attributes(const ShapeState& s) {
  const RgbF c = hsl_to_rgb(s.hue, s.sat, s.lightness);
  AttrVec v(kAttrDim, 0.0f);
  v[static_cast<int>(s.shape)] = 1.0f;
  const double half_span = (kPosHi - kPosLo) / 2.0;  // 9
  v[3] = static_cast<float>((s.x - kCenter) / half_span);
  v[4] = static_cast<float>((s.y - kCenter) / half_span);
  v[5] = static_cast<float>((s.size - (kSizeMin + kSizeMax) / 2.0) / ((kSizeMax - kSizeMin) / 2.0));
  v[6] = static_cast<float>(std::cos(s.theta));
  v[7] = static_cast<float>(std::sin(s.theta));
  v[8] = static_cast<float>(2.0 * c.r - 1.0);
  v[9] = static_cast<float>(2.0 * c.g - 1.0);
  v[10] = static_cast<float>(2.0 * c.b - 1.0);
  return v;
}

ShapeState from_attributes(const AttrVec& v, bool strict_onehot) {
  if (v.size() != kAttrDim) {
    throw std::invalid_argument("from_attributes: expected 11 components");
  }
  int arg = 0;
  for (int i = 1; i < 3; ++i) {
    if (v[i] > v[arg]) arg = i;
  }
  if (strict_onehot) {
    int ties = 0;
    for (int i = 0; i < 3; ++i) {
      if (v[i] == v[arg]) ++ties;
    }
    if (ties != 1) {
      throw std::invalid_argument("from_attributes: shape block has no unique argmax");
    }
  }
  ShapeState s;
  s.shape = static_cast<Shape>(arg);
  const double half_span = (kPosHi - kPosLo) / 2.0;
  s.x = kCenter + v[3] * half_span;
  s.y = kCenter + v[4] * half_span;
  s.size = (kSizeMin + kSizeMax) / 2.0 + v[5] * (kSizeMax - kSizeMin) / 2.0;
  s.theta = wrap_2pi(std::atan2(static_cast<double>(v[7]), static_cast<double>(v[6])));
  const RgbF c{(v[8] + 1.0) / 2.0, (v[9] + 1.0) / 2.0, (v[10] + 1.0) / 2.0};
  rgb_to_hsl(c, s.hue, s.sat, s.lightness);
  return s;
}

Action greedy_action(const ShapeState& s) {
  Action best = Action::left;
  double best_r = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kNumActions; ++a) {
    const Transition t = step(s, static_cast<Action>(a));
    if (t.reward > best_r) {
      best_r = t.reward;
      best = static_cast<Action>(a);
    }
  }
  return best;
}

Observation SimpleShapesEnv::observe() const {
  Observation o;
  o.attr = to_attributes(state_);
  if (render_enabled_) o.image = render(state_);
  return o;
}

Observation SimpleShapesEnv::reset(std::uint64_t seed) {
  util::Rng rng(seed);
  state_ = sample_state(rng);
  steps_ = 0;
  done_ = false;
  return observe();
}

StepResult SimpleShapesEnv::step(Action a) {
  if (done_) {
    throw std::logic_error("SimpleShapesEnv::step called on a finished episode");
  }
  const Transition t = ss::step(state_, a);
  state_ = t.state;
  ++steps_;
  StepResult r;
  r.reward = t.reward;
  r.terminated = t.terminated;
  r.truncated = !t.terminated && steps_ >= kEpisodeCap;
  done_ = r.terminated || r.truncated;
  r.obs = observe();
  return r;
}

}  // namespace gwrl::env::ss
