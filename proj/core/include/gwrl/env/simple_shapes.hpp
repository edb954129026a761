#pragma once

#include <array>
#include <cstdint>

#include "gwrl/env/types.hpp"
#include "gwrl/util/rng.hpp"

namespace gwrl::env::ss {

inline constexpr int kImageSize = 32;
inline constexpr double kSizeMin = 7.0;
inline constexpr double kSizeMax = 14.0;
inline constexpr double kLightnessMin = 0.4;
inline constexpr double kPosLo = kSizeMax / 2.0;          // 7
inline constexpr double kPosHi = kImageSize - kPosLo;     // 25, exclusive
inline constexpr double kCenter = kImageSize / 2.0;       // 16
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kRotStep = kTwoPi / 64.0;         // pi/32
inline constexpr double kGoalPosTol = 0.5;
inline constexpr double kGoalAngleTol = kRotStep / 2.0;   // pi/64
inline constexpr int kEpisodeCap = 200;
inline constexpr int kAttrDim = 11;
inline constexpr const char* kRendererVersion = "ss-raster-1";

enum class Shape : int { egg = 0, triangle = 1, diamond = 2 };

struct ShapeState {
  Shape shape = Shape::egg;
  double size = kSizeMin;   // pixels
  double x = kCenter;       // [kPosLo, kPosHi)
  double y = kCenter;
  double theta = 0.0;       // [0, 2pi)
  double hue = 0.0;         // HSL, [0,1]
  double sat = 0.0;         // [0,1]
  double lightness = 1.0;   // [kLightnessMin, 1]
};

enum class Action : int { left = 0, right = 1, up = 2, down = 3, rot_cw = 4, rot_ccw = 5 };
inline constexpr int kNumActions = 6;

// Smallest angle between theta and 0, in [0, pi].
double wrapped_angle(double theta);

// r = -sqrt((x-16)^2 + (y-16)^2) - 10 * wrapped_angle(theta)
double reward(const ShapeState& s);

bool is_goal(const ShapeState& s);

// Uniform over the attribute domains; never lands inside the goal tolerance
// (rejection on that measure-~5e-5 region), so fresh episodes are never
// already terminal.
ShapeState sample_state(util::Rng& rng);

struct Transition {
  ShapeState state;
  double reward = 0.0;
  bool terminated = false;
};

// Pure. Moves by one pixel (blocked when the move would leave the position
// domain) or rotates by pi/32. Reward evaluated on the successor state.
Transition step(const ShapeState& s, Action a);

// 32x32x3, anti-aliased with 4x4 supersampling, black background.
Image render(const ShapeState& s);

// [one-hot(shape) | x,y scaled | size scaled | cos,sin theta | rgb scaled],
// every component in [-1, 1].
AttrVec to_attributes(const ShapeState& s);

// Inverse of to_attributes. With strict_onehot, a shape block without a
// unique argmax is rejected (std::invalid_argument); otherwise argmax decodes.
ShapeState from_attributes(const AttrVec& v, bool strict_onehot = false);

// One-step-lookahead controller: picks the action whose successor state has
// the highest reward. Used as the analytic upper baseline.
Action greedy_action(const ShapeState& s);

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

// Episodic wrapper: 200-step cap, truncation reported separately from goal
// termination. Image rendering can be switched off for attribute-only
// consumers.
class SimpleShapesEnv {
public:
  using ActionT = Action;
  static constexpr bool kDiscrete = true;
  static constexpr int kActionCount = kNumActions;

  Observation reset(std::uint64_t seed);
  StepResult step(Action a);

  const ShapeState& state() const { return state_; }
  int elapsed_steps() const { return steps_; }
  void set_render_enabled(bool on) { render_enabled_ = on; }

  Observation observe() const;

private:
  ShapeState state_;
  int steps_ = 0;
  bool done_ = true;
  bool render_enabled_ = true;
};

}  // namespace gwrl::env::ss
