#pragma once

#include <array>
#include <cstdint>

#include "gwrl/env/types.hpp"
#include "gwrl/util/rng.hpp"

namespace gwrl::env::fac {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kRoomHalf = 3.0;                 // 6 m x 6 m room
inline constexpr double kTableHalfLen = 0.5;             // 1.0 m x 0.6 m footprint
inline constexpr double kTableHalfWid = 0.3;
inline constexpr double kWallMargin = 0.8;               // footprint clearance at reset
inline constexpr double kCenterExclusion = 1.55;         // keeps spawns clear of the table
inline constexpr double kReachThreshold = 0.5;           // to the table rectangle
inline constexpr double kSpawnRadius = 0.5;
inline constexpr double kMaxForward = 0.05;              // metres / step
inline constexpr double kMaxTurn = kTwoPi / 32.0;        // pi/16 radians / step
inline constexpr double kCollisionPenalty = -10000.0;
inline constexpr int kEpisodeCap = 500;
inline constexpr int kImageSize = 128;
inline constexpr double kFov = kTwoPi / 4.0;             // 90 degrees
inline constexpr int kAttrDim = 10;
inline constexpr const char* kRendererVersion = "fac-raycast-1";

struct FactoryState {
  double robot_x = 0, robot_y = 0, robot_theta = 0;
  double table_x = 0, table_y = 0, table_theta = 0;
  double table_hue = 0;  // [0,1)
};

// Both components in [-1, 1]; rescaled internally to the physical bounds.
struct Action {
  double forward = 0;
  double turn = 0;
};

double robot_table_distance(const FactoryState& s);          // centre-to-centre
double distance_to_table_rect(const FactoryState& s);        // robot point to footprint
bool robot_inside_table(const FactoryState& s);
bool robot_outside_room(const FactoryState& s);

// r = -||robot - table|| - 10 * |angle(heading, table direction)|.
// Coincident positions use angle 0.
double reward(const FactoryState& s);

FactoryState sample_state(util::Rng& rng);

enum class Outcome { running, reached, collided, capped };

struct Transition {
  FactoryState state;
  double reward = 0.0;
  bool terminated = false;
  Outcome outcome = Outcome::running;
};

// Pure kinematics: rotate, then advance along the new heading. Wall or
// table-body contact terminates with the -10000 penalty added to the step
// reward; reaching the table (rect distance <= threshold) terminates with no
// extra term.
Transition step(const FactoryState& s, Action a);

// Egocentric 128x128 raycast strip: 90-degree FOV, grey walls, dark floor,
// black ceiling, table drawn as a block in the table hue (S = V = 1),
// occluding the wall behind it. The table is visible only inside the FOV.
Image render(const FactoryState& s);

// [x_r, y_r scaled | cos,sin theta_r | x_t, y_t scaled | cos,sin theta_t |
//  cos,sin 2*pi*hue]
AttrVec to_attributes(const FactoryState& s);
FactoryState from_attributes(const AttrVec& v);

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
  Outcome outcome = Outcome::running;
};

class FactoryEnv {
public:
  using ActionT = Action;
  static constexpr bool kDiscrete = false;
  static constexpr int kActionDim = 2;

  Observation reset(std::uint64_t seed);
  StepResult step(Action a);

  const FactoryState& state() const { return state_; }
  int elapsed_steps() const { return steps_; }
  void set_render_enabled(bool on) { render_enabled_ = on; }

  Observation observe() const;

private:
  FactoryState state_;
  int steps_ = 0;
  bool done_ = true;
  bool render_enabled_ = true;
};

}  // namespace gwrl::env::fac
