#include "gwrl/env/factory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gwrl::env::fac {

namespace {

double wrap_2pi(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

// Robot position in the table's local frame (u along the long axis).
void to_table_frame(const FactoryState& s, double px, double py, double& u, double& v) {
  const double dx = px - s.table_x;
  const double dy = py - s.table_y;
  const double c = std::cos(s.table_theta);
  const double sn = std::sin(s.table_theta);
  u = dx * c + dy * sn;
  v = -dx * sn + dy * c;
}

// Positive ray parameter of the nearest wall hit; the caster is inside the
// room, so a hit always exists.
double ray_wall(double ox, double oy, double dx, double dy) {
  double best = std::numeric_limits<double>::infinity();
  if (dx > 1e-12) best = std::min(best, (kRoomHalf - ox) / dx);
  if (dx < -1e-12) best = std::min(best, (-kRoomHalf - ox) / dx);
  if (dy > 1e-12) best = std::min(best, (kRoomHalf - oy) / dy);
  if (dy < -1e-12) best = std::min(best, (-kRoomHalf - oy) / dy);
  return best;
}

// Slab test against the table footprint in its local frame. Returns the entry
// parameter, or infinity when the ray misses.
double ray_table(const FactoryState& s, double ox, double oy, double dx, double dy) {
  const double c = std::cos(s.table_theta);
  const double sn = std::sin(s.table_theta);
  const double lox = (ox - s.table_x) * c + (oy - s.table_y) * sn;
  const double loy = -(ox - s.table_x) * sn + (oy - s.table_y) * c;
  const double ldx = dx * c + dy * sn;
  const double ldy = -dx * sn + dy * c;

  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  const double half[2] = {kTableHalfLen, kTableHalfWid};
  const double lo[2] = {lox, loy};
  const double ld[2] = {ldx, ldy};
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(ld[axis]) < 1e-12) {
      if (std::abs(lo[axis]) > half[axis]) return std::numeric_limits<double>::infinity();
      continue;
    }
    double ta = (-half[axis] - lo[axis]) / ld[axis];
    double tb = (half[axis] - lo[axis]) / ld[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1 || t1 < 0) return std::numeric_limits<double>::infinity();
  return t0 > 0 ? t0 : std::numeric_limits<double>::infinity();
}

}  // namespace

double robot_table_distance(const FactoryState& s) {
  const double dx = s.robot_x - s.table_x;
  const double dy = s.robot_y - s.table_y;
  return std::sqrt(dx * dx + dy * dy);
}

double distance_to_table_rect(const FactoryState& s) {
  double u, v;
  to_table_frame(s, s.robot_x, s.robot_y, u, v);
  const double du = std::max(std::abs(u) - kTableHalfLen, 0.0);
  const double dv = std::max(std::abs(v) - kTableHalfWid, 0.0);
  return std::sqrt(du * du + dv * dv);
}

bool robot_inside_table(const FactoryState& s) {
  double u, v;
  to_table_frame(s, s.robot_x, s.robot_y, u, v);
  return std::abs(u) <= kTableHalfLen && std::abs(v) <= kTableHalfWid;
}

bool robot_outside_room(const FactoryState& s) {
  return std::abs(s.robot_x) >= kRoomHalf || std::abs(s.robot_y) >= kRoomHalf;
}

double reward(const FactoryState& s) {
  const double dx = s.table_x - s.robot_x;
  const double dy = s.table_y - s.robot_y;
  const double dist = std::sqrt(dx * dx + dy * dy);
  double angle = 0.0;
  if (dist > 1e-12) {
    const double dot =
        (std::cos(s.robot_theta) * dx + std::sin(s.robot_theta) * dy) / dist;
    angle = std::acos(std::clamp(dot, -1.0, 1.0));
  }
  return -dist - 10.0 * angle;
}

FactoryState sample_state(util::Rng& rng) {
  // Table centres stay kWallMargin clear of the walls for any rotation
  // (half-diagonal bound) and outside the spawn neighbourhood so no episode
  // starts reached or colliding.
  const double half_diag = std::sqrt(kTableHalfLen * kTableHalfLen + kTableHalfWid * kTableHalfWid);
  const double bound = kRoomHalf - kWallMargin - half_diag;
  FactoryState s;
  while (true) {
    s.table_x = rng.uniform(-bound, bound);
    s.table_y = rng.uniform(-bound, bound);
    if (s.table_x * s.table_x + s.table_y * s.table_y < kCenterExclusion * kCenterExclusion) {
      continue;
    }
    s.table_theta = rng.uniform(0.0, kTwoPi);
    s.table_hue = rng.uniform(0.0, 1.0);
    const double r = kSpawnRadius * std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, kTwoPi);
    s.robot_x = r * std::cos(a);
    s.robot_y = r * std::sin(a);
    s.robot_theta = rng.uniform(0.0, kTwoPi);
    if (distance_to_table_rect(s) > kReachThreshold + 0.2) break;
  }
  return s;
}

Transition step(const FactoryState& s, Action a) {
  const double forward = std::clamp(a.forward, -1.0, 1.0) * kMaxForward;
  const double turn = std::clamp(a.turn, -1.0, 1.0) * kMaxTurn;

  FactoryState n = s;
  n.robot_theta = wrap_2pi(n.robot_theta + turn);
  n.robot_x += forward * std::cos(n.robot_theta);
  n.robot_y += forward * std::sin(n.robot_theta);

  Transition t;
  t.state = n;
  t.reward = reward(n);
  if (robot_outside_room(n) || robot_inside_table(n)) {
    t.reward += kCollisionPenalty;
    t.terminated = true;
    t.outcome = Outcome::collided;
  } else if (distance_to_table_rect(n) <= kReachThreshold) {
    t.terminated = true;
    t.outcome = Outcome::reached;
  }
  return t;
}

Image render(const FactoryState& s) {
  constexpr int kW = kImageSize;
  constexpr int kH = kImageSize;
  constexpr double kFocal = kW / 2.0;        // 90-degree FOV pinhole
  constexpr double kWallHalfHeight = 0.5;    // metres
  constexpr double kTableHalfHeight = 0.25;

  const RgbF table_rgb = hue_to_rgb(s.table_hue);
  const std::uint8_t table_r = static_cast<std::uint8_t>(std::lround(table_rgb.r * 255));
  const std::uint8_t table_g = static_cast<std::uint8_t>(std::lround(table_rgb.g * 255));
  const std::uint8_t table_b = static_cast<std::uint8_t>(std::lround(table_rgb.b * 255));
  constexpr std::uint8_t kWallGrey = 120;
  constexpr std::uint8_t kFloorGrey = 45;

  Image img;
  img.height = kH;
  img.width = kW;
  img.rgb.assign(static_cast<std::size_t>(kH) * kW * 3, 0);

  const double fx = std::cos(s.robot_theta);
  const double fy = std::sin(s.robot_theta);
  const double rx = -fy;  // camera right
  const double ry = fx;

  for (int col = 0; col < kW; ++col) {
    const double screen = ((col + 0.5) / kW) * 2.0 - 1.0;  // [-1, 1]
    const double norm = std::sqrt(1.0 + screen * screen);
    const double dx = (fx + screen * rx) / norm;
    const double dy = (fy + screen * ry) / norm;
    const double cos_off = 1.0 / norm;  // forward component of the ray dir

    const double t_wall = ray_wall(s.robot_x, s.robot_y, dx, dy);
    const double t_table = ray_table(s, s.robot_x, s.robot_y, dx, dy);

    const double wall_depth = std::max(t_wall * cos_off, 1e-3);
    const int wall_half = static_cast<int>(kFocal * kWallHalfHeight / wall_depth);

    auto paint = [&](int row_lo, int row_hi, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
      row_lo = std::clamp(row_lo, 0, kH);
      row_hi = std::clamp(row_hi, 0, kH);
      for (int row = row_lo; row < row_hi; ++row) {
        auto* p = &img.rgb[(static_cast<std::size_t>(row) * kW + col) * 3];
        p[0] = r;
        p[1] = g;
        p[2] = b;
      }
    };

    const int horizon = kH / 2;
    paint(horizon + wall_half, kH, kFloorGrey, kFloorGrey, kFloorGrey);
    paint(horizon - wall_half, horizon + wall_half, kWallGrey, kWallGrey, kWallGrey);
    if (t_table < t_wall) {
      const double table_depth = std::max(t_table * cos_off, 1e-3);
      const int table_half = static_cast<int>(kFocal * kTableHalfHeight / table_depth);
      paint(horizon - table_half, horizon + table_half, table_r, table_g, table_b);
    }
  }
  return img;
}

AttrVec to_attributes(const FactoryState& s) {
  AttrVec v(kAttrDim, 0.0f);
  v[0] = static_cast<float>(s.robot_x / kRoomHalf);
  v[1] = static_cast<float>(s.robot_y / kRoomHalf);
  v[2] = static_cast<float>(std::cos(s.robot_theta));
  v[3] = static_cast<float>(std::sin(s.robot_theta));
  v[4] = static_cast<float>(s.table_x / kRoomHalf);
  v[5] = static_cast<float>(s.table_y / kRoomHalf);
  v[6] = static_cast<float>(std::cos(s.table_theta));
  v[7] = static_cast<float>(std::sin(s.table_theta));
  v[8] = static_cast<float>(std::cos(kTwoPi * s.table_hue));
  v[9] = static_cast<float>(std::sin(kTwoPi * s.table_hue));
  return v;
}

FactoryState from_attributes(const AttrVec& v) {
  if (v.size() != kAttrDim) {
    throw std::invalid_argument("from_attributes: expected 10 components");
  }
  FactoryState s;
  s.robot_x = v[0] * kRoomHalf;
  s.robot_y = v[1] * kRoomHalf;
  s.robot_theta = wrap_2pi(std::atan2(static_cast<double>(v[3]), static_cast<double>(v[2])));
  s.table_x = v[4] * kRoomHalf;
  s.table_y = v[5] * kRoomHalf;
  s.table_theta = wrap_2pi(std::atan2(static_cast<double>(v[7]), static_cast<double>(v[6])));
  s.table_hue = wrap_2pi(std::atan2(static_cast<double>(v[9]), static_cast<double>(v[8]))) / kTwoPi;
  if (s.table_hue >= 1.0) s.table_hue -= 1.0;
  return s;
}

Observation FactoryEnv::observe() const {
  Observation o;
  o.attr = to_attributes(state_);
  if (render_enabled_) o.image = render(state_);
  return o;
}

Observation FactoryEnv::reset(std::uint64_t seed) {
  util::Rng rng(seed);
  state_ = sample_state(rng);
  steps_ = 0;
  done_ = false;
  return observe();
}

StepResult FactoryEnv::step(Action a) {
  if (done_) {
    throw std::logic_error("FactoryEnv::step called on a finished episode");
  }
  const Transition t = fac::step(state_, a);
  state_ = t.state;
  ++steps_;
  StepResult r;
  r.reward = t.reward;
  r.terminated = t.terminated;
  r.truncated = !t.terminated && steps_ >= kEpisodeCap;
  r.outcome = r.truncated ? Outcome::capped : t.outcome;
  done_ = r.terminated || r.truncated;
  r.obs = observe();
  return r;
}

}  // namespace gwrl::env::fac
