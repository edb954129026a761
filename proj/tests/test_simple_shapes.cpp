#include <doctest.h>

#include <cmath>

#include "gwrl/env/simple_shapes.hpp"
#include "gwrl/exp/stats.hpp"
#include "gwrl/util/rng.hpp"

using namespace gwrl;
using namespace gwrl::env::ss;

namespace {
constexpr double kPi = 3.14159265358979323846;

ShapeState centered() {
  ShapeState s;
  s.shape = Shape::triangle;
  s.size = 10.0;
  s.x = 16.0;
  s.y = 16.0;
  s.theta = 0.0;
  s.hue = 0.3;
  s.sat = 0.8;
  s.lightness = 0.6;
  return s;
}
}  // namespace

TEST_CASE("reward matches the distance-plus-angle formula") {
  auto s = centered();
  CHECK(reward(s) == doctest::Approx(0.0).epsilon(1e-12));

  s.y = 19.0;
  CHECK(reward(s) == doctest::Approx(-3.0).epsilon(1e-12));

  s.y = 16.0;
  s.theta = kPi;
  CHECK(reward(s) == doctest::Approx(-10.0 * kPi).epsilon(1e-12));
}

TEST_CASE("reward oracle equivalence on random states") {
  util::Rng rng(123);
  for (int i = 0; i < 10000; ++i) {
    const auto s = sample_state(rng);
    // Independent route: brute-force the wrapped angle by scanning candidates.
    const double dist = std::hypot(s.x - 16.0, s.y - 16.0);
    double best_angle = 1e9;
    for (int k = -2; k <= 2; ++k) {
      best_angle = std::min(best_angle, std::abs(s.theta + 2.0 * kPi * k));
    }
    const double expected = -dist - 10.0 * best_angle;
    CHECK(reward(s) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("reward symmetries") {
  auto a = centered();
  auto b = centered();
  a.x = 16.0 + 4.25;
  b.x = 16.0 - 4.25;
  CHECK(reward(a) == doctest::Approx(reward(b)).epsilon(1e-12));

  a = centered();
  b = centered();
  a.theta = kRotStep;               // pi/32
  b.theta = 2.0 * kPi - kRotStep;   // wrapped distance identical
  CHECK(reward(a) == doctest::Approx(reward(b)).epsilon(1e-12));
}

TEST_CASE("step moves one pixel and rotations invert") {
  auto s = centered();
  s.x = 10.0;
  auto t = step(s, Action::right);
  CHECK(t.state.x == doctest::Approx(11.0));
  CHECK(t.state.y == doctest::Approx(16.0));

  auto u = step(step(s, Action::rot_ccw).state, Action::rot_cw);
  CHECK(u.state.theta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("boundary moves are blocked, reward still computed") {
  auto s = centered();
  s.x = 24.6;  // one step right would leave [7, 25)
  auto t = step(s, Action::right);
  CHECK(t.state.x == doctest::Approx(24.6));
  CHECK(t.reward == doctest::Approx(reward(t.state)));

  s.x = 7.0;
  t = step(s, Action::left);
  CHECK(t.state.x == doctest::Approx(7.0));
}

TEST_CASE("reset is deterministic and respects the domains") {
  SimpleShapesEnv a, b;
  a.set_render_enabled(false);
  b.set_render_enabled(false);
  a.reset(99);
  b.reset(99);
  CHECK(a.state().x == b.state().x);
  CHECK(a.state().theta == b.state().theta);
  CHECK(a.state().hue == b.state().hue);

  util::Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const auto s = sample_state(rng);
    CHECK(s.x >= kPosLo);
    CHECK(s.x < kPosHi);
    CHECK(s.y >= kPosLo);
    CHECK(s.y < kPosHi);
    CHECK(s.size >= kSizeMin);
    CHECK(s.size <= kSizeMax);
    CHECK(s.lightness >= kLightnessMin);
    CHECK_FALSE(is_goal(s));  // fresh episodes are never terminal
  }
}

TEST_CASE("render determinism, black background, periodicity") {
  auto s = centered();
  s.size = 8.0;
  const auto img1 = render(s);
  const auto img2 = render(s);
  CHECK(img1 == img2);
  REQUIRE(img1.height == 32);
  REQUIRE(img1.width == 32);

  // Small centered shape leaves the corners exactly black.
  auto corner = [&](int x, int y) {
    const auto* p = &img1.rgb[(static_cast<std::size_t>(y) * 32 + x) * 3];
    return static_cast<int>(p[0]) + p[1] + p[2];
  };
  CHECK(corner(0, 0) == 0);
  CHECK(corner(31, 0) == 0);
  CHECK(corner(0, 31) == 0);
  CHECK(corner(31, 31) == 0);

  auto wrapped = s;
  wrapped.theta = s.theta + 2.0 * kPi;
  CHECK(render(wrapped) == img1);

  // The shape actually appears.
  std::size_t lit = 0;
  for (const auto v : img1.rgb) lit += v > 0;
  CHECK(lit > 20);
}

TEST_CASE("attribute encoding round-trips") {
  auto s = centered();
  const auto v = to_attributes(s);
  REQUIRE(v.size() == 11);
  CHECK(v[0] == 0.0f);
  CHECK(v[1] == 1.0f);  // triangle one-hot block is (0,1,0)
  CHECK(v[2] == 0.0f);
  CHECK(v[6] == doctest::Approx(1.0));  // cos(0)
  CHECK(v[7] == doctest::Approx(0.0));  // sin(0)

  util::Rng rng(31);
  double max_err = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto st = sample_state(rng);
    const auto vec = to_attributes(st);
    for (const float c : vec) {
      CHECK(c >= -1.0f);
      CHECK(c <= 1.0f);
    }
    CHECK(vec[6] * vec[6] + vec[7] * vec[7] == doctest::Approx(1.0).epsilon(1e-6));
    const auto back = to_attributes(from_attributes(vec));
    for (std::size_t k = 0; k < vec.size(); ++k) {
      max_err = std::max(max_err, static_cast<double>(std::abs(vec[k] - back[k])));
    }
  }
  CHECK(max_err < 1e-5);
}

TEST_CASE("strict one-hot decoding rejects ties") {
  auto v = to_attributes(centered());
  v[0] = v[1];  // no unique argmax
  CHECK_THROWS_AS(from_attributes(v, /*strict_onehot=*/true), std::invalid_argument);
  CHECK_NOTHROW(from_attributes(v, /*strict_onehot=*/false));
}

TEST_CASE("greedy controller beats the random policy and terminates") {
  SimpleShapesEnv e;
  e.set_render_enabled(false);
  double greedy_total = 0;
  int terminated_count = 0;
  util::Rng arng(5);
  double random_total = 0;
  for (int ep = 0; ep < 200; ++ep) {
    e.reset(util::substream(77, static_cast<std::uint64_t>(ep)));
    while (true) {
      const auto r = e.step(greedy_action(e.state()));
      greedy_total += r.reward;
      if (r.terminated) {
        ++terminated_count;
        break;
      }
      if (r.truncated) break;
    }
    e.reset(util::substream(77, static_cast<std::uint64_t>(ep)));
    while (true) {
      const auto r = e.step(static_cast<Action>(arng.uniform_int(0, 5)));
      random_total += r.reward;
      if (r.terminated || r.truncated) break;
    }
  }
  CHECK(terminated_count == 200);  // greedy always reaches the goal within the cap
  CHECK(greedy_total > random_total);
}

TEST_CASE("episode cap reports truncation, not termination") {
  SimpleShapesEnv e;
  e.set_render_enabled(false);
  e.reset(3);
  // Alternate left/right forever: position oscillates, never reaches goal.
  int steps = 0;
  while (true) {
    const auto r = e.step(steps % 2 == 0 ? Action::left : Action::right);
    ++steps;
    if (r.truncated) {
      CHECK_FALSE(r.terminated);
      CHECK(steps == kEpisodeCap);
      break;
    }
    REQUIRE(steps <= kEpisodeCap);
  }
}
