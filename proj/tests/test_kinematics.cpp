#include <doctest.h>

#include <cmath>

#include "navsim/kinematics.hpp"
#include "navsim/rng.hpp"

using namespace navsim;

namespace {
const KinematicParams kDefault{0.25, 1.0, 0.1};
}

TEST_CASE("wheels_to_twist") {
  KinematicParams p = kDefault;
  Twist t = wheels_to_twist({1.0, 1.0}, p);
  CHECK(t.v == 1.0);
  CHECK(t.w == 0.0);

  t = wheels_to_twist({-0.5, 0.5}, p);
  CHECK(t.v == 0.0);
  CHECK(t.w == 2.0);

  p.half_track = 0.2;
  t = wheels_to_twist({0.3, 0.7}, p);
  CHECK(t.v == doctest::Approx(0.5));
  CHECK(t.w == doctest::Approx(1.0));
}

TEST_CASE("twist_to_wheels") {
  KinematicParams p = kDefault;
  WheelSpeeds ws = twist_to_wheels({1.0, 0.0}, p);
  CHECK(ws.left == 1.0);
  CHECK(ws.right == 1.0);

  p.half_track = 0.2;
  ws = twist_to_wheels({0.5, 1.0}, p);
  CHECK(ws.left == doctest::Approx(0.3));
  CHECK(ws.right == doctest::Approx(0.7));

  p.half_track = 0.25;
  ws = twist_to_wheels({0.0, 2.0}, p);
  CHECK(ws.left == -0.5);
  CHECK(ws.right == 0.5);
}

// Exactness needs every intermediate to be representable: dyadic inputs
// on a fine grid with power-of-two track widths make v ± w·h, the sums
// and the divisions all exact, so the identity holds bit-for-bit.
TEST_CASE("round trip is exact") {
  Rng rng(42);
  const double half_tracks[] = {0.0625, 0.125, 0.25, 0.5};
  auto dyadic = [&](double lo, double hi) {
    const double step = 0x1.0p-26;
    const auto n = static_cast<long long>((hi - lo) / step);
    return lo + step * static_cast<double>(
                           static_cast<long long>(rng.uniform(0.0, 1.0) * n));
  };
  for (int i = 0; i < 10000; ++i) {
    KinematicParams p = kDefault;
    p.half_track = half_tracks[i % 4];
    const Twist t{dyadic(-4.0, 4.0), dyadic(-8.0, 8.0)};
    const Twist back = wheels_to_twist(twist_to_wheels(t, p), p);
    CHECK(back.v == t.v);
    CHECK(back.w == t.w);
  }
}

TEST_CASE("clamp_twist") {
  KinematicParams p = kDefault;
  p.v_max = 2.0;
  Twist t = clamp_twist({1.0, 0.0}, p);
  CHECK(t.v == 1.0);
  CHECK(t.w == 0.0);

  p.v_max = 1.0;
  t = clamp_twist({2.0, 0.0}, p);
  CHECK(t.v == doctest::Approx(1.0));
  CHECK(t.w == 0.0);

  t = clamp_twist({0.0, 8.0}, p);
  CHECK(t.v == doctest::Approx(0.0));
  CHECK(t.w == doctest::Approx(4.0));

  CHECK(clamp_twist({0.0, 0.0}, p).v == 0.0);
}

TEST_CASE("clamp_twist idempotent, sign and curvature preserving") {
  Rng rng(3);
  KinematicParams p = kDefault;
  for (int i = 0; i < 500; ++i) {
    const Twist t{rng.uniform(-4.0, 4.0), rng.uniform(-10.0, 10.0)};
    const Twist c = clamp_twist(t, p);
    const WheelSpeeds ws = twist_to_wheels(c, p);
    CHECK(std::abs(ws.left) <= p.v_max + 1e-12);
    CHECK(std::abs(ws.right) <= p.v_max + 1e-12);

    const Twist cc = clamp_twist(c, p);
    CHECK(cc.v == doctest::Approx(c.v).epsilon(1e-12));
    CHECK(cc.w == doctest::Approx(c.w).epsilon(1e-12));

    CHECK(c.v * t.v >= 0.0);
    CHECK(c.w * t.w >= 0.0);
    if (std::abs(t.v) > 1e-9 && std::abs(c.v) > 1e-9) {
      CHECK(c.w / c.v == doctest::Approx(t.w / t.v).epsilon(1e-9));
    }
  }
}

TEST_CASE("step_euler hand values") {
  Pose p = step_euler({0, 0, 0}, {1.0, 0.0}, 0.1);
  CHECK(p.x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(p.y == 0.0);
  CHECK(p.theta == 0.0);

  p = step_euler({0, 0, M_PI / 2}, {1.0, 0.0}, 0.1);
  CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(p.theta == doctest::Approx(M_PI / 2));

  p = step_euler({0, 0, 0}, {1.0, 1.0}, 0.1);
  CHECK(p.x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(p.y == 0.0);
  CHECK(p.theta == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("rollout") {
  Trajectory traj = rollout({0, 0, 0}, {1.0, 0.0}, 5, 0.1);
  REQUIRE(traj.poses.size() == 6);
  CHECK(traj.poses.front() == Pose{0, 0, 0});
  CHECK(traj.poses.back().x == doctest::Approx(0.5));
  CHECK(traj.poses.back().y == 0.0);

  traj = rollout({0.3, -0.2, 1.0}, {0.0, 0.0}, 7, 0.1);
  for (const Pose& p : traj.poses) {
    CHECK(p.x == 0.3);
    CHECK(p.y == -0.2);
    CHECK(p.theta == 1.0);
  }
}

// Independent scripted oracle: iterate the discrete update with plain
// arithmetic, no library calls shared with the implementation.
TEST_CASE("rollout against scripted iteration") {
  double x = 0, y = 0, th = 0;
  for (int i = 0; i < 10; ++i) {
    x += 1.0 * std::cos(th) * 0.1;
    y += 1.0 * std::sin(th) * 0.1;
    th += M_PI * 0.1;
  }
  Trajectory traj = rollout({0, 0, 0}, {1.0, M_PI}, 10, 0.1);
  CHECK(traj.poses.back().x == doctest::Approx(x).epsilon(1e-12));
  CHECK(traj.poses.back().y == doctest::Approx(y).epsilon(1e-12));
  CHECK(traj.poses.back().y > 0.0);
  CHECK(std::abs(traj.poses.back().theta) == doctest::Approx(M_PI));
}

TEST_CASE("normalize_angle is identity on (-pi, pi]") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-M_PI + 1e-12, M_PI);
    CHECK(normalize_angle(a) == a);
  }
  CHECK(normalize_angle(M_PI) == M_PI);
  CHECK(normalize_angle(-M_PI) == M_PI);
  CHECK(normalize_angle(3 * M_PI) == doctest::Approx(M_PI));
}

// Halving the Euler step at least halves the error against the exact
// unicycle arc (first-order convergence).
TEST_CASE("euler substep convergence to closed-form arc") {
  const double v = 1.0, w = 1.0, total = 1.0;
  // Closed form: x = (v/w) sin(wt), y = (v/w)(1 - cos(wt)).
  const double ex = (v / w) * std::sin(w * total);
  const double ey = (v / w) * (1.0 - std::cos(w * total));

  auto pose_error = [&](int k) {
    Pose p{0, 0, 0};
    const double dt = total / k;
    for (int i = 0; i < k; ++i) p = step_euler(p, {v, w}, dt);
    return std::hypot(p.x - ex, p.y - ey);
  };

  double prev = pose_error(8);
  for (int k = 16; k <= 256; k *= 2) {
    const double cur = pose_error(k);
    CHECK(cur <= prev / 2.0 * 1.1);  // allow 10% slack on the constant
    prev = cur;
  }
}
