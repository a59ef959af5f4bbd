#include <doctest.h>

#include <cmath>
#include <numeric>

#include "navsim/sim_world.hpp"

using namespace navsim;

TEST_CASE("raycast on an empty grid returns max_range") {
  OccupancyGrid g = OccupancyGrid::make(100, 100, 0.05);
  CHECK(raycast(g, {2.5, 2.5, 0.0}, 0.0, 8.0) == 8.0);
  CHECK(raycast(g, {2.5, 2.5, 0.0}, 1.234, 3.0) == 3.0);
}

TEST_CASE("raycast hits a wall two meters ahead") {
  OccupancyGrid g = OccupancyGrid::make(100, 100, 0.05);
  // Vertical wall at x = 2.5 (one column of cells).
  for (int r = 0; r < 100; ++r) g.set(50, r, Cell::Occupied);
  const double d = raycast(g, {0.5, 2.5, 0.0}, 0.0, 8.0);
  CHECK(d >= 1.95);
  CHECK(d <= 2.05);
  // Independently: the wall's near face is exactly 2.0 m away.
  CHECK(d == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("raycast leaving the grid returns max_range") {
  OccupancyGrid g = OccupancyGrid::make(20, 20, 0.05);
  CHECK(raycast(g, {0.5, 0.5, 0.0}, M_PI, 8.0) == 8.0);
}

TEST_CASE("raycast from inside an occupied cell returns zero") {
  OccupancyGrid g = OccupancyGrid::make(20, 20, 0.05);
  g.fill_rect(0.4, 0.4, 0.6, 0.6, Cell::Occupied);
  CHECK(raycast(g, {0.5, 0.5, 0.0}, 0.0, 8.0) == 0.0);
}

TEST_CASE("raycast monotone under obstacle addition") {
  OccupancyGrid g = OccupancyGrid::make(80, 80, 0.05);
  g.fill_rect(2.0, 1.0, 2.2, 3.0, Cell::Occupied);
  const Pose from{0.4, 2.0, 0.0};
  std::vector<double> before;
  for (int i = 0; i < 64; ++i) {
    before.push_back(raycast(g, from, 2.0 * M_PI * i / 64.0, 8.0));
  }
  g.fill_rect(1.0, 0.6, 3.4, 0.9, Cell::Occupied);
  for (int i = 0; i < 64; ++i) {
    CHECK(raycast(g, from, 2.0 * M_PI * i / 64.0, 8.0) <= before[i]);
  }
}

TEST_CASE("simulate_scan zero noise equals raycast") {
  OccupancyGrid g = OccupancyGrid::make(80, 80, 0.05);
  g.fill_rect(2.5, 1.5, 3.0, 2.5, Cell::Occupied);
  LidarConfig cfg;
  cfg.num_beams = 90;
  Rng rng(5);
  const Pose pose{1.0, 2.0, 0.7};
  LaserScan scan = simulate_scan(g, pose, cfg, NoiseModel{}, rng);
  REQUIRE(scan.ranges.size() == 90);
  REQUIRE(scan.angles.size() == 90);
  for (int i = 0; i < 90; ++i) {
    CHECK(scan.ranges[i] ==
          raycast(g, pose, pose.theta + scan.angles[i], cfg.max_range));
  }
}

TEST_CASE("simulate_scan deterministic under the same seed") {
  OccupancyGrid g = OccupancyGrid::make(80, 80, 0.05);
  g.fill_rect(1.5, 1.5, 2.5, 2.5, Cell::Occupied);
  LidarConfig cfg;
  cfg.range_noise_std = 0.05;
  Rng a(77), b(77);
  LaserScan s1 = simulate_scan(g, {0.5, 0.5, 0.3}, cfg, NoiseModel{}, a);
  LaserScan s2 = simulate_scan(g, {0.5, 0.5, 0.3}, cfg, NoiseModel{}, b);
  CHECK(s1.ranges == s2.ranges);
}

TEST_CASE("four beams centered in a square room") {
  // 4 m interior with one-cell walls.
  OccupancyGrid g = OccupancyGrid::make(84, 84, 0.05);
  for (int i = 0; i < 84; ++i) {
    g.set(i, 0, Cell::Occupied);
    g.set(i, 83, Cell::Occupied);
    g.set(0, i, Cell::Occupied);
    g.set(83, i, Cell::Occupied);
  }
  LidarConfig cfg;
  cfg.num_beams = 4;
  Rng rng(1);
  const Pose center{2.1, 2.1, 0.0};
  LaserScan scan = simulate_scan(g, center, cfg, NoiseModel{}, rng);
  REQUIRE(scan.ranges.size() == 4);
  for (double r : scan.ranges) {
    CHECK(r == doctest::Approx(2.0).epsilon(0.05 / 2.0));
  }
}

TEST_CASE("full-circle scan drops the duplicate endpoint beam") {
  LidarConfig cfg;
  cfg.num_beams = 8;
  OccupancyGrid g = OccupancyGrid::make(40, 40, 0.05);
  Rng rng(1);
  LaserScan scan = simulate_scan(g, {1.0, 1.0, 0.0}, cfg, NoiseModel{}, rng);
  CHECK(scan.angles.front() == doctest::Approx(-M_PI));
  CHECK(scan.angles.back() ==
        doctest::Approx(-M_PI + 2.0 * M_PI * 7.0 / 8.0));
}

TEST_CASE("scan noise clips to [0, max_range]") {
  OccupancyGrid g = OccupancyGrid::make(40, 40, 0.05);
  g.fill_rect(1.0, 0.0, 1.05, 2.0, Cell::Occupied);
  LidarConfig cfg;
  cfg.range_noise_std = 3.0;  // absurd, to force clipping
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    LaserScan scan = simulate_scan(g, {0.95, 1.0, 0.0}, cfg, NoiseModel{}, rng);
    for (double r : scan.ranges) {
      CHECK(r >= 0.0);
      CHECK(r <= cfg.max_range);
    }
  }
}

TEST_CASE("step_sim zero noise keeps odometry on the true pose") {
  SimState st;
  st.true_pose = {1.0, 1.0, 0.5};
  st.odom_pose = st.true_pose;
  KinematicParams p;
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Twist cmd{0.4, 0.3};
    OdomReading r = step_sim(st, cmd, p, NoiseModel{}, rng);
    CHECK(r.odom.v == cmd.v);
    CHECK(r.odom.w == cmd.w);
    CHECK(r.gyro == cmd.w);
    CHECK(st.odom_pose.x == st.true_pose.x);
    CHECK(st.odom_pose.y == st.true_pose.y);
    CHECK(st.odom_pose.theta == st.true_pose.theta);
  }
  CHECK(st.time == doctest::Approx(20.0));
}

TEST_CASE("step_sim zero command leaves the state in place") {
  SimState st;
  st.true_pose = {2.0, 3.0, -1.0};
  st.odom_pose = st.true_pose;
  KinematicParams p;
  NoiseModel noise;
  noise.odom_v_std = 0.1;
  noise.odom_w_std = 0.1;
  noise.gyro_std = 0.02;
  Rng rng(4);
  OdomReading r = step_sim(st, Twist{0.0, 0.0}, p, noise, rng);
  CHECK(st.true_pose.x == 2.0);
  CHECK(st.true_pose.y == 3.0);
  CHECK(st.true_pose.theta == -1.0);
  // Multiplicative odom noise vanishes at zero command; gyro is additive.
  CHECK(r.odom.v == 0.0);
  CHECK(r.odom.w == 0.0);
  CHECK(r.gyro != 0.0);
  CHECK(std::abs(r.gyro) < 0.2);
}

TEST_CASE("rotation vibration inflates odometry yaw noise beyond gyro") {
  KinematicParams p;
  NoiseModel noise;
  noise.odom_w_std = 0.02;
  noise.rotation_vibration_std = 0.2;
  noise.gyro_std = 0.02;
  Rng rng(8);
  const Twist cmd{0.0, 1.0};
  double odom_sq = 0.0, gyro_sq = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    SimState st;
    OdomReading r = step_sim(st, cmd, p, noise, rng);
    odom_sq += (r.odom.w - cmd.w) * (r.odom.w - cmd.w);
    gyro_sq += (r.gyro - cmd.w) * (r.gyro - cmd.w);
  }
  CHECK(odom_sq / n > 4.0 * (gyro_sq / n));
}

TEST_CASE("step_sim trajectories are bit-identical across reruns") {
  auto run = [](std::uint64_t seed) {
    SimState st;
    st.true_pose = {1.0, 1.0, 0.0};
    st.odom_pose = st.true_pose;
    KinematicParams p;
    NoiseModel noise;
    noise.odom_v_std = 0.05;
    noise.odom_w_std = 0.05;
    noise.rotation_vibration_std = 0.1;
    noise.gyro_std = 0.01;
    Rng rng(seed);
    std::vector<double> trace;
    for (int i = 0; i < 100; ++i) {
      const Twist cmd{0.3, 0.2 * std::sin(0.1 * i)};
      OdomReading r = step_sim(st, cmd, p, noise, rng);
      trace.push_back(st.true_pose.x);
      trace.push_back(st.odom_pose.y);
      trace.push_back(r.odom.w);
      trace.push_back(r.gyro);
    }
    return trace;
  };
  CHECK(run(123) == run(123));
  CHECK(run(123) != run(124));
}

TEST_CASE("builtin scenarios are well-formed") {
  for (Scenario s : {Scenario::ObstacleField, Scenario::Corner,
                     Scenario::StraightObstacle}) {
    ScenarioWorld w = builtin_scenario(s);
    int col, row;
    REQUIRE(w.grid.world_to_cell(w.start.x, w.start.y, col, row));
    CHECK(w.grid.at(col, row) == Cell::Free);
    REQUIRE(w.grid.world_to_cell(w.goal.x, w.goal.y, col, row));
    CHECK(w.grid.at(col, row) == Cell::Free);
    CHECK_FALSE(footprint_collides(w.grid, w.start.x, w.start.y, 0.2));
    CHECK_FALSE(footprint_collides(w.grid, w.goal.x, w.goal.y, 0.2));
  }
}

namespace {

bool line_of_sight(const OccupancyGrid& g, const Pose& a, const Pose& b) {
  bool clear = true;
  traverse_ray(g, a.x, a.y, b.x, b.y, [&](int c, int r) {
    if (g.in_bounds(c, r) && g.at(c, r) == Cell::Occupied) {
      clear = false;
      return false;
    }
    return true;
  });
  return clear;
}

}  // namespace

TEST_CASE("straight corridor blocks the direct line") {
  ScenarioWorld w = builtin_scenario(Scenario::StraightObstacle);
  CHECK_FALSE(line_of_sight(w.grid, w.start, w.goal));
}

TEST_CASE("corner has no line of sight start to goal") {
  ScenarioWorld w = builtin_scenario(Scenario::Corner);
  CHECK_FALSE(line_of_sight(w.grid, w.start, w.goal));
}

TEST_CASE("scenario names round-trip") {
  for (Scenario s : {Scenario::ObstacleField, Scenario::Corner,
                     Scenario::StraightObstacle}) {
    CHECK(scenario_from_name(scenario_name(s)) == s);
  }
  CHECK_THROWS(scenario_from_name("bogus"));
}

TEST_CASE("footprint collision uses the closest point on the cell") {
  OccupancyGrid g = OccupancyGrid::make(40, 40, 0.05);
  g.fill_rect(1.0, 1.0, 1.05, 1.05, Cell::Occupied);
  CHECK(footprint_collides(g, 1.025, 1.025, 0.01));
  // Near face at x = 1.0, robot at x = 0.9: gap is exactly 0.1.
  CHECK(footprint_collides(g, 0.9, 1.025, 0.11));
  CHECK_FALSE(footprint_collides(g, 0.9, 1.025, 0.09));
  // Diagonal approach: corner distance sqrt(2)*0.075 from (0.925, 0.925).
  CHECK_FALSE(footprint_collides(g, 0.925, 0.925, 0.10));
  CHECK(footprint_collides(g, 0.925, 0.925, 0.11));
}
