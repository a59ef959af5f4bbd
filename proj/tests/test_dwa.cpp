#include <doctest.h>

#include <cmath>

#include "navsim/dwa_planner.hpp"

using namespace navsim;

namespace {

const KinematicParams kParams{0.25, 1.0, 0.1};

std::vector<Pose> straight_path(double x0, double y, double x1, double step) {
  std::vector<Pose> path;
  for (double x = x0; x <= x1 + 1e-9; x += step) {
    path.push_back(Pose{x, y, 0.0});
  }
  return path;
}

}  // namespace

TEST_CASE("dynamic window hand values") {
  DwaConfig cfg;
  cfg.accel_v = 1.0;
  cfg.accel_w = 3.0;

  VelocityWindow w = dynamic_window(Twist{0, 0}, cfg, kParams, 0.2);
  CHECK(w.v_lo == doctest::Approx(0.0));
  CHECK(w.v_hi == doctest::Approx(0.2));

  w = dynamic_window(Twist{kParams.v_max, 0}, cfg, kParams, 0.2);
  CHECK(w.v_hi == doctest::Approx(kParams.v_max));

  DwaConfig cfg2 = cfg;
  cfg2.accel_v = 0.5;
  KinematicParams p2 = kParams;
  p2.v_max = 0.6;
  w = dynamic_window(Twist{0.5, 0}, cfg2, p2, 0.2);
  CHECK(w.v_lo == doctest::Approx(0.4));
  CHECK(w.v_hi == doctest::Approx(0.6));

  // Angular bound never exceeds the wheel-limit w_max.
  w = dynamic_window(Twist{0, 0}, cfg, kParams, 10.0);
  CHECK(w.w_hi <= kParams.w_max() + 1e-12);
  CHECK(w.w_lo >= -kParams.w_max() - 1e-12);
}

TEST_CASE("nearest path index and lookahead") {
  auto path = straight_path(0.0, 1.0, 5.0, 0.1);
  CHECK(nearest_path_index(path, Pose{2.04, 1.3, 0}) == 20);
  Pose look = lookahead_point(path, Pose{2.0, 1.0, 0}, 1.0);
  CHECK(look.x == doctest::Approx(3.0).epsilon(0.11));
  // Past the end: falls back to the final pose.
  look = lookahead_point(path, Pose{4.9, 1.0, 0}, 3.0);
  CHECK(look.x == doctest::Approx(5.0));
}

TEST_CASE("scoring components") {
  CostMap cm = CostMap::make(200, 200, 0.05, {});
  const auto dist = lethal_distance_field(cm);
  DwaConfig cfg;

  SUBCASE("straight toward the target in open space") {
    Trajectory traj = rollout(Pose{1, 1, 0}, Twist{0.5, 0.0}, 20, 0.1);
    ScoredTrajectory s = score_trajectory(traj, Twist{0.5, 0.0},
                                          Pose{5, 1, 0}, cm, dist, cfg,
                                          kParams);
    CHECK(s.feasible);
    CHECK(s.heading_score == doctest::Approx(1.0));
    CHECK(s.velocity_score == doctest::Approx(0.5));
    CHECK(s.clearance_score == doctest::Approx(1.0));  // no obstacles
    CHECK(s.total == doctest::Approx(cfg.heading_w + cfg.clearance_w +
                                     cfg.velocity_w * 0.5));
  }

  SUBCASE("trajectory through a lethal cell is infeasible") {
    CostMap blocked = cm;
    for (int r = 0; r < 200; ++r) {
      blocked.cost[blocked.idx(40, r)] = kCostLethal;
    }
    const auto bdist = lethal_distance_field(blocked);
    Trajectory traj = rollout(Pose{1, 1, 0}, Twist{0.8, 0.0}, 20, 0.1);
    ScoredTrajectory s = score_trajectory(traj, Twist{0.8, 0.0},
                                          Pose{5, 1, 0}, blocked, bdist, cfg,
                                          kParams);
    CHECK_FALSE(s.feasible);
  }

  SUBCASE("clearance saturates at the cap") {
    CostMap one = cm;
    one.cost[one.idx(100, 180)] = kCostLethal;  // far away
    const auto odist = lethal_distance_field(one);
    Trajectory traj = rollout(Pose{1, 1, 0}, Twist{0.5, 0.0}, 20, 0.1);
    ScoredTrajectory s = score_trajectory(traj, Twist{0.5, 0.0},
                                          Pose{5, 1, 0}, one, odist, cfg,
                                          kParams);
    CHECK(s.clearance_score == doctest::Approx(1.0));
  }
}

TEST_CASE("open corridor selects near-zero curvature") {
  CostMap cm = CostMap::make(200, 200, 0.05, {});
  const auto dist = lethal_distance_field(cm);
  DwaConfig cfg;
  auto path = straight_path(0.5, 5.0, 9.5, 0.05);
  DwaResult res = dwa_plan(Pose{1.0, 5.0, 0.0}, Twist{0.5, 0.0}, path, cm,
                           dist, cfg, kParams);
  CHECK_FALSE(res.blocked);
  const VelocityWindow win =
      dynamic_window(Twist{0.5, 0.0}, cfg, kParams, cfg.sim_dt);
  const double w_step = (win.w_hi - win.w_lo) / (cfg.w_samples - 1);
  CHECK(std::abs(res.command.w) <= w_step + 1e-9);
  CHECK(res.command.v > 0.0);
}

TEST_CASE("wall ahead forces the blocked recovery rotation") {
  CostMap cm = CostMap::make(200, 200, 0.05, {});
  // Robot boxed in against a wall immediately ahead.
  for (int r = 0; r < 200; ++r) {
    for (int c = 24; c < 200; ++c) cm.cost[cm.idx(c, r)] = kCostLethal;
  }
  const auto dist = lethal_distance_field(cm);
  DwaConfig cfg;
  auto path = straight_path(0.5, 5.0, 9.0, 0.05);
  DwaResult res = dwa_plan(Pose{1.0, 5.0, 0.0}, Twist{0.8, 0.0}, path, cm,
                           dist, cfg, kParams);
  CHECK(res.blocked);
  CHECK(res.command.v == 0.0);
  CHECK(std::abs(res.command.w) == doctest::Approx(kParams.w_max() / 2.0));
}

TEST_CASE("commands always satisfy the wheel limits") {
  CostMap cm = CostMap::make(200, 200, 0.05, {});
  for (int i = 0; i < 40; ++i) {
    cm.cost[cm.idx(60 + (i % 7), 90 + (i * 3) % 30)] = kCostLethal;
  }
  const auto dist = lethal_distance_field(cm);
  DwaConfig cfg;
  auto path = straight_path(0.5, 5.0, 9.0, 0.05);
  Twist cur{0.0, 0.0};
  Pose pose{1.0, 5.0, 0.0};
  for (int cycle = 0; cycle < 50; ++cycle) {
    DwaResult res = dwa_plan(pose, cur, path, cm, dist, cfg, kParams);
    const WheelSpeeds ws = twist_to_wheels(res.command, kParams);
    CHECK(std::abs(ws.left) <= kParams.v_max + 1e-9);
    CHECK(std::abs(ws.right) <= kParams.v_max + 1e-9);
    // Acceleration feasibility relative to the previous command.
    if (!res.blocked) {
      CHECK(res.command.v >=
            std::max(0.0, cur.v - cfg.accel_v * cfg.sim_dt) - 1e-9);
      CHECK(res.command.v <= cur.v + cfg.accel_v * cfg.sim_dt + 1e-9);
    }
    cur = res.command;
    pose = step_euler(pose, cur, 0.1);
  }
}

TEST_CASE("planner is deterministic") {
  CostMap cm = CostMap::make(200, 200, 0.05, {});
  for (int i = 0; i < 25; ++i) cm.cost[cm.idx(70, 80 + i)] = kCostLethal;
  const auto dist = lethal_distance_field(cm);
  DwaConfig cfg;
  auto path = straight_path(0.5, 5.0, 9.0, 0.05);
  DwaResult a = dwa_plan(Pose{1.2, 4.6, 0.1}, Twist{0.4, 0.1}, path, cm,
                         dist, cfg, kParams);
  DwaResult b = dwa_plan(Pose{1.2, 4.6, 0.1}, Twist{0.4, 0.1}, path, cm,
                         dist, cfg, kParams);
  CHECK(a.command.v == b.command.v);
  CHECK(a.command.w == b.command.w);
  CHECK(a.blocked == b.blocked);
}

TEST_CASE("best trajectory avoids lethal cells unless blocked") {
  CostMap cm = CostMap::make(200, 200, 0.05, {});
  for (int r = 95; r < 106; ++r) {
    for (int c = 55; c < 66; ++c) cm.cost[cm.idx(c, r)] = kCostLethal;
  }
  const auto dist = lethal_distance_field(cm);
  DwaConfig cfg;
  auto path = straight_path(0.5, 5.0, 9.0, 0.05);
  DwaResult res = dwa_plan(Pose{2.0, 5.0, 0.0}, Twist{0.5, 0.0}, path, cm,
                           dist, cfg, kParams);
  if (!res.blocked) {
    for (const Pose& p : res.best.trajectory.poses) {
      CHECK(cm.cost_at(p.x, p.y) < kCostInscribed);
    }
  }
}

TEST_CASE("empty path is rejected") {
  CostMap cm = CostMap::make(10, 10, 0.05, {});
  const auto dist = lethal_distance_field(cm);
  CHECK_THROWS(dwa_plan(Pose{0.2, 0.2, 0}, Twist{0, 0}, {}, cm, dist,
                        DwaConfig{}, kParams));
}
