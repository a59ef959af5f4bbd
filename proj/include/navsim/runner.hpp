#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navsim/config.hpp"
#include "navsim/costmap.hpp"
#include "navsim/dwa_planner.hpp"
#include "navsim/ekf.hpp"
#include "navsim/global_planner.hpp"
#include "navsim/mapping.hpp"
#include "navsim/mpc_planner.hpp"
#include "navsim/sim_world.hpp"

namespace navsim {

enum class PlannerKind { Dwa, Mpc };
enum class Outcome { Success, Collision, Timeout, Blocked, Unreachable };

const char* outcome_name(Outcome o);
const char* planner_name(PlannerKind p);
PlannerKind planner_from_name(const std::string& name);

struct ScenarioConfig {
  std::string scenario = "straight_obstacle";  // builtin name or map file
  PlannerKind planner = PlannerKind::Mpc;
  std::uint64_t seed = 1;
  double max_time = 60.0;     // s
  double goal_tol_xy = 0.25;  // m
  double goal_tol_theta = M_PI;  // rad; default ignores final heading
  double blocked_timeout = 3.0;  // s of persistent blocked before giving up
  int global_update_period = 20;  // cycles between global map rebuilds
  double local_window_size = 4.0;  // m
  // Beams longer than this are clipped to free space before feeding the
  // online map. Distant endpoints smear badly under heading-estimate
  // error (a 0.1 rad error displaces an 8 m endpoint by 0.8 m) and can
  // paint unvisited regions as occupied.
  double mapping_use_range = 4.0;  // m

  // A kept path is dropped and replanned when any of its poses sits on
  // a cell at or above this cost. Below untraversable (254) so routes
  // move away from an expanding inflation band before the robot is
  // pinned against it.
  int path_invalid_cost = 240;

  KinematicParams kinematics;
  LidarConfig lidar;
  NoiseModel noise;
  EkfConfig ekf;
  MappingConfig mapping;  // log-odds increments for the online map
  InflationConfig inflation;
  std::uint8_t unknown_cost = 0;
  PlannerConfig global_planner;
  DwaConfig dwa;
  MpcConfig mpc;

  // Start/goal override for map-file scenarios (builtin scenarios carry
  // their own).
  bool has_start_goal = false;
  Pose start, goal;

  /// Apply dotted keys ("mpc.horizon", "noise.gyro_std", ...) on top of
  /// the current values.
  void apply(const KvConfig& kv);
  static ScenarioConfig defaults_with_noise();
};

struct RunRow {
  double time = 0.0;
  Pose true_pose;
  Pose est_pose;
  double v = 0.0, w = 0.0;
  double score = 0.0;  // planner score (DWA) or objective (MPC)
  bool blocked = false;
  double plan_ms = 0.0;  // not part of the record file
};

struct RunRecord {
  std::vector<RunRow> rows;
  Outcome outcome = Outcome::Timeout;
  std::vector<Pose> global_path;  // last planned path
  ScenarioWorld world;
};

struct Metrics {
  bool success = false;
  double time_to_goal = 0.0;   // s
  double path_length = 0.0;    // m, true trajectory
  double tracking_rmse = 0.0;  // m vs global path
  double v_std = 0.0;
  double w_std = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
  double mean_plan_ms = 0.0;
};

RunRecord run_scenario(const ScenarioConfig& cfg);
Metrics compute_metrics(const RunRecord& rec, const std::vector<Pose>& path);

struct ComparePair {
  std::uint64_t seed = 0;
  Metrics dwa;
  Metrics mpc;
};

struct CompareReport {
  std::string scenario;
  std::vector<ComparePair> pairs;
  int dwa_success = 0;
  int mpc_success = 0;
  int mpc_w_std_lower = 0;   // count of seeds with mpc.w_std < dwa.w_std
  int mpc_rmse_lower = 0;    // count of seeds with mpc rmse < dwa rmse
};

/// Pairwise DWA-vs-MPC comparison over matched (scenario, seed) runs.
CompareReport compare(const std::string& scenario,
                      const std::vector<ComparePair>& pairs);

}  // namespace navsim
