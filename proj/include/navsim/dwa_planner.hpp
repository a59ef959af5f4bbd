#pragma once

#include <vector>

#include "navsim/costmap.hpp"
#include "navsim/kinematics.hpp"

namespace navsim {

struct DwaConfig {
  int v_samples = 11;
  int w_samples = 21;
  double accel_v = 1.0;  // m/s^2
  double accel_w = 4.5;  // rad/s^2
  double sim_time = 2.0;  // s, rollout horizon
  double sim_dt = 0.1;    // s
  double heading_w = 0.8;
  double clearance_w = 0.2;
  double velocity_w = 0.2;
  double clearance_cap = 0.5;   // m
  double lookahead_dist = 1.0;  // m along the global path
};

struct VelocityWindow {
  double v_lo = 0.0, v_hi = 0.0;
  double w_lo = 0.0, w_hi = 0.0;
};

struct ScoredTrajectory {
  Twist command;
  Trajectory trajectory;
  double heading_score = 0.0;
  double clearance_score = 0.0;
  double velocity_score = 0.0;
  double total = 0.0;
  bool feasible = false;
};

struct DwaResult {
  Twist command;
  bool blocked = false;
  ScoredTrajectory best;
  std::vector<ScoredTrajectory> samples;
};

/// Velocities reachable within one control cycle, intersected with the
/// absolute wheel limits. Linear velocity is forward-only.
VelocityWindow dynamic_window(const Twist& current, const DwaConfig& cfg,
                              const KinematicParams& params, double dt_cycle);

/// Index of the path pose closest to the robot.
std::size_t nearest_path_index(const std::vector<Pose>& path,
                               const Pose& robot);

/// First path pose at least `dist` of arc length past the nearest one;
/// falls back to the path end.
Pose lookahead_point(const std::vector<Pose>& path, const Pose& robot,
                     double dist);

/// Score one rollout against the lookahead target and the local
/// costmap distance field. A pose on cost >= 254 marks the trajectory
/// infeasible.
ScoredTrajectory score_trajectory(const Trajectory& traj, const Twist& cmd,
                                  const Pose& lookahead, const CostMap& cm,
                                  const std::vector<float>& lethal_dist,
                                  const DwaConfig& cfg,
                                  const KinematicParams& params);

/// Sample the dynamic window, roll out and score every command, then
/// select by the weighted sum of per-cycle min-max normalized component
/// scores (samples[i].total holds that normalized sum). When nothing is
/// feasible the result is flagged blocked and carries a rotate-in-place
/// recovery command.
DwaResult dwa_plan(const Pose& pose, const Twist& current,
                   const std::vector<Pose>& global_path, const CostMap& cm,
                   const std::vector<float>& lethal_dist, const DwaConfig& cfg,
                   const KinematicParams& params);

}  // namespace navsim
