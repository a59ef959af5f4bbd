#pragma once

#include <string>
#include <vector>

#include "navsim/grid.hpp"
#include "navsim/kinematics.hpp"
#include "navsim/rng.hpp"

namespace navsim {

struct LidarConfig {
  int num_beams = 180;
  double fov = 2.0 * M_PI;       // radians
  double max_range = 8.0;        // m
  double range_noise_std = 0.0;  // m
};

struct LaserScan {
  std::vector<double> angles;  // robot frame, radians
  std::vector<double> ranges;  // m; == max_range means no hit
  double max_range = 0.0;
};

struct NoiseModel {
  double odom_v_std = 0.0;  // fraction of commanded v
  double odom_w_std = 0.0;  // fraction of commanded w
  double rotation_vibration_std = 0.0;  // rad/s per rad/s of |w|, odom only
  double gyro_std = 0.0;                // rad/s
};

struct SimState {
  Pose true_pose;
  Twist true_twist;
  Pose odom_pose;  // dead-reckoned from noisy odometry, drifts
  double time = 0.0;
};

struct OdomReading {
  Twist odom;    // noisy body twist from wheel encoders
  double gyro;   // noisy yaw rate
};

/// Distance along the ray from `from` at absolute angle `angle` to the
/// first Occupied cell edge, or max_range. Cells outside the grid count
/// as free. Starting inside an Occupied cell returns 0.
double raycast(const OccupancyGrid& grid, const Pose& from, double angle,
               double max_range);

/// num_beams rays spanning fov centered on the robot heading. For a
/// full-circle fov the endpoint beam is dropped so beams stay distinct;
/// otherwise the fov endpoints are included.
LaserScan simulate_scan(const OccupancyGrid& grid, const Pose& pose,
                        const LidarConfig& cfg, const NoiseModel& noise,
                        Rng& rng);

/// One simulator tick: the true pose integrates cmd exactly; odometry
/// and gyro readings are noisy views of cmd; odom_pose integrates the
/// odometry reading. cmd is expected to be feasible already.
OdomReading step_sim(SimState& state, const Twist& cmd,
                     const KinematicParams& params, const NoiseModel& noise,
                     Rng& rng);

enum class Scenario { ObstacleField, Corner, StraightObstacle };

struct ScenarioWorld {
  OccupancyGrid grid;
  Pose start;
  Pose goal;
};

ScenarioWorld builtin_scenario(Scenario s);

/// Name parsing for the CLI: obstacle_field, corner, straight_obstacle.
Scenario scenario_from_name(const std::string& name);
const char* scenario_name(Scenario s);

/// True when a disc of the given radius centered at (x, y) overlaps any
/// Occupied cell.
bool footprint_collides(const OccupancyGrid& grid, double x, double y,
                        double radius);

}  // namespace navsim
