#pragma once

#include <Eigen/Dense>
#include <vector>

#include "navsim/costmap.hpp"
#include "navsim/kinematics.hpp"

namespace navsim {

struct MpcConfig {
  int horizon = 20;
  Eigen::Vector3d state_weight{10.0, 10.0, 1.0};   // (x, y, theta)
  Eigen::Vector2d input_weight{1.0, 2.0};          // (v, w)
  Eigen::Vector3d terminal_weight{50.0, 50.0, 5.0};
  double obstacle_weight = 20.0;   // extra (x, y) weight on the re-solve
  double obstacle_shift = 0.5;     // m, lateral reference shift
  int max_iters = 200;
  double step_tol = 1e-6;
  double cruise_frac = 0.5;  // v_ref = cruise_frac * v_max
  // Cap on the reference angular rate: the walk slows down through
  // bends so tracking them stays smooth instead of demanding sharp
  // turns at cruise speed.
  double ref_w_max = 0.3;  // rad/s
  // Acceleration limits applied to the published command relative to
  // the currently executing twist. The solver's first input can jump
  // when the global path is rebuilt mid-run; slewing toward it keeps
  // the output trace smooth without changing the optimization.
  double accel_v = 1.0;  // m/s^2
  double accel_w = 1.5;  // rad/s^2
};

struct ReferenceWindow {
  std::vector<Pose> poses;    // horizon + 1
  std::vector<Twist> inputs;  // horizon, finite differences of poses
};

/// Sample horizon+1 reference poses forward along the path at arc
/// length v_ref * dt, starting from the point nearest the robot. The
/// path end is padded with the goal pose and zero inputs.
ReferenceWindow extract_reference(const std::vector<Pose>& path,
                                  const Pose& pose, const MpcConfig& cfg,
                                  const KinematicParams& params);

/// Discrete-time Jacobians of the unicycle Euler step at a reference
/// point: A = d(next state)/d(state), B = d(next state)/d(input).
void linearize(const Pose& ref_pose, const Twist& ref_input, double dt,
               Eigen::Matrix3d& a, Eigen::Matrix<double, 3, 2>& b);

struct QpSolveInfo {
  int iterations = 0;
  double last_step_norm = 0.0;
  std::vector<double> objectives;  // per accepted iterate
  bool ok = true;
};

/// Condensed LTV tracking QP solved by projected gradient descent.
/// Deviations are optimized in wheel-speed coordinates, where the
/// per-wheel speed limit is a separable box and the projection is a
/// clamp. The fixed step 1/lambda_max(H) makes the objective monotone
/// non-increasing. Returns the N input deviations (twist space).
std::vector<Twist> solve_tracking_qp(const ReferenceWindow& window,
                                     const Eigen::Vector3d& x0_deviation,
                                     const MpcConfig& cfg,
                                     const KinematicParams& params,
                                     QpSolveInfo* info = nullptr);

struct MpcResult {
  Twist command;
  Trajectory predicted;
  bool blocked = false;
  double objective = 0.0;
};

/// One receding-horizon cycle: reference extraction, linearization,
/// QP solve, collision check of the predicted trajectory. A colliding
/// prediction triggers one re-solve against a laterally shifted
/// reference; if that still collides the result is a blocked recovery
/// rotation.
MpcResult mpc_plan(const Pose& pose, const Twist& current,
                   const std::vector<Pose>& global_path, const CostMap& cm,
                   const MpcConfig& cfg, const KinematicParams& params);

}  // namespace navsim
