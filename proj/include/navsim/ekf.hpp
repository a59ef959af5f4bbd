#pragma once

#include <Eigen/Dense>

#include "navsim/kinematics.hpp"

namespace navsim {

/// State vector: (x, y, theta, v, w). Constant-velocity prediction, so
/// wheel odometry (v, w) and the gyro (w) are direct linear
/// observations.
struct EkfState {
  Eigen::Matrix<double, 5, 1> mean = Eigen::Matrix<double, 5, 1>::Zero();
  Eigen::Matrix<double, 5, 5> cov = Eigen::Matrix<double, 5, 5>::Identity();

  Pose pose() const { return Pose{mean(0), mean(1), mean(2)}; }
  Twist twist() const { return Twist{mean(3), mean(4)}; }

  static EkfState from(const Pose& p, const Twist& t,
                       double initial_var = 1e-4);
};

struct EkfConfig {
  // Process noise per second, diagonal over (x, y, theta, v, w).
  Eigen::Matrix<double, 5, 1> process_noise{1e-4, 1e-4, 1e-4, 0.05, 0.1};
  Eigen::Vector2d odom_noise{1e-3, 4e-3};  // variances for (v, w)
  double gyro_noise = 1e-4;                // variance for w
};

/// Transition function underlying the filter: one Euler step with the
/// state's own (v, w) held constant.
Eigen::Matrix<double, 5, 1> ekf_transition(
    const Eigen::Matrix<double, 5, 1>& x, double dt);

/// Jacobian of ekf_transition at x.
Eigen::Matrix<double, 5, 5> ekf_transition_jacobian(
    const Eigen::Matrix<double, 5, 1>& x, double dt);

EkfState ekf_predict(const EkfState& s, double dt, const EkfConfig& cfg);

/// Fuse a wheel-odometry twist reading. Non-finite measurements leave
/// the state untouched.
EkfState ekf_update_odom(const EkfState& s, const Twist& z,
                         const EkfConfig& cfg);

/// Fuse a gyro yaw-rate reading.
EkfState ekf_update_gyro(const EkfState& s, double w_meas,
                         const EkfConfig& cfg);

}  // namespace navsim
