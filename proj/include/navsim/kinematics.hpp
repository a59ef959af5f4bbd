#pragma once

#include <cmath>
#include <vector>

namespace navsim {

/// Wrap an angle into (-pi, pi].
inline double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, kept in (-pi, pi]

  bool operator==(const Pose&) const = default;
};

/// Chassis command: linear and angular velocity. Limits live in wheel
/// space, see clamp_twist.
struct Twist {
  double v = 0.0;  // m/s
  double w = 0.0;  // rad/s

  bool operator==(const Twist&) const = default;
};

struct WheelSpeeds {
  double left = 0.0;   // m/s
  double right = 0.0;  // m/s
};

struct KinematicParams {
  double half_track = 0.25;  // m, half the wheel separation
  double v_max = 1.0;        // m/s, per-wheel speed limit
  double dt = 0.1;           // s, control period

  bool valid() const { return half_track > 0.0 && v_max > 0.0 && dt > 0.0; }

  /// Angular rate limit at v = 0 (wheels at +-v_max).
  double w_max() const { return v_max / half_track; }
};

struct Trajectory {
  std::vector<Pose> poses;
  double dt = 0.0;  // s between consecutive poses
};

Twist wheels_to_twist(const WheelSpeeds& ws, const KinematicParams& p);
WheelSpeeds twist_to_wheels(const Twist& t, const KinematicParams& p);

/// Scale both wheels by a common factor so the faster one hits v_max.
/// Preserves direction and curvature of the commanded arc.
Twist clamp_twist(const Twist& t, const KinematicParams& p);

/// Forward Euler step of the unicycle model.
Pose step_euler(const Pose& pose, const Twist& cmd, double dt);

/// Repeated Euler steps under a constant command; poses.size() ==
/// horizon_steps + 1 and poses.front() == pose.
Trajectory rollout(const Pose& pose, const Twist& cmd, int horizon_steps,
                   double dt);

}  // namespace navsim
