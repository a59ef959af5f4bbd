#include "navsim/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace navsim {

Twist wheels_to_twist(const WheelSpeeds& ws, const KinematicParams& p) {
  return Twist{(ws.left + ws.right) / 2.0,
               (ws.right - ws.left) / (2.0 * p.half_track)};
}

WheelSpeeds twist_to_wheels(const Twist& t, const KinematicParams& p) {
  return WheelSpeeds{t.v - t.w * p.half_track, t.v + t.w * p.half_track};
}

Twist clamp_twist(const Twist& t, const KinematicParams& p) {
  const WheelSpeeds ws = twist_to_wheels(t, p);
  const double peak = std::max(std::abs(ws.left), std::abs(ws.right));
  if (peak <= p.v_max) return t;
  const double s = p.v_max / peak;
  return wheels_to_twist(WheelSpeeds{ws.left * s, ws.right * s}, p);
}

Pose step_euler(const Pose& pose, const Twist& cmd, double dt) {
  return Pose{pose.x + cmd.v * std::cos(pose.theta) * dt,
              pose.y + cmd.v * std::sin(pose.theta) * dt,
              normalize_angle(pose.theta + cmd.w * dt)};
}

Trajectory rollout(const Pose& pose, const Twist& cmd, int horizon_steps,
                   double dt) {
  Trajectory traj;
  traj.dt = dt;
  traj.poses.reserve(static_cast<std::size_t>(horizon_steps) + 1);
  traj.poses.push_back(pose);
  for (int i = 0; i < horizon_steps; ++i) {
    traj.poses.push_back(step_euler(traj.poses.back(), cmd, dt));
  }
  return traj;
}

}  // namespace navsim
