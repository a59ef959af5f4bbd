#include "navsim/dwa_planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "navsim/kernels.hpp"

namespace navsim {

VelocityWindow dynamic_window(const Twist& current, const DwaConfig& cfg,
                              const KinematicParams& params, double dt_cycle) {
  VelocityWindow win;
  win.v_lo = std::max(0.0, current.v - cfg.accel_v * dt_cycle);
  win.v_hi = std::min(params.v_max, current.v + cfg.accel_v * dt_cycle);
  const double w_max = params.w_max();
  win.w_lo = std::max(-w_max, current.w - cfg.accel_w * dt_cycle);
  win.w_hi = std::min(w_max, current.w + cfg.accel_w * dt_cycle);
  return win;
}

std::size_t nearest_path_index(const std::vector<Pose>& path,
                               const Pose& robot) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double dx = path[i].x - robot.x;
    const double dy = path[i].y - robot.y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Pose lookahead_point(const std::vector<Pose>& path, const Pose& robot,
                     double dist) {
  if (path.empty()) throw std::invalid_argument("lookahead: empty path");
  std::size_t i = nearest_path_index(path, robot);
  double acc = 0.0;
  while (i + 1 < path.size() && acc < dist) {
    const double dx = path[i + 1].x - path[i].x;
    const double dy = path[i + 1].y - path[i].y;
    acc += std::hypot(dx, dy);
    ++i;
  }
  return path[i];
}

ScoredTrajectory score_trajectory(const Trajectory& traj, const Twist& cmd,
                                  const Pose& lookahead, const CostMap& cm,
                                  const std::vector<float>& lethal_dist,
                                  const DwaConfig& cfg,
                                  const KinematicParams& params) {
  ScoredTrajectory out;
  out.command = cmd;
  out.trajectory = traj;
  out.feasible = true;

  std::vector<float> dists;
  dists.reserve(traj.poses.size());
  for (const Pose& p : traj.poses) {
    int c, r;
    if (cm.world_to_cell(p.x, p.y, c, r)) {
      if (cm.cost[cm.idx(c, r)] >= kCostInscribed) {
        out.feasible = false;
        break;
      }
      dists.push_back(lethal_dist[cm.idx(c, r)]);
    } else {
      dists.push_back(static_cast<float>(cfg.clearance_cap));
    }
  }
  if (!out.feasible) return out;

  const Pose& fin = traj.poses.back();
  const double bearing = std::atan2(lookahead.y - fin.y, lookahead.x - fin.x);
  const double err = std::abs(normalize_angle(bearing - fin.theta));
  out.heading_score = 1.0 - err / M_PI;

  const float min_d =
      kernels::ops().min_value(dists.data(), dists.size());
  out.clearance_score =
      std::min(static_cast<double>(min_d), cfg.clearance_cap) /
      cfg.clearance_cap;
  out.velocity_score = cmd.v / params.v_max;
  out.total = cfg.heading_w * out.heading_score +
              cfg.clearance_w * out.clearance_score +
              cfg.velocity_w * out.velocity_score;
  return out;
}

DwaResult dwa_plan(const Pose& pose, const Twist& current,
                   const std::vector<Pose>& global_path, const CostMap& cm,
                   const std::vector<float>& lethal_dist, const DwaConfig& cfg,
                   const KinematicParams& params) {
  if (global_path.empty()) {
    throw std::invalid_argument("dwa_plan: empty global path");
  }
  const Pose target = lookahead_point(global_path, pose, cfg.lookahead_dist);
  const VelocityWindow win = dynamic_window(current, cfg, params, params.dt);
  const int steps =
      std::max(1, static_cast<int>(std::lround(cfg.sim_time / cfg.sim_dt)));

  DwaResult res;
  res.samples.reserve(static_cast<std::size_t>(cfg.v_samples) *
                      cfg.w_samples);

  for (int iv = 0; iv < cfg.v_samples; ++iv) {
    const double fv =
        cfg.v_samples == 1 ? 0.0
                           : static_cast<double>(iv) / (cfg.v_samples - 1);
    for (int iw = 0; iw < cfg.w_samples; ++iw) {
      const double fw =
          cfg.w_samples == 1 ? 0.0
                             : static_cast<double>(iw) / (cfg.w_samples - 1);
      Twist cmd{win.v_lo + fv * (win.v_hi - win.v_lo),
                win.w_lo + fw * (win.w_hi - win.w_lo)};
      cmd = clamp_twist(cmd, params);

      res.samples.push_back(
          score_trajectory(rollout(pose, cmd, steps, cfg.sim_dt), cmd, target,
                           cm, lethal_dist, cfg, params));
    }
  }

  // Min-max normalize each component across this cycle's feasible
  // samples, then select by the weighted sum of normalized scores.
  double lo_h = 1.0, hi_h = 0.0, lo_c = 1.0, hi_c = 0.0, lo_v = 1.0,
         hi_v = 0.0;
  for (const ScoredTrajectory& st : res.samples) {
    if (!st.feasible) continue;
    lo_h = std::min(lo_h, st.heading_score);
    hi_h = std::max(hi_h, st.heading_score);
    lo_c = std::min(lo_c, st.clearance_score);
    hi_c = std::max(hi_c, st.clearance_score);
    lo_v = std::min(lo_v, st.velocity_score);
    hi_v = std::max(hi_v, st.velocity_score);
  }
  auto norm = [](double x, double lo, double hi) {
    return hi - lo > 1e-12 ? (x - lo) / (hi - lo) : 0.0;
  };
  int best_idx = -1;
  double best_total = -1.0;
  double best_abs_w = 0.0;
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    ScoredTrajectory& st = res.samples[i];
    if (!st.feasible) continue;
    st.total = cfg.heading_w * norm(st.heading_score, lo_h, hi_h) +
               cfg.clearance_w * norm(st.clearance_score, lo_c, hi_c) +
               cfg.velocity_w * norm(st.velocity_score, lo_v, hi_v);
    const double aw = std::abs(st.command.w);
    const bool better =
        st.total > best_total ||
        (st.total == best_total && best_idx >= 0 && aw < best_abs_w);
    if (best_idx < 0 || better) {
      best_idx = static_cast<int>(i);
      best_total = st.total;
      best_abs_w = aw;
    }
  }

  if (best_idx < 0) {
    // Everything collides within the horizon: rotate in place toward
    // the path and let the caller count blocked cycles.
    const double bearing = std::atan2(target.y - pose.y, target.x - pose.x);
    const double sign = normalize_angle(bearing - pose.theta) >= 0 ? 1.0 : -1.0;
    res.blocked = true;
    res.command = Twist{0.0, sign * params.w_max() / 2.0};
    return res;
  }
  res.best = res.samples[static_cast<std::size_t>(best_idx)];
  res.command = res.best.command;
  return res;
}

}  // namespace navsim
