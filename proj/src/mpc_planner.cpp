#include "navsim/mpc_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "navsim/dwa_planner.hpp"

namespace navsim {

ReferenceWindow extract_reference(const std::vector<Pose>& path,
                                  const Pose& pose, const MpcConfig& cfg,
                                  const KinematicParams& params) {
  if (path.empty()) {
    throw std::invalid_argument("extract_reference: empty path");
  }
  const int n = cfg.horizon;
  ReferenceWindow win;
  win.poses.reserve(n + 1);
  win.inputs.reserve(n);

  // Cumulative arc length of the path polyline.
  std::vector<double> arc(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    arc[i] = arc[i - 1] + std::hypot(path[i].x - path[i - 1].x,
                                     path[i].y - path[i - 1].y);
  }
  const double s0 = arc[nearest_path_index(path, pose)];
  const double v_ref = cfg.cruise_frac * params.v_max;

  auto raw_at = [&](double s, double& x, double& y) {
    if (s <= 0.0 || path.size() == 1) {
      x = path.front().x;
      y = path.front().y;
      return;
    }
    if (s >= arc.back()) {
      x = path.back().x;
      y = path.back().y;
      return;
    }
    std::size_t seg = 0;
    while (seg + 1 < path.size() && arc[seg + 1] < s) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double t = len > 0.0 ? (s - arc[seg]) / len : 0.0;
    x = path[seg].x + t * (path[seg + 1].x - path[seg].x);
    y = path[seg].y + t * (path[seg + 1].y - path[seg].y);
  };

  // Resample the window onto a fine spine and smooth it with a short
  // moving average: grid paths zig-zag at cell scale and a reference
  // that tracks those wiggles makes the solution oscillate. The spine
  // starts a little behind the robot so the averaging window has
  // support on both sides at the window start.
  const double kFine = 0.025;
  const double s_lo = std::max(0.0, s0 - 0.15);
  // Generous margin past the window: smoothing both compresses the
  // spine's arc length and distorts its final half-window, and the
  // walked window must stay clear of that zone.
  const double s_hi = std::min(arc.back(), s0 + n * v_ref * params.dt + 0.9);
  const double span = s_hi - s_lo;
  const int m = std::max(2, static_cast<int>(std::ceil(span / kFine)) + 1);
  std::vector<double> fx(m), fy(m);
  for (int i = 0; i < m; ++i) {
    raw_at(s_lo + span * i / (m - 1.0), fx[i], fy[i]);
  }
  // The averaging window is clipped, not shrunk, at the spine start:
  // right after a replan the robot sits at the path start, and a
  // shrinking window would leave the grid staircase kinks there
  // unsmoothed. Only the final point stays pinned so the reference
  // still ends exactly on the goal.
  for (int pass = 0; pass < 2; ++pass) {
    const std::vector<double> sx = fx, sy = fy;
    for (int i = 0; i + 1 < m; ++i) {
      const int right = std::min(12, m - 1 - i);
      const int lo = i - std::min({12, i, right < 12 ? right : 12});
      const int hi = i + right;
      double ax = 0.0, ay = 0.0;
      for (int j = lo; j <= hi; ++j) {
        ax += sx[j];
        ay += sy[j];
      }
      fx[i] = ax / (hi - lo + 1);
      fy[i] = ay / (hi - lo + 1);
    }
  }
  std::vector<double> farc(m, 0.0);
  for (int i = 1; i < m; ++i) {
    farc[i] = farc[i - 1] + std::hypot(fx[i] - fx[i - 1], fy[i] - fy[i - 1]);
  }
  const bool goal_in_window = s_hi >= arc.back() - 1e-9;

  auto sample = [&](double s) {
    if (s >= farc.back()) {
      if (goal_in_window) return path.back();
      Pose p{fx[m - 1], fy[m - 1],
             std::atan2(fy[m - 1] - fy[m - 2], fx[m - 1] - fx[m - 2])};
      return p;
    }
    int seg = 0;
    while (seg + 1 < m && farc[seg + 1] < s) ++seg;
    const double len = farc[seg + 1] - farc[seg];
    const double t = len > 0.0 ? (s - farc[seg]) / len : 0.0;
    const int a = std::max(0, seg - 2);
    const int b = std::min(m - 1, seg + 3);
    Pose p;
    p.x = fx[seg] + t * (fx[seg + 1] - fx[seg]);
    p.y = fy[seg] + t * (fy[seg + 1] - fy[seg]);
    p.theta = std::atan2(fy[b] - fy[a], fx[b] - fx[a]);
    return p;
  };

  auto input_between = [&](const Pose& a, const Pose& b) {
    Twist u;
    u.v = std::hypot(b.x - a.x, b.y - a.y) / params.dt;
    u.w = normalize_angle(b.theta - a.theta) / params.dt;
    return u;
  };

  // Walk the path with a step that shrinks wherever the implied input
  // exceeds the wheel limits (sharp bends), so the reference slows and
  // pivots instead of demanding an infeasible jump. The walk is
  // anchored at the smoothed point nearest the robot: smoothing moves
  // the spine, so mapping the raw arc position onto it would start the
  // window with a phantom tracking error.
  int i0 = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const double dx = fx[i] - pose.x;
    const double dy = fy[i] - pose.y;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      i0 = i;
    }
  }
  double s = farc[i0];
  win.poses.push_back(sample(s));
  for (int k = 0; k < n; ++k) {
    double ds = v_ref * params.dt;
    Pose next = sample(s + ds);
    Twist u = input_between(win.poses.back(), next);
    for (int pass = 0; pass < 2; ++pass) {
      double scale = 1.0;
      const Twist uc = clamp_twist(u, params);
      if (u.v > 1e-9 && uc.v < u.v - 1e-12) {
        scale = std::min(scale, uc.v / u.v);
      }
      if (std::abs(u.w) > cfg.ref_w_max && u.v > 1e-9) {
        scale = std::min(scale, cfg.ref_w_max / std::abs(u.w));
      }
      if (scale >= 1.0) break;
      // Never shrink to a standstill: a bend sharper than the rate cap
      // allows is walked at a floor speed with the implied input
      // clamped, instead of stalling the whole reference.
      ds = std::max(ds * scale, 0.1 * v_ref * params.dt);
      next = sample(s + ds);
      u = input_between(win.poses.back(), next);
    }
    s += ds;
    win.poses.push_back(next);
    win.inputs.push_back(clamp_twist(u, params));
  }
  return win;
}

void linearize(const Pose& ref_pose, const Twist& ref_input, double dt,
               Eigen::Matrix3d& a, Eigen::Matrix<double, 3, 2>& b) {
  const double c = std::cos(ref_pose.theta);
  const double s = std::sin(ref_pose.theta);
  a = Eigen::Matrix3d::Identity();
  a(0, 2) = -ref_input.v * s * dt;
  a(1, 2) = ref_input.v * c * dt;
  b.setZero();
  b(0, 0) = c * dt;
  b(1, 0) = s * dt;
  b(2, 1) = dt;
}

std::vector<Twist> solve_tracking_qp(const ReferenceWindow& window,
                                     const Eigen::Vector3d& x0_deviation,
                                     const MpcConfig& cfg,
                                     const KinematicParams& params,
                                     QpSolveInfo* info) {
  const int n = static_cast<int>(window.inputs.size());
  if (n < 1 || static_cast<int>(window.poses.size()) != n + 1) {
    throw std::invalid_argument("solve_tracking_qp: malformed window");
  }
  const int m = 2 * n;

  // Twist <-> wheel change of variables. Deviations are optimized in
  // wheel space so the Eq.-style per-wheel bound is a separable box.
  const double h = params.half_track;
  Eigen::Matrix2d t_wheel_to_twist;
  t_wheel_to_twist << 0.5, 0.5, -1.0 / (2.0 * h), 1.0 / (2.0 * h);

  // Condensing: x_k = phi_k x0 + sum_j g_(k,j) u_j, rows stacked for
  // k = 1..n.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3 * n, m);
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(3 * n, 3);
  Eigen::Matrix3d a_cum = Eigen::Matrix3d::Identity();
  for (int k = 0; k < n; ++k) {
    Eigen::Matrix3d a_k;
    Eigen::Matrix<double, 3, 2> b_k;
    linearize(window.poses[k], window.inputs[k], params.dt, a_k, b_k);
    if (k > 0) {
      g.middleRows(3 * k, 3) = a_k * g.middleRows(3 * (k - 1), 3);
    }
    g.block(3 * k, 2 * k, 3, 2) = b_k * t_wheel_to_twist;
    a_cum = a_k * a_cum;
    phi.middleRows(3 * k, 3) = a_cum;
  }

  Eigen::VectorXd q_diag(3 * n);
  for (int k = 0; k < n; ++k) {
    q_diag.segment(3 * k, 3) =
        k == n - 1 ? cfg.terminal_weight + cfg.state_weight : cfg.state_weight;
  }
  Eigen::Matrix2d r_wheel = t_wheel_to_twist.transpose() *
                            cfg.input_weight.asDiagonal() * t_wheel_to_twist;

  Eigen::MatrixXd hess = 2.0 * g.transpose() * (q_diag.asDiagonal() * g);
  for (int k = 0; k < n; ++k) {
    hess.block(2 * k, 2 * k, 2, 2) += 2.0 * r_wheel;
  }
  const Eigen::VectorXd lin =
      2.0 * g.transpose() * (q_diag.asDiagonal() * (phi * x0_deviation));

  // Box on absolute wheel speeds.
  Eigen::VectorXd lo(m), hi(m);
  for (int k = 0; k < n; ++k) {
    const WheelSpeeds ref = twist_to_wheels(window.inputs[k], params);
    lo(2 * k) = -params.v_max - ref.left;
    hi(2 * k) = params.v_max - ref.left;
    lo(2 * k + 1) = -params.v_max - ref.right;
    hi(2 * k + 1) = params.v_max - ref.right;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
  const double lip = std::max(eig.eigenvalues().maxCoeff(), 1e-12);
  const double alpha = 1.0 / lip;

  auto objective = [&](const Eigen::VectorXd& u) {
    return 0.5 * u.dot(hess * u) + lin.dot(u);
  };

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  u = u.cwiseMax(lo).cwiseMin(hi);
  QpSolveInfo local;
  local.objectives.push_back(objective(u));
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    Eigen::VectorXd next =
        (u - alpha * (hess * u + lin)).cwiseMax(lo).cwiseMin(hi);
    if (!next.allFinite()) {
      local.ok = false;
      break;
    }
    local.last_step_norm = (next - u).norm();
    u = next;
    local.objectives.push_back(objective(u));
    if (local.last_step_norm < cfg.step_tol) {
      ++it;
      break;
    }
  }
  local.iterations = it;
  if (info) *info = local;

  std::vector<Twist> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector2d tw = t_wheel_to_twist * u.segment<2>(2 * k);
    out.push_back(Twist{tw(0), tw(1)});
  }
  return out;
}

namespace {

Trajectory rollout_inputs(const Pose& start, const std::vector<Twist>& inputs,
                          double dt) {
  Trajectory traj;
  traj.dt = dt;
  traj.poses.push_back(start);
  for (const Twist& u : inputs) {
    traj.poses.push_back(step_euler(traj.poses.back(), u, dt));
  }
  return traj;
}

/// Index of the first predicted pose on an untraversable cell, or -1.
int first_collision(const Trajectory& traj, const CostMap& cm) {
  for (std::size_t i = 0; i < traj.poses.size(); ++i) {
    int c, r;
    if (cm.world_to_cell(traj.poses[i].x, traj.poses[i].y, c, r) &&
        cm.cost[cm.idx(c, r)] >= kCostInscribed) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::vector<Twist> absolute_inputs(const ReferenceWindow& win,
                                   const std::vector<Twist>& deltas,
                                   const KinematicParams& params) {
  std::vector<Twist> abs;
  abs.reserve(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    abs.push_back(clamp_twist(
        Twist{win.inputs[k].v + deltas[k].v, win.inputs[k].w + deltas[k].w},
        params));
  }
  return abs;
}

}  // namespace

MpcResult mpc_plan(const Pose& pose, const Twist& current,
                   const std::vector<Pose>& global_path, const CostMap& cm,
                   const MpcConfig& cfg, const KinematicParams& params) {
  if (global_path.empty()) {
    throw std::invalid_argument("mpc_plan: empty global path");
  }
  ReferenceWindow win = extract_reference(global_path, pose, cfg, params);
  const Eigen::Vector3d x0{
      pose.x - win.poses[0].x, pose.y - win.poses[0].y,
      normalize_angle(pose.theta - win.poses[0].theta)};

  QpSolveInfo qinfo;
  std::vector<Twist> deltas =
      solve_tracking_qp(win, x0, cfg, params, &qinfo);

  auto blocked_recovery = [&]() {
    // Rotate in place only when genuinely misaligned with the path;
    // otherwise hold still. Blockages caused by transient sensor
    // artifacts in the online map clear within a cycle or two, and a
    // stationary wait keeps the command trace smooth. A persistent
    // blockage is terminated by the caller's blocked-time budget.
    const Pose target = lookahead_point(global_path, pose, 1.0);
    const double bearing = std::atan2(target.y - pose.y, target.x - pose.x);
    const double err = normalize_angle(bearing - pose.theta);
    MpcResult r;
    r.blocked = true;
    r.command = std::abs(err) > M_PI / 3
                    ? Twist{0.0, (err >= 0 ? 1.0 : -1.0) * params.w_max() / 2.0}
                    : Twist{0.0, 0.0};
    r.predicted = Trajectory{{pose}, params.dt};
    return r;
  };

  if (!qinfo.ok) return blocked_recovery();

  std::vector<Twist> inputs = absolute_inputs(win, deltas, params);
  Trajectory predicted = rollout_inputs(pose, inputs, params.dt);

  int hit = first_collision(predicted, cm);
  if (hit >= 0) {
    // A collision in the far half of the horizon is handled by the
    // receding horizon itself: the plan is re-solved next cycle long
    // before the robot gets there. Only a near collision warrants the
    // shifted re-solve / recovery below.
    const int keep_after = cfg.horizon / 2;

    // Shift the reference sideways (perpendicular to its heading, on
    // the side away from the blocking cell), tapered around the
    // collision index. A radial shift would push poses short of the
    // obstacle backwards along the path and make the solver reverse.
    // Poses whose shifted position would itself land on an
    // untraversable cell (e.g. the far wall of a narrow corridor) are
    // kept in place.
    int bc, br;
    cm.world_to_cell(predicted.poses[hit].x, predicted.poses[hit].y, bc, br);
    const double ox = cm.origin.x + (bc + 0.5) * cm.resolution;
    const double oy = cm.origin.y + (br + 0.5) * cm.resolution;

    ReferenceWindow shifted = win;
    for (std::size_t k = 0; k < shifted.poses.size(); ++k) {
      Pose& p = shifted.poses[k];
      const double nx = -std::sin(p.theta);
      const double ny = std::cos(p.theta);
      const double side = nx * (p.x - ox) + ny * (p.y - oy);
      const double sign = side >= 0.0 ? 1.0 : -1.0;
      const double taper = std::max(
          0.0, 1.0 - std::abs(static_cast<double>(k) - hit) / 8.0);
      const double sx = p.x + cfg.obstacle_shift * taper * sign * nx;
      const double sy = p.y + cfg.obstacle_shift * taper * sign * ny;
      if (cm.cost_at(sx, sy) < kCostInscribed) {
        p.x = sx;
        p.y = sy;
      }
    }
    MpcConfig heavy = cfg;
    heavy.state_weight(0) += cfg.obstacle_weight;
    heavy.state_weight(1) += cfg.obstacle_weight;

    const Eigen::Vector3d x0s{
        pose.x - shifted.poses[0].x, pose.y - shifted.poses[0].y,
        normalize_angle(pose.theta - shifted.poses[0].theta)};
    QpSolveInfo qinfo2;
    std::vector<Twist> deltas2 =
        solve_tracking_qp(shifted, x0s, heavy, params, &qinfo2);
    if (qinfo2.ok) {
      std::vector<Twist> inputs2 = absolute_inputs(shifted, deltas2, params);
      Trajectory predicted2 = rollout_inputs(pose, inputs2, params.dt);
      const int hit2 = first_collision(predicted2, cm);
      if (hit2 < 0 || hit2 > hit) {
        inputs = std::move(inputs2);
        predicted = std::move(predicted2);
        qinfo = qinfo2;
        hit = hit2;
      }
    }
    if (hit >= 0 && hit <= keep_after) return blocked_recovery();
  }

  if (std::getenv("NAVSIM_DBG2")) {
    std::fprintf(stderr,
                 "mpc dbg: pose=(%.2f,%.2f,%.2f) ref0=(%.2f,%.2f,%.2f) "
                 "refu0=(%.3f,%.3f) refu5=(%.3f,%.3f) x0=(%.2f,%.2f,%.2f) "
                 "u0=(%.3f,%.3f) hit=%d\n",
                 pose.x, pose.y, pose.theta, win.poses[0].x, win.poses[0].y,
                 win.poses[0].theta, win.inputs[0].v, win.inputs[0].w,
                 win.inputs[5].v, win.inputs[5].w, x0(0), x0(1), x0(2),
                 inputs.front().v, inputs.front().w, hit);
  }
  MpcResult res;
  res.command = inputs.front();
  res.command.v = std::clamp(res.command.v,
                             current.v - cfg.accel_v * params.dt,
                             current.v + cfg.accel_v * params.dt);
  res.command.w = std::clamp(res.command.w,
                             current.w - cfg.accel_w * params.dt,
                             current.w + cfg.accel_w * params.dt);
  res.command = clamp_twist(res.command, params);
  if (res.command.v != inputs.front().v || res.command.w != inputs.front().w) {
    inputs.front() = res.command;
    predicted = rollout_inputs(pose, inputs, params.dt);
  }
  res.predicted = std::move(predicted);
  res.objective = qinfo.objectives.back();
  return res;
}

}  // namespace navsim
