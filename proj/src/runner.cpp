#include "navsim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace navsim {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Collision: return "collision";
    case Outcome::Timeout: return "timeout";
    case Outcome::Blocked: return "blocked";
    case Outcome::Unreachable: return "unreachable";
  }
  return "?";
}

const char* planner_name(PlannerKind p) {
  return p == PlannerKind::Dwa ? "dwa" : "mpc";
}

PlannerKind planner_from_name(const std::string& name) {
  if (name == "dwa") return PlannerKind::Dwa;
  if (name == "mpc") return PlannerKind::Mpc;
  throw std::invalid_argument("unknown planner: " + name);
}

ScenarioConfig ScenarioConfig::defaults_with_noise() {
  ScenarioConfig cfg;
  cfg.noise.odom_v_std = 0.02;
  cfg.noise.odom_w_std = 0.05;
  cfg.noise.rotation_vibration_std = 0.15;
  cfg.noise.gyro_std = 0.01;
  cfg.lidar.range_noise_std = 0.02;
  return cfg;
}

void ScenarioConfig::apply(const KvConfig& kv) {
  scenario = kv.get_str("run.scenario", scenario);
  if (kv.has("run.planner")) {
    planner = planner_from_name(kv.get_str("run.planner", ""));
  }
  seed = kv.get_u64("run.seed", seed);
  max_time = kv.get_double("run.max_time", max_time);
  goal_tol_xy = kv.get_double("run.goal_tol_xy", goal_tol_xy);
  goal_tol_theta = kv.get_double("run.goal_tol_theta", goal_tol_theta);
  blocked_timeout = kv.get_double("run.blocked_timeout", blocked_timeout);
  global_update_period =
      kv.get_int("run.global_update_period", global_update_period);
  local_window_size = kv.get_double("run.local_window_size", local_window_size);
  mapping_use_range =
      kv.get_double("run.mapping_use_range", mapping_use_range);
  path_invalid_cost = kv.get_int("run.path_invalid_cost", path_invalid_cost);
  if (kv.has("run.start_x") || kv.has("run.start_y")) {
    has_start_goal = true;
    start.x = kv.get_double("run.start_x", start.x);
    start.y = kv.get_double("run.start_y", start.y);
    start.theta = kv.get_double("run.start_theta", start.theta);
    goal.x = kv.get_double("run.goal_x", goal.x);
    goal.y = kv.get_double("run.goal_y", goal.y);
    goal.theta = kv.get_double("run.goal_theta", goal.theta);
  }

  kinematics.half_track = kv.get_double("kinematics.half_track",
                                        kinematics.half_track);
  kinematics.v_max = kv.get_double("kinematics.v_max", kinematics.v_max);
  kinematics.dt = kv.get_double("kinematics.dt", kinematics.dt);

  lidar.num_beams = kv.get_int("lidar.num_beams", lidar.num_beams);
  lidar.fov = kv.get_double("lidar.fov", lidar.fov);
  lidar.max_range = kv.get_double("lidar.max_range", lidar.max_range);
  lidar.range_noise_std =
      kv.get_double("lidar.range_noise_std", lidar.range_noise_std);

  noise.odom_v_std = kv.get_double("noise.odom_v_std", noise.odom_v_std);
  noise.odom_w_std = kv.get_double("noise.odom_w_std", noise.odom_w_std);
  noise.rotation_vibration_std = kv.get_double(
      "noise.rotation_vibration_std", noise.rotation_vibration_std);
  noise.gyro_std = kv.get_double("noise.gyro_std", noise.gyro_std);

  for (int i = 0; i < 5; ++i) {
    ekf.process_noise(i) = kv.get_double("ekf.process_noise_" +
                                             std::to_string(i),
                                         ekf.process_noise(i));
  }
  ekf.odom_noise(0) = kv.get_double("ekf.odom_noise_v", ekf.odom_noise(0));
  ekf.odom_noise(1) = kv.get_double("ekf.odom_noise_w", ekf.odom_noise(1));
  ekf.gyro_noise = kv.get_double("ekf.gyro_noise", ekf.gyro_noise);

  mapping.num_particles = kv.get_int("mapping.num_particles",
                                     mapping.num_particles);
  mapping.trans_std = kv.get_double("mapping.trans_std", mapping.trans_std);
  mapping.rot_std = kv.get_double("mapping.rot_std", mapping.rot_std);
  mapping.hit_sigma = kv.get_double("mapping.hit_sigma", mapping.hit_sigma);
  mapping.resample_neff_frac =
      kv.get_double("mapping.resample_neff_frac", mapping.resample_neff_frac);
  mapping.l_occ = kv.get_double("mapping.l_occ", mapping.l_occ);
  mapping.l_free = kv.get_double("mapping.l_free", mapping.l_free);
  mapping.l_max = kv.get_double("mapping.l_max", mapping.l_max);

  inflation.robot_radius =
      kv.get_double("costmap.robot_radius", inflation.robot_radius);
  inflation.inflation_radius =
      kv.get_double("costmap.inflation_radius", inflation.inflation_radius);
  inflation.decay_rate =
      kv.get_double("costmap.decay_rate", inflation.decay_rate);
  unknown_cost = static_cast<std::uint8_t>(
      kv.get_int("costmap.unknown_cost", unknown_cost));

  global_planner.cost_penalty =
      kv.get_double("planner.cost_penalty", global_planner.cost_penalty);
  global_planner.decimate =
      kv.get_int("planner.decimate", global_planner.decimate);

  dwa.v_samples = kv.get_int("dwa.v_samples", dwa.v_samples);
  dwa.w_samples = kv.get_int("dwa.w_samples", dwa.w_samples);
  dwa.accel_v = kv.get_double("dwa.accel_v", dwa.accel_v);
  dwa.accel_w = kv.get_double("dwa.accel_w", dwa.accel_w);
  dwa.sim_time = kv.get_double("dwa.sim_time", dwa.sim_time);
  dwa.sim_dt = kv.get_double("dwa.sim_dt", dwa.sim_dt);
  dwa.heading_w = kv.get_double("dwa.heading_w", dwa.heading_w);
  dwa.clearance_w = kv.get_double("dwa.clearance_w", dwa.clearance_w);
  dwa.velocity_w = kv.get_double("dwa.velocity_w", dwa.velocity_w);
  dwa.clearance_cap = kv.get_double("dwa.clearance_cap", dwa.clearance_cap);
  dwa.lookahead_dist = kv.get_double("dwa.lookahead_dist", dwa.lookahead_dist);

  mpc.horizon = kv.get_int("mpc.horizon", mpc.horizon);
  for (int i = 0; i < 3; ++i) {
    mpc.state_weight(i) = kv.get_double("mpc.q_" + std::to_string(i),
                                        mpc.state_weight(i));
    mpc.terminal_weight(i) = kv.get_double("mpc.qf_" + std::to_string(i),
                                           mpc.terminal_weight(i));
  }
  mpc.input_weight(0) = kv.get_double("mpc.r_v", mpc.input_weight(0));
  mpc.input_weight(1) = kv.get_double("mpc.r_w", mpc.input_weight(1));
  mpc.obstacle_weight = kv.get_double("mpc.obstacle_weight",
                                      mpc.obstacle_weight);
  mpc.obstacle_shift = kv.get_double("mpc.obstacle_shift", mpc.obstacle_shift);
  mpc.max_iters = kv.get_int("mpc.max_iters", mpc.max_iters);
  mpc.step_tol = kv.get_double("mpc.step_tol", mpc.step_tol);
  mpc.cruise_frac = kv.get_double("mpc.cruise_frac", mpc.cruise_frac);
  mpc.ref_w_max = kv.get_double("mpc.ref_w_max", mpc.ref_w_max);
}

namespace {

ScenarioWorld resolve_world(const ScenarioConfig& cfg) {
  if (std::filesystem::exists(cfg.scenario)) {
    ScenarioWorld w;
    w.grid = load_map_file(cfg.scenario);
    if (!cfg.has_start_goal) {
      throw std::runtime_error(
          "map-file scenario needs run.start_x/.. and run.goal_x/..");
    }
    w.start = cfg.start;
    w.goal = cfg.goal;
    return w;
  }
  ScenarioWorld w = builtin_scenario(scenario_from_name(cfg.scenario));
  if (cfg.has_start_goal) {
    w.start = cfg.start;
    w.goal = cfg.goal;
  }
  return w;
}

// The inscribed band is deliberately conservative, so a robot skimming
// an obstacle can stand on an untraversable cell without touching
// anything. Planning must then start from the nearest traversable cell
// instead of failing outright.
Pose plan_start(const CostMap& cm, const Pose& est) {
  int c, r;
  if (!cm.world_to_cell(est.x, est.y, c, r)) return est;
  if (cm.cost[cm.idx(c, r)] < kCostInscribed) return est;
  const int radius = static_cast<int>(std::lround(1.0 / cm.resolution));
  double best_d2 = std::numeric_limits<double>::infinity();
  Pose best = est;
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      const int nc = c + dc, nr = r + dr;
      if (!cm.in_bounds(nc, nr) ||
          cm.cost[cm.idx(nc, nr)] >= kCostInscribed) {
        continue;
      }
      const double x = cm.origin.x + (nc + 0.5) * cm.resolution;
      const double y = cm.origin.y + (nr + 0.5) * cm.resolution;
      const double d2 = (x - est.x) * (x - est.x) + (y - est.y) * (y - est.y);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = Pose{x, y, est.theta};
      }
    }
  }
  return best;
}

bool at_goal(const Pose& p, const Pose& goal, const ScenarioConfig& cfg) {
  const double d = std::hypot(p.x - goal.x, p.y - goal.y);
  return d <= cfg.goal_tol_xy &&
         std::abs(normalize_angle(p.theta - goal.theta)) <= cfg.goal_tol_theta;
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& cfg) {
  RunRecord rec;
  rec.world = resolve_world(cfg);
  const OccupancyGrid& world = rec.world.grid;
  const double dt = cfg.kinematics.dt;

  Rng rng(cfg.seed);
  SimState sim;
  sim.true_pose = rec.world.start;
  sim.odom_pose = rec.world.start;
  EkfState ekf = EkfState::from(rec.world.start, Twist{});

  if (at_goal(sim.true_pose, rec.world.goal, cfg)) {
    rec.outcome = Outcome::Success;
    return rec;
  }

  LogOddsGrid online = LogOddsGrid::make_like(world, cfg.mapping.l_max);
  CostMap global_cm;
  std::vector<Pose> path;
  Twist current_cmd;
  bool have_reading = false;
  OdomReading reading;
  double blocked_for = 0.0;
  double blocked_since_replan = 0.0;
  bool force_replan = false;
  std::uint64_t stamp = 0;

  const int cycles = std::max(1, static_cast<int>(cfg.max_time / dt));
  rec.outcome = Outcome::Timeout;

  for (int cycle = 0; cycle < cycles; ++cycle) {
    // Sense.
    LaserScan scan =
        simulate_scan(world, sim.true_pose, cfg.lidar, cfg.noise, rng);

    // Fuse the previous cycle's odometry/gyro readings.
    if (have_reading) {
      ekf = ekf_predict(ekf, dt, cfg.ekf);
      ekf = ekf_update_odom(ekf, reading.odom, cfg.ekf);
      ekf = ekf_update_gyro(ekf, reading.gyro, cfg.ekf);
    }
    const Pose est = ekf.pose();

    // Online map update at the estimated pose, with long beams clipped
    // to free space: distant endpoints smear under heading error.
    if (scan.max_range > cfg.mapping_use_range) {
      LaserScan clipped = scan;
      clipped.max_range = cfg.mapping_use_range;
      for (double& r : clipped.ranges) {
        r = std::min(r, cfg.mapping_use_range);
      }
      integrate_scan(online, est, clipped, cfg.mapping);
    } else {
      integrate_scan(online, est, scan, cfg.mapping);
    }

    // Slow global layer: rebuild the costmap every K cycles, but re-run
    // the planner only when the path is missing or crosses a cell that
    // is no longer traversable. A still-valid path is kept as is:
    // replacing it wholesale every period makes the route hop sideways
    // whenever newly mapped cells move the cheapest corridor, and the
    // local planner then has to chase each hop.
    if (cycle % cfg.global_update_period == 0 || force_replan) {
      global_cm = inflate(from_occupancy(online, 0.5, cfg.unknown_cost),
                          cfg.inflation);
      global_cm.stamp = static_cast<std::uint64_t>(cycle);
    }
    bool replan = path.empty() || force_replan;
    force_replan = false;
    if (!replan && !global_cm.cost.empty()) {
      for (const Pose& p : path) {
        if (global_cm.cost_at(p.x, p.y) >= cfg.path_invalid_cost) {
          replan = true;
          break;
        }
      }
    }
    if (replan) {
      auto plan = astar(global_cm, plan_start(global_cm, est),
                        rec.world.goal, cfg.global_planner);
      if (!plan) {
        if (std::getenv("NAVSIM_DEBUG_DUMP")) {
          save_costmap_text(global_cm, "/tmp/fail_cm.txt");
          std::fprintf(stderr, "replan fail cycle=%d est=(%g,%g) goal=(%g,%g)\n",
                       cycle, est.x, est.y, rec.world.goal.x, rec.world.goal.y);
        }
        // Unreachable at t=0 is a config/scenario error; later it means
        // the robot mapped itself into a corner.
        rec.outcome = cycle == 0 ? Outcome::Unreachable : Outcome::Blocked;
        return rec;
      }
      path = plan->world_poses;
      rec.global_path = path;
    }

    // Fast local layer.
    CostMap local_cm = local_window(global_cm, est, cfg.local_window_size,
                                    scan, cfg.inflation, ++stamp);
    const std::vector<float> lethal_dist = lethal_distance_field(local_cm);

    // Local planner.
    const auto t0 = std::chrono::steady_clock::now();
    Twist cmd;
    double score = 0.0;
    bool blocked = false;
    if (cfg.planner == PlannerKind::Dwa) {
      DwaResult r = dwa_plan(est, current_cmd, path, local_cm, lethal_dist,
                             cfg.dwa, cfg.kinematics);
      cmd = r.command;
      blocked = r.blocked;
      score = r.blocked ? 0.0 : r.best.total;
    } else {
      MpcResult r =
          mpc_plan(est, current_cmd, path, local_cm, cfg.mpc, cfg.kinematics);
      cmd = r.command;
      blocked = r.blocked;
      score = r.objective;
    }
    cmd = clamp_twist(cmd, cfg.kinematics);
    const auto t1 = std::chrono::steady_clock::now();

    RunRow row;
    row.time = sim.time;
    row.true_pose = sim.true_pose;
    row.est_pose = est;
    row.v = cmd.v;
    row.w = cmd.w;
    row.score = score;
    row.blocked = blocked;
    row.plan_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.rows.push_back(row);

    // Act.
    reading = step_sim(sim, cmd, cfg.kinematics, cfg.noise, rng);
    have_reading = true;
    current_cmd = cmd;

    if (footprint_collides(world, sim.true_pose.x, sim.true_pose.y,
                           cfg.inflation.robot_radius)) {
      rec.outcome = Outcome::Collision;
      return rec;
    }
    if (at_goal(sim.true_pose, rec.world.goal, cfg)) {
      rec.outcome = Outcome::Success;
      return rec;
    }
    blocked_for = blocked ? blocked_for + dt : 0.0;
    if (blocked_for > cfg.blocked_timeout) {
      rec.outcome = Outcome::Blocked;
      return rec;
    }
    // A local planner that stays blocked for half a second is wedged
    // against something the current route runs too close to, even if
    // every route cell is still traversable. Reroute on the freshest
    // map instead of only waiting out the blocked budget.
    blocked_since_replan = blocked ? blocked_since_replan + dt : 0.0;
    if (blocked_since_replan >= 0.5) {
      force_replan = true;
      blocked_since_replan = 0.0;
    }
  }
  return rec;
}

namespace {

double point_to_segment(double px, double py, const Pose& a, const Pose& b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((px - a.x) * vx + (py - a.y) * vy) / len2, 0.0, 1.0);
  }
  const double dx = px - (a.x + t * vx);
  const double dy = py - (a.y + t * vy);
  return std::hypot(dx, dy);
}

}  // namespace

Metrics compute_metrics(const RunRecord& rec, const std::vector<Pose>& path) {
  Metrics m;
  m.success = rec.outcome == Outcome::Success;
  if (rec.rows.empty()) return m;

  const double cycle_dt =
      rec.rows.size() >= 2 ? rec.rows[1].time - rec.rows[0].time : 0.0;
  m.time_to_goal = rec.rows.back().time + (m.success ? cycle_dt : 0.0);
  double len = 0.0;
  for (std::size_t i = 1; i < rec.rows.size(); ++i) {
    len += std::hypot(rec.rows[i].true_pose.x - rec.rows[i - 1].true_pose.x,
                      rec.rows[i].true_pose.y - rec.rows[i - 1].true_pose.y);
  }
  m.path_length = len;

  double sv = 0.0, sw = 0.0, svv = 0.0, sww = 0.0, plan = 0.0;
  m.w_min = rec.rows.front().w;
  m.w_max = rec.rows.front().w;
  for (const RunRow& r : rec.rows) {
    sv += r.v;
    sw += r.w;
    svv += r.v * r.v;
    sww += r.w * r.w;
    m.w_min = std::min(m.w_min, r.w);
    m.w_max = std::max(m.w_max, r.w);
    plan += r.plan_ms;
  }
  const double n = static_cast<double>(rec.rows.size());
  m.v_std = std::sqrt(std::max(0.0, svv / n - (sv / n) * (sv / n)));
  m.w_std = std::sqrt(std::max(0.0, sww / n - (sw / n) * (sw / n)));
  m.mean_plan_ms = plan / n;

  if (path.size() >= 2) {
    double acc = 0.0;
    for (const RunRow& r : rec.rows) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        best = std::min(best, point_to_segment(r.est_pose.x, r.est_pose.y,
                                               path[i], path[i + 1]));
      }
      acc += best * best;
    }
    m.tracking_rmse = std::sqrt(acc / n);
  }
  return m;
}

CompareReport compare(const std::string& scenario,
                      const std::vector<ComparePair>& pairs) {
  CompareReport rep;
  rep.scenario = scenario;
  rep.pairs = pairs;
  for (const ComparePair& p : pairs) {
    rep.dwa_success += p.dwa.success ? 1 : 0;
    rep.mpc_success += p.mpc.success ? 1 : 0;
    rep.mpc_w_std_lower += p.mpc.w_std < p.dwa.w_std ? 1 : 0;
    rep.mpc_rmse_lower += p.mpc.tracking_rmse < p.dwa.tracking_rmse ? 1 : 0;
  }
  return rep;
}

}  // namespace navsim
