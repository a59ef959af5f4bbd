#include "navsim/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace navsim {

double raycast(const OccupancyGrid& grid, const Pose& from, double angle,
               double max_range) {
  const double res = grid.resolution;
  const double dirx = std::cos(angle);
  const double diry = std::sin(angle);

  // Grid-local position in cell units.
  double gx = (from.x - grid.origin.x) / res;
  double gy = (from.y - grid.origin.y) / res;
  int col = static_cast<int>(std::floor(gx));
  int row = static_cast<int>(std::floor(gy));

  if (grid.in_bounds(col, row) && grid.at(col, row) == Cell::Occupied) {
    return 0.0;
  }

  const double inf = std::numeric_limits<double>::infinity();
  const int step_c = dirx > 0 ? 1 : (dirx < 0 ? -1 : 0);
  const int step_r = diry > 0 ? 1 : (diry < 0 ? -1 : 0);

  // t measured in meters along the ray.
  double t_max_c = inf, t_delta_c = inf;
  if (step_c != 0) {
    const double next = step_c > 0 ? col + 1.0 : static_cast<double>(col);
    t_max_c = (next - gx) * res / dirx;
    t_delta_c = res / std::abs(dirx);
  }
  double t_max_r = inf, t_delta_r = inf;
  if (step_r != 0) {
    const double next = step_r > 0 ? row + 1.0 : static_cast<double>(row);
    t_max_r = (next - gy) * res / diry;
    t_delta_r = res / std::abs(diry);
  }

  while (true) {
    double t_entry;
    if (t_max_c < t_max_r) {
      t_entry = t_max_c;
      col += step_c;
      t_max_c += t_delta_c;
    } else {
      t_entry = t_max_r;
      row += step_r;
      t_max_r += t_delta_r;
    }
    if (t_entry >= max_range) return max_range;
    if (!grid.in_bounds(col, row)) return max_range;
    if (grid.at(col, row) == Cell::Occupied) return t_entry;
  }
}

LaserScan simulate_scan(const OccupancyGrid& grid, const Pose& pose,
                        const LidarConfig& cfg, const NoiseModel& noise,
                        Rng& rng) {
  LaserScan scan;
  scan.max_range = cfg.max_range;
  scan.angles.reserve(cfg.num_beams);
  scan.ranges.reserve(cfg.num_beams);

  const bool full_circle = cfg.fov >= 2.0 * M_PI - 1e-9;
  for (int i = 0; i < cfg.num_beams; ++i) {
    double a;
    if (cfg.num_beams == 1) {
      a = 0.0;
    } else if (full_circle) {
      a = -cfg.fov / 2.0 + cfg.fov * i / cfg.num_beams;
    } else {
      a = -cfg.fov / 2.0 + cfg.fov * i / (cfg.num_beams - 1);
    }
    double r = raycast(grid, pose, pose.theta + a, cfg.max_range);
    r += rng.gaussian(0.0, cfg.range_noise_std);
    scan.angles.push_back(a);
    scan.ranges.push_back(std::clamp(r, 0.0, cfg.max_range));
  }
  return scan;
}

OdomReading step_sim(SimState& state, const Twist& cmd,
                     const KinematicParams& params, const NoiseModel& noise,
                     Rng& rng) {
  // Fixed draw order keeps runs reproducible regardless of which noise
  // terms are enabled.
  const double gv = rng.gaussian();
  const double gw = rng.gaussian();
  const double gvib = rng.gaussian();
  const double ggyro = rng.gaussian();

  OdomReading out;
  out.odom.v = cmd.v * (1.0 + noise.odom_v_std * gv);
  out.odom.w = cmd.w * (1.0 + noise.odom_w_std * gw) +
               noise.rotation_vibration_std * std::abs(cmd.w) * gvib;
  out.gyro = cmd.w + noise.gyro_std * ggyro;

  state.true_pose = step_euler(state.true_pose, cmd, params.dt);
  state.true_twist = cmd;
  state.odom_pose = step_euler(state.odom_pose, out.odom, params.dt);
  state.time += params.dt;
  return out;
}

namespace {

ScenarioWorld make_obstacle_field() {
  const double res = 0.05;
  ScenarioWorld w;
  w.grid = OccupancyGrid::make(200, 200, res);  // 10 x 10 m
  // Border walls, 0.1 m thick.
  w.grid.fill_rect(0.0, 0.0, 10.0, 0.1, Cell::Occupied);
  w.grid.fill_rect(0.0, 9.9, 10.0, 10.0, Cell::Occupied);
  w.grid.fill_rect(0.0, 0.0, 0.1, 10.0, Cell::Occupied);
  w.grid.fill_rect(9.9, 0.0, 10.0, 10.0, Cell::Occupied);
  // Four scattered convex obstacles.
  w.grid.fill_rect(2.8, 2.2, 3.6, 3.0, Cell::Occupied);
  w.grid.fill_rect(6.2, 3.4, 7.0, 4.2, Cell::Occupied);
  w.grid.fill_rect(3.4, 6.0, 4.2, 6.8, Cell::Occupied);
  w.grid.fill_rect(6.6, 6.8, 7.4, 7.6, Cell::Occupied);
  w.start = Pose{1.0, 1.0, M_PI / 4.0};
  w.goal = Pose{9.0, 9.0, M_PI / 4.0};
  return w;
}

ScenarioWorld make_corner() {
  const double res = 0.05;
  ScenarioWorld w;
  w.grid = OccupancyGrid::make(120, 120, res, {}, Cell::Occupied);  // 6 x 6 m
  // L-shaped corridor, 1.2 m wide, 90 degree bend.
  w.grid.fill_rect(0.3, 0.6, 5.4, 1.8, Cell::Free);   // horizontal leg
  w.grid.fill_rect(4.2, 0.6, 5.4, 5.7, Cell::Free);   // vertical leg
  w.start = Pose{0.8, 1.2, 0.0};
  w.goal = Pose{4.8, 5.2, M_PI / 2.0};
  return w;
}

ScenarioWorld make_straight_obstacle() {
  const double res = 0.05;
  ScenarioWorld w;
  w.grid = OccupancyGrid::make(160, 80, res);  // 8 x 4 m
  w.grid.fill_rect(0.0, 0.0, 8.0, 0.2, Cell::Occupied);
  w.grid.fill_rect(0.0, 3.8, 8.0, 4.0, Cell::Occupied);
  w.grid.fill_rect(0.0, 0.0, 0.1, 4.0, Cell::Occupied);
  w.grid.fill_rect(7.9, 0.0, 8.0, 4.0, Cell::Occupied);
  // 0.5 m obstacle on the center line at the midpoint.
  w.grid.fill_rect(3.75, 1.75, 4.25, 2.25, Cell::Occupied);
  w.start = Pose{0.6, 2.0, 0.0};
  w.goal = Pose{7.4, 2.0, 0.0};
  return w;
}

}  // namespace

ScenarioWorld builtin_scenario(Scenario s) {
  switch (s) {
    case Scenario::ObstacleField: return make_obstacle_field();
    case Scenario::Corner: return make_corner();
    case Scenario::StraightObstacle: return make_straight_obstacle();
  }
  throw std::invalid_argument("unknown scenario");
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "obstacle_field") return Scenario::ObstacleField;
  if (name == "corner") return Scenario::Corner;
  if (name == "straight_obstacle") return Scenario::StraightObstacle;
  throw std::invalid_argument("unknown scenario: " + name);
}

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::ObstacleField: return "obstacle_field";
    case Scenario::Corner: return "corner";
    case Scenario::StraightObstacle: return "straight_obstacle";
  }
  return "?";
}

bool footprint_collides(const OccupancyGrid& grid, double x, double y,
                        double radius) {
  int c0, r0;
  grid.world_to_cell(x - radius, y - radius, c0, r0);
  int c1, r1;
  grid.world_to_cell(x + radius, y + radius, c1, r1);
  const double r2 = radius * radius;
  for (int r = std::max(0, r0); r <= std::min(grid.height - 1, r1); ++r) {
    for (int c = std::max(0, c0); c <= std::min(grid.width - 1, c1); ++c) {
      if (grid.at(c, r) != Cell::Occupied) continue;
      // Closest point of the cell square to the disc center.
      const double cx0 = grid.origin.x + c * grid.resolution;
      const double cy0 = grid.origin.y + r * grid.resolution;
      const double px = std::clamp(x, cx0, cx0 + grid.resolution);
      const double py = std::clamp(y, cy0, cy0 + grid.resolution);
      const double dx = x - px, dy = y - py;
      if (dx * dx + dy * dy <= r2) return true;
    }
  }
  return false;
}

}  // namespace navsim
