#include "navsim/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "navsim/kernels.hpp"

namespace navsim {

std::vector<Particle> init_particles(const Pose& start,
                                     const OccupancyGrid& geometry,
                                     const MappingConfig& cfg) {
  if (cfg.num_particles < 1) {
    throw std::invalid_argument("num_particles must be >= 1");
  }
  std::vector<Particle> ps(cfg.num_particles);
  for (auto& p : ps) {
    p.pose = start;
    p.weight = 1.0 / cfg.num_particles;
    p.map = LogOddsGrid::make(geometry.width, geometry.height,
                              geometry.resolution, geometry.origin, cfg.l_max);
  }
  return ps;
}

void motion_update(std::vector<Particle>& particles, const Twist& odom_delta,
                   double dt, const MappingConfig& cfg, Rng& rng) {
  const double dist = std::abs(odom_delta.v) * dt;
  const double turn = std::abs(odom_delta.w) * dt;
  const double trans_sigma = cfg.trans_std * std::sqrt(dist);
  const double rot_sigma = cfg.rot_std * std::sqrt(turn);
  for (auto& p : particles) {
    p.pose = step_euler(p.pose, odom_delta, dt);
    p.pose.x += rng.gaussian(0.0, trans_sigma);
    p.pose.y += rng.gaussian(0.0, trans_sigma);
    p.pose.theta = normalize_angle(p.pose.theta + rng.gaussian(0.0, rot_sigma));
  }
}

std::vector<float> occupied_distance_field(const LogOddsGrid& map) {
  std::vector<std::uint8_t> source(map.cells.size());
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    source[i] = map.cells[i] > 0.0f ? 1 : 0;
  }
  return distance_field(map.width, map.height, map.resolution, source);
}

void refresh_field_if_stale(Particle& p, const MappingConfig& cfg) {
  if (p.field.empty() || p.field_age >= cfg.field_refresh_period) {
    p.field = occupied_distance_field(p.map);
    p.field_age = 0;
  }
}

double scan_likelihood(const LogOddsGrid& map, const std::vector<float>& field,
                       const Pose& pose, const LaserScan& scan,
                       const MappingConfig& cfg) {
  int pc, pr;
  if (!map.world_to_cell(pose.x, pose.y, pc, pr)) return cfg.beam_floor;

  const float far = 1e3f;  // beyond any cap
  std::vector<float> dists;
  dists.reserve(scan.ranges.size());
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double r = scan.ranges[i];
    if (r >= scan.max_range - 1e-9) continue;  // no hit, skip
    const double a = pose.theta + scan.angles[i];
    const double ex = pose.x + r * std::cos(a);
    const double ey = pose.y + r * std::sin(a);
    int c, rr;
    if (map.world_to_cell(ex, ey, c, rr)) {
      dists.push_back(field[map.idx(c, rr)]);
    } else {
      dists.push_back(far);
    }
  }
  if (dists.empty()) return 1.0;

  const float scale = 1.0f / (2.0f * cfg.hit_sigma * cfg.hit_sigma);
  const float cap = static_cast<float>(-std::log(cfg.beam_floor));
  const float neg_log_sum =
      kernels::ops().clamped_sumsq(dists.data(), dists.size(), scale, cap);
  return std::exp(-static_cast<double>(neg_log_sum) /
                  static_cast<double>(dists.size()));
}

double scan_likelihood(const LogOddsGrid& map, const Pose& pose,
                       const LaserScan& scan, const MappingConfig& cfg) {
  return scan_likelihood(map, occupied_distance_field(map), pose, scan, cfg);
}

bool measurement_update(std::vector<Particle>& particles,
                        const LaserScan& scan, const MappingConfig& cfg) {
  double total = 0.0;
  for (auto& p : particles) {
    refresh_field_if_stale(p, cfg);
    p.weight *= scan_likelihood(p.map, p.field, p.pose, scan, cfg);
    total += p.weight;
  }
  if (total <= 0.0) {
    for (auto& p : particles) p.weight = 1.0 / particles.size();
    return false;
  }
  for (auto& p : particles) p.weight /= total;
  return true;
}

bool resample_if_needed(std::vector<Particle>& particles,
                        const MappingConfig& cfg, Rng& rng) {
  const std::size_t n = particles.size();
  double sum_sq = 0.0;
  for (const auto& p : particles) sum_sq += p.weight * p.weight;
  const double neff = 1.0 / sum_sq;
  if (neff >= cfg.resample_neff_frac * static_cast<double>(n)) return false;

  // Systematic resampling: one uniform draw, stratified comb.
  std::vector<Particle> next;
  next.reserve(n);
  const double step = 1.0 / static_cast<double>(n);
  double u = rng.uniform() * step;
  double cum = particles[0].weight;
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (u > cum && i + 1 < n) {
      ++i;
      cum += particles[i].weight;
    }
    next.push_back(particles[i]);  // deep copy, map included
    next.back().weight = step;
    u += step;
  }
  particles = std::move(next);
  return true;
}

void integrate_scan(LogOddsGrid& map, const Pose& pose, const LaserScan& scan,
                    const MappingConfig& cfg) {
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double r = scan.ranges[i];
    const bool hit = r < scan.max_range - 1e-9;
    const double a = pose.theta + scan.angles[i];
    // The measured range ends on the obstacle's near face; marking uses
    // a point half a cell deeper so the endpoint cell is the obstacle
    // itself, not the free cell in front of it.
    const double rm = hit ? r + 0.5 * map.resolution : r;
    const double ex = pose.x + rm * std::cos(a);
    const double ey = pose.y + rm * std::sin(a);
    int ec = std::numeric_limits<int>::min(), er = ec;
    if (hit) map.world_to_cell(ex, ey, ec, er);
    traverse_ray(map, pose.x, pose.y, ex, ey, [&](int c, int rr) {
      if (!map.in_bounds(c, rr)) return true;
      if (hit && c == ec && rr == er) {
        map.add(c, rr, cfg.l_occ);
        return false;
      }
      map.add(c, rr, cfg.l_free);
      return true;
    });
  }
}

const Particle& best_particle(const std::vector<Particle>& particles) {
  return *std::max_element(
      particles.begin(), particles.end(),
      [](const Particle& a, const Particle& b) { return a.weight < b.weight; });
}

MappingRunResult run_mapping(const OccupancyGrid& world, const Pose& start,
                             const std::vector<Twist>& commands,
                             const MappingRunSetup& setup, double robot_radius,
                             Rng& rng) {
  MappingRunResult out;
  std::vector<Particle> particles =
      init_particles(start, world, setup.mapping);

  SimState sim;
  sim.true_pose = start;
  sim.odom_pose = start;

  // Anchor the map with the very first scan so an empty command list
  // still yields the initial footprint.
  {
    LaserScan scan =
        simulate_scan(world, sim.true_pose, setup.lidar, setup.noise, rng);
    for (auto& p : particles) {
      integrate_scan(p.map, p.pose, scan, setup.mapping);
      ++p.field_age;
    }
  }

  for (const Twist& raw_cmd : commands) {
    const Twist cmd = clamp_twist(raw_cmd, setup.kinematics);
    const OdomReading reading =
        step_sim(sim, cmd, setup.kinematics, setup.noise, rng);
    if (footprint_collides(world, sim.true_pose.x, sim.true_pose.y,
                           robot_radius)) {
      out.collided = true;
      break;
    }
    LaserScan scan =
        simulate_scan(world, sim.true_pose, setup.lidar, setup.noise, rng);

    motion_update(particles, reading.odom, setup.kinematics.dt, setup.mapping,
                  rng);
    if (!measurement_update(particles, scan, setup.mapping)) {
      ++out.degenerate_updates;
    }
    resample_if_needed(particles, setup.mapping, rng);
    for (auto& p : particles) {
      integrate_scan(p.map, p.pose, scan, setup.mapping);
      ++p.field_age;
    }
    ++out.steps_run;
  }

  out.map = best_particle(particles).map.to_occupancy();
  return out;
}

double map_agreement(const OccupancyGrid& estimate,
                     const OccupancyGrid& truth) {
  if (estimate.width != truth.width || estimate.height != truth.height) {
    throw std::invalid_argument("map_agreement: geometry mismatch");
  }
  std::size_t observed = 0, agree = 0;
  for (std::size_t i = 0; i < estimate.cells.size(); ++i) {
    if (estimate.cells[i] == Cell::Unknown) continue;
    ++observed;
    if (estimate.cells[i] == truth.cells[i]) ++agree;
  }
  return observed == 0 ? 0.0
                       : static_cast<double>(agree) /
                             static_cast<double>(observed);
}

}  // namespace navsim
