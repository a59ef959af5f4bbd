#pragma once

#include <vector>

#include "navsim/distance_field.hpp"
#include "navsim/grid.hpp"
#include "navsim/kinematics.hpp"
#include "navsim/rng.hpp"
#include "navsim/sim_world.hpp"

namespace navsim {

struct MappingConfig {
  int num_particles = 30;
  // Motion noise accumulates linearly in variance, so trans_std is the
  // spread (m) after one meter of travel and rot_std the spread (rad)
  // after one radian of turn, independent of step size.
  double trans_std = 0.05;
  double rot_std = 0.05;
  double hit_sigma = 0.1;           // m, likelihood-field width
  double resample_neff_frac = 0.5;  // resample when Neff < frac * N
  double l_occ = 0.85;
  double l_free = -0.4;
  double l_max = 5.0;
  double beam_floor = 1e-3;  // per-beam likelihood floor
  int field_refresh_period = 5;  // integrations between field rebuilds
};

struct Particle {
  Pose pose;
  double weight = 1.0;
  LogOddsGrid map;

  // Distance-to-nearest-occupied field, rebuilt lazily.
  std::vector<float> field;
  int field_age = 1 << 20;  // integrations since last rebuild
};

std::vector<Particle> init_particles(const Pose& start,
                                     const OccupancyGrid& geometry,
                                     const MappingConfig& cfg);

void motion_update(std::vector<Particle>& particles, const Twist& odom_delta,
                   double dt, const MappingConfig& cfg, Rng& rng);

/// Likelihood-field scan score: geometric mean over hit beams of
/// max(exp(-d^2 / (2 hit_sigma^2)), beam_floor), d being the distance
/// from the beam endpoint to the nearest occupied cell. Max-range beams
/// are skipped; a pose outside the map scores beam_floor.
double scan_likelihood(const LogOddsGrid& map, const std::vector<float>& field,
                       const Pose& pose, const LaserScan& scan,
                       const MappingConfig& cfg);

/// Convenience overload that builds the distance field on the fly.
double scan_likelihood(const LogOddsGrid& map, const Pose& pose,
                       const LaserScan& scan, const MappingConfig& cfg);

/// Reweight by scan likelihood and renormalize. Returns false when all
/// weights vanished and the set was reset to uniform.
bool measurement_update(std::vector<Particle>& particles,
                        const LaserScan& scan, const MappingConfig& cfg);

/// Systematic resampling when Neff = 1 / sum(w^2) drops below
/// resample_neff_frac * N. Returns true when resampling fired.
bool resample_if_needed(std::vector<Particle>& particles,
                        const MappingConfig& cfg, Rng& rng);

/// Ray-carve one scan into a log-odds map from the given pose.
void integrate_scan(LogOddsGrid& map, const Pose& pose, const LaserScan& scan,
                    const MappingConfig& cfg);

/// Distance field over the occupied (log-odds > 0) cells of a map.
std::vector<float> occupied_distance_field(const LogOddsGrid& map);

void refresh_field_if_stale(Particle& p, const MappingConfig& cfg);

const Particle& best_particle(const std::vector<Particle>& particles);

struct MappingRunSetup {
  KinematicParams kinematics;
  LidarConfig lidar;
  NoiseModel noise;
  MappingConfig mapping;
};

struct MappingRunResult {
  OccupancyGrid map;
  bool collided = false;
  int steps_run = 0;
  int degenerate_updates = 0;
};

/// Full mapping loop over a scripted command sequence. Commands are
/// clamped; the run aborts early if the true pose collides with the
/// world (robot_radius footprint).
MappingRunResult run_mapping(const OccupancyGrid& world, const Pose& start,
                             const std::vector<Twist>& commands,
                             const MappingRunSetup& setup, double robot_radius,
                             Rng& rng);

/// Fraction of cells observed by `estimate` (non-Unknown) that agree
/// with the ground-truth grid.
double map_agreement(const OccupancyGrid& estimate,
                     const OccupancyGrid& truth);

}  // namespace navsim
