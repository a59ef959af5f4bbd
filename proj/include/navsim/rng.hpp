#pragma once

#include <cmath>
#include <cstdint>

namespace navsim {

/// Deterministic 64-bit PRNG (splitmix64, Steele et al. 2014).
///
/// Chosen over <random> engines because its output and the derived
/// uniform/gaussian draws are identical across platforms and standard
/// library implementations, which the reproducibility contract of the
/// simulator requires. split() derives an independent stream, used to
/// give each particle / each run its own generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Draws are cached in pairs.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard against log(0).
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double gaussian(double mean, double std) { return mean + std * gaussian(); }

  /// Independent child stream. Mixing with a fixed odd constant keeps
  /// sibling streams decorrelated even for adjacent seeds.
  Rng split() { return Rng(next_u64() ^ 0xd6e8feb86659fd93ULL); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace navsim
