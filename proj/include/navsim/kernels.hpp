#pragma once

#include <cstddef>

namespace navsim::kernels {

// Data-parallel inner loops shared by the mapper, costmap and planners.
// Scalar implementations are the reference; an AVX2 variant is selected
// at runtime when the CPU supports it. Equivalence between the two is
// covered by tests/test_kernels.cpp.
struct Ops {
  // min over x[0..n), +inf for n == 0.
  float (*min_value)(const float* x, std::size_t n);

  // sum_i min(scale * d[i]^2, cap); the log-likelihood accumulator of
  // the likelihood-field scan model.
  float (*clamped_sumsq)(const float* d, std::size_t n, float scale,
                         float cap);

  // Inflation cost profile over a distance field:
  //   d <= robot_r            -> 254
  //   robot_r < d <= infl_r   -> 253 * exp(-decay * (d - robot_r))
  //   d > infl_r              -> 0
  void (*decay_cost)(const float* dist, float* cost, std::size_t n,
                     float robot_r, float infl_r, float decay);
};

/// Best variant for this machine (resolved once, thread-safe).
const Ops& ops();

/// Portable reference implementation.
const Ops& scalar_ops();

/// AVX2 implementation, or nullptr when unsupported at build or run time.
const Ops* avx2_ops();

const char* active_variant_name();

}  // namespace navsim::kernels
