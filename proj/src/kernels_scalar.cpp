#include "navsim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navsim::kernels {
namespace {

float min_value_scalar(const float* x, std::size_t n) {
  float m = std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

float clamped_sumsq_scalar(const float* d, std::size_t n, float scale,
                           float cap) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::min(scale * d[i] * d[i], cap);
  }
  return acc;
}

void decay_cost_scalar(const float* dist, float* cost, std::size_t n,
                       float robot_r, float infl_r, float decay) {
  for (std::size_t i = 0; i < n; ++i) {
    const float d = dist[i];
    if (d <= robot_r) {
      cost[i] = 254.0f;
    } else if (d <= infl_r) {
      cost[i] = 253.0f * std::exp(-decay * (d - robot_r));
    } else {
      cost[i] = 0.0f;
    }
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{min_value_scalar, clamped_sumsq_scalar,
                       decay_cost_scalar};
  return ops;
}

}  // namespace navsim::kernels
