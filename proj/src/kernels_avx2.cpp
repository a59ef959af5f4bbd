#include "navsim/kernels.hpp"

#if defined(NAVSIM_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
#define NAVSIM_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

#include <algorithm>
#include <cmath>
#include <limits>

namespace navsim::kernels {

#if NAVSIM_HAVE_AVX2_TU
namespace {

// exp(x) for x <= 0, split as 2^n * 2^f with |f| <= 0.5 and a degree-6
// polynomial for 2^f. Relative error ~1e-7, enough for cost profiles.
inline __m256 exp_neg_ps(__m256 x) {
  const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
  const __m256 ln2_hi = _mm256_set1_ps(0.693359375f);
  const __m256 ln2_lo = _mm256_set1_ps(-2.12194440e-4f);

  // Clamp: exp(-88) underflows float anyway.
  x = _mm256_max_ps(x, _mm256_set1_ps(-87.0f));

  __m256 t = _mm256_mul_ps(x, log2e);
  __m256 n = _mm256_round_ps(t, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  // f = x - n*ln2 in extended precision
  __m256 f = _mm256_fnmadd_ps(n, ln2_hi, x);
  f = _mm256_fnmadd_ps(n, ln2_lo, f);

  // Taylor for exp(f), |f| <= 0.5*ln2
  __m256 p = _mm256_set1_ps(1.9875691500e-4f);
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(1.3981999507e-3f));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(8.3334519073e-3f));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(4.1665795894e-2f));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(1.6666665459e-1f));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(5.0000001201e-1f));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(1.0f));
  p = _mm256_fmadd_ps(p, f, _mm256_set1_ps(1.0f));

  // scale by 2^n
  __m256i ni = _mm256_cvtps_epi32(n);
  ni = _mm256_add_epi32(ni, _mm256_set1_epi32(127));
  ni = _mm256_slli_epi32(ni, 23);
  return _mm256_mul_ps(p, _mm256_castsi256_ps(ni));
}

inline float hmin_ps(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 m = _mm_min_ps(lo, hi);
  m = _mm_min_ps(m, _mm_movehl_ps(m, m));
  m = _mm_min_ss(m, _mm_shuffle_ps(m, m, 1));
  return _mm_cvtss_f32(m);
}

inline float hsum_ps(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_add_ps(lo, hi);
  s = _mm_add_ps(s, _mm_movehl_ps(s, s));
  s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
  return _mm_cvtss_f32(s);
}

float min_value_avx2(const float* x, std::size_t n) {
  std::size_t i = 0;
  __m256 acc = _mm256_set1_ps(std::numeric_limits<float>::infinity());
  for (; i + 8 <= n; i += 8) {
    acc = _mm256_min_ps(acc, _mm256_loadu_ps(x + i));
  }
  float m = hmin_ps(acc);
  for (; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

float clamped_sumsq_avx2(const float* d, std::size_t n, float scale,
                         float cap) {
  const __m256 vs = _mm256_set1_ps(scale);
  const __m256 vc = _mm256_set1_ps(cap);
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(d + i);
    __m256 sq = _mm256_mul_ps(_mm256_mul_ps(v, v), vs);
    acc = _mm256_add_ps(acc, _mm256_min_ps(sq, vc));
  }
  float sum = hsum_ps(acc);
  for (; i < n; ++i) sum += std::min(scale * d[i] * d[i], cap);
  return sum;
}

void decay_cost_avx2(const float* dist, float* cost, std::size_t n,
                     float robot_r, float infl_r, float decay) {
  const __m256 vr = _mm256_set1_ps(robot_r);
  const __m256 vi = _mm256_set1_ps(infl_r);
  const __m256 vd = _mm256_set1_ps(decay);
  const __m256 v253 = _mm256_set1_ps(253.0f);
  const __m256 v254 = _mm256_set1_ps(254.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 d = _mm256_loadu_ps(dist + i);
    __m256 band = exp_neg_ps(
        _mm256_mul_ps(_mm256_sub_ps(vr, d), vd));  // exp(-decay*(d-r))
    __m256 c = _mm256_mul_ps(v253, band);
    __m256 inscribed = _mm256_cmp_ps(d, vr, _CMP_LE_OQ);
    __m256 outside = _mm256_cmp_ps(d, vi, _CMP_GT_OQ);
    c = _mm256_blendv_ps(c, v254, inscribed);
    c = _mm256_andnot_ps(outside, c);
    _mm256_storeu_ps(cost + i, c);
  }
  for (; i < n; ++i) {
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

const Ops avx2_table{min_value_avx2, clamped_sumsq_avx2, decay_cost_avx2};

}  // namespace

const Ops* avx2_ops() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &avx2_table;
  }
  return nullptr;
}

#else

const Ops* avx2_ops() { return nullptr; }

#endif  // NAVSIM_HAVE_AVX2_TU

}  // namespace navsim::kernels
