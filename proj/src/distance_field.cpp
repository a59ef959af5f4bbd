#include "navsim/distance_field.hpp"

#include <cmath>
#include <limits>

namespace navsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform, lower envelope of parabolas
// (Felzenszwalb & Huttenlocher 2012). f holds squared distances in cell
// units; d receives the transformed row.
void edt_1d(const double* f, double* d, int n, int* v, double* z) {
  int k = -1;  // index of the rightmost parabola in the envelope
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = -kInf;
    while (k >= 0) {
      const int p = v[k];
      s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p);
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf : s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<float> distance_field(int width, int height, double resolution,
                                  const std::vector<std::uint8_t>& source) {
  std::vector<double> g(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = source[i] ? 0.0 : kInf;
  }

  const int n = width > height ? width : height;
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  // Columns first, then rows.
  for (int c = 0; c < width; ++c) {
    for (int r = 0; r < height; ++r) f[r] = g[static_cast<std::size_t>(r) * width + c];
    edt_1d(f.data(), d.data(), height, v.data(), z.data());
    for (int r = 0; r < height; ++r) g[static_cast<std::size_t>(r) * width + c] = d[r];
  }
  for (int r = 0; r < height; ++r) {
    double* row = g.data() + static_cast<std::size_t>(r) * width;
    for (int c = 0; c < width; ++c) f[c] = row[c];
    edt_1d(f.data(), d.data(), width, v.data(), z.data());
    for (int c = 0; c < width; ++c) row[c] = d[c];
  }

  std::vector<float> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = g[i] == kInf ? std::numeric_limits<float>::infinity()
                          : static_cast<float>(std::sqrt(g[i]) * resolution);
  }
  return out;
}

}  // namespace navsim
