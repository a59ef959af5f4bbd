#pragma once

#include <cstdint>
#include <vector>

namespace navsim {

/// Exact Euclidean distance (meters, cell-center to cell-center) from
/// every cell to the nearest source cell, row-major. Cells with
/// source[i] != 0 get distance 0. If there is no source anywhere, all
/// distances are +inf.
std::vector<float> distance_field(int width, int height, double resolution,
                                  const std::vector<std::uint8_t>& source);

}  // namespace navsim
