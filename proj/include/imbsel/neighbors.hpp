#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "imbsel/matrix.hpp"

namespace imbsel {

/// Exact brute-force Euclidean k-nearest neighbours of `query` among the rows
/// of `reference`. Ties in distance go to the lower row index. Row `exclude`
/// (if any) is skipped. Result is sorted nearest first.
std::vector<std::size_t> k_nearest(const Matrix& reference, std::span<const double> query,
                                   std::size_t k,
                                   std::size_t exclude = std::numeric_limits<std::size_t>::max());

}  // namespace imbsel
