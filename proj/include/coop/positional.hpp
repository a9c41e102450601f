#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace coop {

// One row of the standard sinusoidal positional encoding:
//   row[2k]   = sin(index / 10000^(2k/dim))
//   row[2k+1] = cos(index / 10000^(2k/dim))
// dim must be even.
inline std::vector<double> positional_row(std::size_t dim, std::size_t index) {
  if (dim % 2 != 0) {
    throw std::invalid_argument("positional_row: dim must be even");
  }
  std::vector<double> row(dim);
  for (std::size_t k = 0; 2 * k < dim; ++k) {
    const double freq =
        std::pow(10000.0, -static_cast<double>(2 * k) / static_cast<double>(dim));
    const double angle = static_cast<double>(index) * freq;
    row[2 * k] = std::sin(angle);
    row[2 * k + 1] = std::cos(angle);
  }
  return row;
}

}  // namespace coop
