#include "fri2d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fri2d/error.hpp"
#include "fri2d/numeric.hpp"

namespace fri2d {

int IndexRange::max_abs() const { return std::max(std::abs(min), std::abs(max)); }

SpectralGrid::SpectralGrid(IndexRange k1, IndexRange k2, double omega0x, double omega0y)
    : k1_(k1), k2_(k2), omega0x_(omega0x), omega0y_(omega0y) {
  if (k1.min > k1.max || k2.min > k2.max) {
    throw ConfigError("SpectralGrid: index ranges must be nonempty (min <= max)");
  }
  if (!(omega0x > 0.0) || !(omega0y > 0.0) || !std::isfinite(omega0x) || !std::isfinite(omega0y)) {
    throw ConfigError("SpectralGrid: base frequencies must be finite and strictly positive");
  }
}

SpectralGrid SpectralGrid::symmetric(int half, double omega0) {
  return SpectralGrid({-half, half}, {-half, half}, omega0, omega0);
}

double SpectralGrid::period_x() const { return kTwoPi / omega0x_; }
double SpectralGrid::period_y() const { return kTwoPi / omega0y_; }

std::size_t SpectralGrid::count() const {
  return static_cast<std::size_t>(k1_.size()) * static_cast<std::size_t>(k2_.size());
}

}  // namespace fri2d
