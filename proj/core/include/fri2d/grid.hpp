#pragma once

#include <cstddef>

namespace fri2d {

/// Contiguous integer range [min, max], both ends included.
struct IndexRange {
  int min = 0;
  int max = 0;

  [[nodiscard]] int size() const { return max - min + 1; }
  [[nodiscard]] bool contains(int k) const { return k >= min && k <= max; }
  /// Largest |k| in the range.
  [[nodiscard]] int max_abs() const;
  /// True when the range is symmetric about zero.
  [[nodiscard]] bool symmetric() const { return min == -max; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Measurement lattice S = {(k1 omega0x, k2 omega0y)} for k1 in K1, k2 in K2.
class SpectralGrid {
 public:
  /// Throws ConfigError on an empty range or a non-positive base frequency.
  SpectralGrid(IndexRange k1, IndexRange k2, double omega0x, double omega0y);

  /// The symmetric grid [-half, half]^2 with equal base frequencies.
  static SpectralGrid symmetric(int half, double omega0);

  [[nodiscard]] const IndexRange& k1() const { return k1_; }
  [[nodiscard]] const IndexRange& k2() const { return k2_; }
  [[nodiscard]] double omega0x() const { return omega0x_; }
  [[nodiscard]] double omega0y() const { return omega0y_; }
  [[nodiscard]] double period_x() const;
  [[nodiscard]] double period_y() const;
  /// |K1| * |K2|
  [[nodiscard]] std::size_t count() const;

  /// Minimum sampling rates allowed by the alias-cancellation inequality.
  [[nodiscard]] double critical_rate_x() const { return k1_.size() * omega0x_; }
  [[nodiscard]] double critical_rate_y() const { return k2_.size() * omega0y_; }

  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;

 private:
  IndexRange k1_;
  IndexRange k2_;
  double omega0x_;
  double omega0y_;
};

}  // namespace fri2d
