#pragma once

#include <Eigen/Dense>

#include "fri2d/grid.hpp"
#include "fri2d/kernels.hpp"
#include "fri2d/signals.hpp"

namespace fri2d {

/// P on S; row k1 - k1.min, column k2 - k2.min.
struct SwceMeasurements {
  Eigen::MatrixXcd values;
  SpectralGrid grid;
};

/// Tsx Tsy sum_n psi[n1,n2] e^{-j(k1 w0x n1 Tsx + k2 w0y n2 Tsy)} for every
/// (k1, k2) in the grid. Throws ConfigError when a sampling rate is below
/// |K| w0.
Eigen::MatrixXcd dtft_on_grid(const SampleSet& samples, const SpectralGrid& grid);

/// Divides fhat by G H on S. Throws DegenerateError naming (k1, k2) when
/// |G H| < floor * max_S |G H|.
SwceMeasurements demodulate(const Eigen::MatrixXcd& fhat, const KernelSpec& kernel, const PulseShape& shape,
                            const SpectralGrid& grid, double floor = 1e-8);

/// sum_l gamma_l e^{-j(k1 w0x x_l + k2 w0y y_l)} on S.
Eigen::MatrixXcd swce_model(const SpectralGrid& grid, const std::vector<Pulse>& pulses);

}  // namespace fri2d
