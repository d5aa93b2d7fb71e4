#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "fri2d/grid.hpp"
#include "fri2d/kernels.hpp"
#include "fri2d/numeric.hpp"

namespace fri2d {

struct DiracPulse {};

/// exp(-(x^2 + y^2) / (2 sigma^2)) cut to the square |x|, |y| <= truncation_halfwidth.
struct GaussianPulse {
  double sigma = 0.02;
  double truncation_halfwidth = 0.12;
};

using PulseShape = std::variant<DiracPulse, GaussianPulse>;

/// Gaussian with the default truncation of 6 sigma.
GaussianPulse gaussian_pulse(double sigma);

/// Throws ConfigError for sigma <= 0 or truncation below 4 sigma.
void validate(const PulseShape& shape);

/// Half-width of the pulse support (0 for a Dirac).
double pulse_halfwidth(const PulseShape& shape);

/// Untruncated closed-form CTFT: 1 for a Dirac, 2 pi sigma^2 exp(-sigma^2 |w|^2 / 2)
/// for a Gaussian.
double pulse_ctft(const PulseShape& shape, double omega_x, double omega_y);

struct Pulse {
  cplx gamma = 1.0;
  double x = 0.0;
  double y = 0.0;
};

struct FriSignal {
  std::vector<Pulse> pulses;
  PulseShape shape = DiracPulse{};
};

/// Throws ConfigError for an empty pulse list, duplicate locations or an
/// invalid shape.
void validate(const FriSignal& signal);

/// Rectangular region [x0, x1] x [y0, y1].
struct FieldOfView {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

struct SamplingConfig {
  double omega_sx = 0.0;
  double omega_sy = 0.0;
  IndexRange n1;
  IndexRange n2;

  [[nodiscard]] double ts_x() const { return kTwoPi / omega_sx; }
  [[nodiscard]] double ts_y() const { return kTwoPi / omega_sy; }
};

/// Smallest window whose samples cover the field of view grown by the pulse
/// and kernel supports.
SamplingConfig covering_window(const KernelSpec& kernel, const PulseShape& shape, const FieldOfView& fov,
                               double omega_sx, double omega_sy);

/// Samples psi(n1 Tsx, n2 Tsy); row n1 - n1.min, column n2 - n2.min.
struct SampleSet {
  Eigen::MatrixXcd values;
  SamplingConfig config;
};

/// Samples of psi = f * g with g = KernelSpec::impulse_response.
///
/// Dirac pulses are exact superpositions of kernel evaluations. Gaussian
/// pulses are integrated per sample: where the pulse box lies inside one
/// smooth cell of a pure-modulation kernel the convolution reduces to a
/// modulation sum weighted by the truncated pulse spectrum; elsewhere the
/// box is clipped against each cell and integrated with composite
/// Gauss-Legendre rules.
///
/// Throws ConfigError when a sampling rate is below |K| w0 or the window
/// misses part of the support of psi.
SampleSet acquire(const FriSignal& signal, const KernelSpec& kernel, const SamplingConfig& config);

/// Adds i.i.d. zero-mean Gaussian noise with variance
/// mean(|psi|^2) 10^(-snr_db / 10). Real noise when every sample is real,
/// circular complex noise otherwise. snr_db = +inf returns the input.
/// Throws DegenerateError for all-zero samples.
SampleSet add_awgn(const SampleSet& samples, double snr_db, std::uint64_t seed);

/// 10 log10(signal power / noise power) of `noisy` against `clean`.
double empirical_snr_db(const SampleSet& clean, const SampleSet& noisy);

}  // namespace fri2d
