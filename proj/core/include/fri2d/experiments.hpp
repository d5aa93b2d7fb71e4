#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fri2d/estimation.hpp"
#include "fri2d/kernels.hpp"
#include "fri2d/signals.hpp"

namespace fri2d {

enum class ExperimentKind { Dirac, Blobs };
enum class KernelKind { Separable, Nonseparable };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Dirac;
  int L = 4;
  IndexRange k1{-4, 4};
  IndexRange k2{-4, 4};
  double omega0x = kPi / 0.99;
  double omega0y = kPi / 0.99;
  /// Sampling rate as a multiple of the critical rate |K| w0, per axis;
  /// oversampling * |K| must be an integer.
  double oversampling = 1.0;
  KernelKind kernel = KernelKind::Nonseparable;
  int r1 = 1;
  int r2 = 1;
  /// Nonseparable coefficients, |K1| x |K2|; all ones when empty.
  std::optional<Eigen::MatrixXcd> q;
  double snr_db = std::numeric_limits<double>::infinity();
  int trials = 10;
  std::uint64_t seed = 0;
  /// Gaussian blobs only.
  double sigma = 0.02;
  double truncation_halfwidth = 0.12;
  FieldOfView fov;
  PairingMethod pairing = PairingMethod::CoupledPencil;
  /// Fixed pulses used in every trial instead of random draws.
  std::vector<Pulse> pulses;
};

/// L = 4 Diracs, K = [-4, 4]^2, w0 = pi / 0.99, critical sampling,
/// nonseparable kernel, no noise, 10 trials.
ExperimentConfig default_dirac_config();

/// L = 3 Gaussian blobs (sigma 0.02, unit amplitude), K = [-15, 15]^2,
/// w0 = pi / 0.99, ws = 31 w0, 15 dB SNR, 50 trials.
ExperimentConfig default_blob_config();

/// Throws ConfigError on an inconsistent configuration.
void validate(const ExperimentConfig& config);

SpectralGrid make_grid(const ExperimentConfig& config);
KernelSpec make_kernel(const ExperimentConfig& config);
PulseShape make_shape(const ExperimentConfig& config);
double sampling_rate_x(const ExperimentConfig& config);
double sampling_rate_y(const ExperimentConfig& config);

/// Pulses for one trial: the fixed list when given, otherwise L random
/// locations uniform over the field of view. Dirac amplitudes are uniform
/// on (0, 1); blob amplitudes are 1.
std::vector<Pulse> draw_pulses(const ExperimentConfig& config, std::uint64_t trial_seed);

struct TrialRecord {
  int trial = 0;
  std::vector<Pulse> truth;
  /// Estimates reordered to match `truth`.
  std::vector<Location> estimates;
  std::vector<cplx> amplitudes;
  /// Mean over pulses of ((dx^2 + dy^2) / 2).
  double squared_error = 0.0;
  double amplitude_error = 0.0;
  double residual = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  double mse = 0.0;
  double mse_db = 0.0;
  double mean_amplitude_error = 0.0;
  /// Wall time; kept out of the serialized report.
  double runtime_seconds = 0.0;
};

/// Conventions written into every report.
inline constexpr const char* kMseConvention =
    "mse_db = 10 log10(mean over trials and pulses of ((x_hat - x)^2 + (y_hat - y)^2) / 2), optimal assignment per "
    "trial";
inline constexpr const char* kSnrConvention =
    "snr_db = mean |psi|^2 over the full sample window / noise variance; noise added to the samples";

/// acquire -> (add_awgn) -> dtft_on_grid -> demodulate -> estimate_2d per
/// trial, trial seed = seed + trial index. Module errors are rethrown with
/// the trial index prefixed.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// run_experiment with kind forced to Dirac / Blobs.
ExperimentReport run_dirac_experiment(ExperimentConfig config);
ExperimentReport run_blob_experiment(ExperimentConfig config);

/// Optimal assignment of estimates to truth by squared distance; returns
/// the estimate index for each true pulse.
std::vector<int> match_estimates(const std::vector<Pulse>& truth, const std::vector<Location>& estimates);

}  // namespace fri2d
