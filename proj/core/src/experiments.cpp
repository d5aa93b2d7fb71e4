#include "fri2d/experiments.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "fri2d/error.hpp"
#include "fri2d/linalg.hpp"
#include "fri2d/spectral.hpp"

namespace fri2d {

ExperimentConfig default_dirac_config() { return ExperimentConfig{}; }

ExperimentConfig default_blob_config() {
  ExperimentConfig c;
  c.kind = ExperimentKind::Blobs;
  c.L = 3;
  c.k1 = {-15, 15};
  c.k2 = {-15, 15};
  c.snr_db = 15.0;
  c.trials = 50;
  c.sigma = 0.02;
  c.truncation_halfwidth = 6.0 * c.sigma;
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.L < 1) throw ConfigError("config: L must be >= 1");
  if (c.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (!(c.oversampling >= 1.0)) throw ConfigError("config: oversampling must be >= 1 (critical rate |K| w0)");
  for (const auto& [axis, n] : {std::pair{"x", c.k1.size()}, std::pair{"y", c.k2.size()}}) {
    const double m = c.oversampling * n;
    if (std::abs(m - std::round(m)) > 1e-9 * m) {
      std::ostringstream msg;
      msg << "config: oversampling * |K| = " << m << " along " << axis
          << " is not an integer; the kernel zeros that cancel aliasing sit on integer multiples of w0";
      throw ConfigError(msg.str());
    }
  }
  if (!(c.fov.x1 > c.fov.x0) || !(c.fov.y1 > c.fov.y0)) throw ConfigError("config: empty field of view");
  if (!c.pulses.empty() && static_cast<int>(c.pulses.size()) != c.L) {
    throw ConfigError("config: fixed pulse list must have L entries");
  }
  if (std::isnan(c.snr_db)) throw ConfigError("config: snr_db is NaN");
  make_kernel(c);
  validate(make_shape(c));
}

SpectralGrid make_grid(const ExperimentConfig& c) { return SpectralGrid(c.k1, c.k2, c.omega0x, c.omega0y); }

KernelSpec make_kernel(const ExperimentConfig& c) {
  const SpectralGrid grid = make_grid(c);
  if (c.kernel == KernelKind::Separable) return SeparableSmsKernel(grid, c.r1, c.r2);
  if (c.q) return NonseparableKernel(grid, *c.q);
  return NonseparableKernel(grid);
}

PulseShape make_shape(const ExperimentConfig& c) {
  if (c.kind == ExperimentKind::Blobs) return GaussianPulse{c.sigma, c.truncation_halfwidth};
  return DiracPulse{};
}

double sampling_rate_x(const ExperimentConfig& c) { return std::round(c.oversampling * c.k1.size()) * c.omega0x; }
double sampling_rate_y(const ExperimentConfig& c) { return std::round(c.oversampling * c.k2.size()) * c.omega0y; }

std::vector<Pulse> draw_pulses(const ExperimentConfig& c, std::uint64_t trial_seed) {
  if (!c.pulses.empty()) return c.pulses;
  std::mt19937_64 rng(trial_seed);
  std::uniform_real_distribution<double> ux(c.fov.x0, c.fov.x1);
  std::uniform_real_distribution<double> uy(c.fov.y0, c.fov.y1);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  std::vector<Pulse> pulses;
  for (int l = 0; l < c.L; ++l) {
    Pulse p;
    p.x = ux(rng);
    p.y = uy(rng);
    p.gamma = c.kind == ExperimentKind::Dirac ? cplx(ua(rng)) : cplx(1.0);
    pulses.push_back(p);
  }
  return pulses;
}

std::vector<int> match_estimates(const std::vector<Pulse>& truth, const std::vector<Location>& estimates) {
  Eigen::MatrixXd cost(truth.size(), estimates.size());
  for (std::size_t a = 0; a < truth.size(); ++a) {
    for (std::size_t b = 0; b < estimates.size(); ++b) {
      const double dx = estimates[b].x - truth[a].x;
      const double dy = estimates[b].y - truth[a].y;
      cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = dx * dx + dy * dy;
    }
  }
  return min_cost_assignment(cost);
}

namespace {

TrialRecord run_trial(const ExperimentConfig& c, const KernelSpec& kernel, const PulseShape& shape, int trial) {
  const std::uint64_t trial_seed = c.seed + static_cast<std::uint64_t>(trial);
  TrialRecord rec;
  rec.trial = trial;
  rec.truth = draw_pulses(c, trial_seed);

  const SpectralGrid grid = kernel.grid();
  const double wsx = sampling_rate_x(c);
  const double wsy = sampling_rate_y(c);
  const SamplingConfig window = covering_window(kernel, shape, c.fov, wsx, wsy);
  SampleSet samples = acquire(FriSignal{rec.truth, shape}, kernel, window);
  if (!(std::isinf(c.snr_db) && c.snr_db > 0.0)) {
    // Noise stream distinct from the location stream of the same trial.
    samples = add_awgn(samples, c.snr_db, trial_seed ^ 0x9e3779b97f4a7c15ULL);
  }
  const Eigen::MatrixXcd fhat = dtft_on_grid(samples, grid);
  const SwceMeasurements p = demodulate(fhat, kernel, shape, grid);

  EstimationOptions opt;
  opt.pairing = c.pairing;
  opt.wrap_origin_x = 0.5 * (c.fov.x0 + c.fov.x1) - 0.5 * grid.period_x();
  opt.wrap_origin_y = 0.5 * (c.fov.y0 + c.fov.y1) - 0.5 * grid.period_y();
  const EstimationResult est = estimate_2d(p, c.L, opt);
  rec.residual = est.residual;

  const std::vector<int> match = match_estimates(rec.truth, est.locations);
  double sq = 0.0;
  double amp = 0.0;
  for (std::size_t l = 0; l < rec.truth.size(); ++l) {
    const auto& e = est.locations[match[l]];
    const double dx = e.x - rec.truth[l].x;
    const double dy = e.y - rec.truth[l].y;
    sq += 0.5 * (dx * dx + dy * dy);
    amp += std::abs(est.amplitudes[match[l]] - rec.truth[l].gamma);
    rec.estimates.push_back(e);
    rec.amplitudes.push_back(est.amplitudes[match[l]]);
  }
  rec.squared_error = sq / rec.truth.size();
  rec.amplitude_error = amp / rec.truth.size();
  return rec;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const KernelSpec kernel = make_kernel(config);
  const PulseShape shape = make_shape(config);

  ExperimentReport report;
  report.config = config;
  double sq = 0.0;
  double amp = 0.0;
  for (int t = 0; t < config.trials; ++t) {
    try {
      report.trials.push_back(run_trial(config, kernel, shape, t));
    } catch (const ConfigError& e) {
      throw ConfigError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const DegenerateError& e) {
      throw DegenerateError("trial " + std::to_string(t) + ": " + e.what());
    }
    sq += report.trials.back().squared_error;
    amp += report.trials.back().amplitude_error;
  }
  report.mse = sq / config.trials;
  report.mse_db = 10.0 * std::log10(report.mse);
  report.mean_amplitude_error = amp / config.trials;
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExperimentReport run_dirac_experiment(ExperimentConfig config) {
  config.kind = ExperimentKind::Dirac;
  return run_experiment(config);
}

ExperimentReport run_blob_experiment(ExperimentConfig config) {
  config.kind = ExperimentKind::Blobs;
  return run_experiment(config);
}

}  // namespace fri2d
