#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fri2d/error.hpp"
#include "fri2d/estimation.hpp"
#include "fri2d/experiments.hpp"
#include "fri2d/io.hpp"
#include "fri2d/kernels.hpp"
#include "fri2d/signals.hpp"
#include "fri2d/spectral.hpp"

namespace fs = std::filesystem;
using namespace fri2d;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

// Command-line overrides applied on top of the JSON config.
struct Overrides {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> kind;
  std::optional<int> L;
  std::optional<int> k_half;
  std::optional<double> omega0;
  std::optional<double> oversampling;
  std::optional<std::string> kernel;
  std::optional<int> r1;
  std::optional<int> r2;
  std::optional<std::string> snr_db;
  std::optional<double> sigma;
  std::optional<std::string> pairing;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment/kernel configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", o.out_dir, "Directory for output files")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base random seed (trial seed = seed + trial)");
  cmd->add_option("--trials", o.trials, "Number of trials");
  cmd->add_option("--kind", o.kind, "dirac | blobs")->check(CLI::IsMember({"dirac", "blobs"}));
  cmd->add_option("--L", o.L, "Number of pulses");
  cmd->add_option("--k-half", o.k_half, "Symmetric index ranges K1 = K2 = [-k, k]");
  cmd->add_option("--omega0", o.omega0, "Base frequency on both axes");
  cmd->add_option("--oversampling", o.oversampling, "Sampling rate as a multiple of |K| omega0 (times |K| must be an integer)");
  cmd->add_option("--kernel", o.kernel, "separable | nonseparable")
      ->check(CLI::IsMember({"separable", "nonseparable"}));
  cmd->add_option("--r1", o.r1, "Separable kernel spline order along x");
  cmd->add_option("--r2", o.r2, "Separable kernel spline order along y");
  cmd->add_option("--snr-db", o.snr_db, "Sample SNR in dB, or inf");
  cmd->add_option("--sigma", o.sigma, "Gaussian blob width (truncation 6 sigma)");
  cmd->add_option("--pairing", o.pairing, "coupled | assignment")->check(CLI::IsMember({"coupled", "assignment"}));
}

ExperimentConfig resolve(const Overrides& o, std::optional<ExperimentKind> forced = std::nullopt) {
  ExperimentConfig c;
  std::string kind = o.kind.value_or("");
  if (forced) kind = *forced == ExperimentKind::Dirac ? "dirac" : "blobs";
  if (!o.config_path.empty()) {
    c = config_from_json(read_text(o.config_path));
    if (!kind.empty() && kind != (c.kind == ExperimentKind::Dirac ? "dirac" : "blobs")) {
      // Switching kind keeps explicit fields but takes the new kind's pulse defaults.
      const ExperimentConfig d = kind == "dirac" ? default_dirac_config() : default_blob_config();
      c.kind = d.kind;
      c.sigma = d.sigma;
      c.truncation_halfwidth = d.truncation_halfwidth;
    }
  } else {
    c = kind == "blobs" ? default_blob_config() : default_dirac_config();
  }
  if (o.seed) c.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  if (o.L) c.L = *o.L;
  if (o.k_half) c.k1 = c.k2 = IndexRange{-*o.k_half, *o.k_half};
  if (o.omega0) c.omega0x = c.omega0y = *o.omega0;
  if (o.oversampling) c.oversampling = *o.oversampling;
  if (o.kernel) c.kernel = *o.kernel == "separable" ? KernelKind::Separable : KernelKind::Nonseparable;
  if (o.r1) c.r1 = *o.r1;
  if (o.r2) c.r2 = *o.r2;
  if (o.snr_db) {
    if (*o.snr_db == "inf" || *o.snr_db == "+inf") {
      c.snr_db = std::numeric_limits<double>::infinity();
    } else {
      try {
        c.snr_db = std::stod(*o.snr_db);
      } catch (const std::exception&) {
        throw ConfigError("--snr-db: expected a number or inf, got '" + *o.snr_db + "'");
      }
    }
  }
  if (o.sigma) {
    c.sigma = *o.sigma;
    c.truncation_halfwidth = 6.0 * c.sigma;
  }
  if (o.pairing) c.pairing = *o.pairing == "coupled" ? PairingMethod::CoupledPencil : PairingMethod::AmplitudeAssignment;
  validate(c);
  return c;
}

std::string in_dir(const Overrides& o, const std::string& path, const std::string& fallback) {
  if (!path.empty()) return path;
  fs::create_directories(o.out_dir);
  return (fs::path(o.out_dir) / fallback).string();
}

std::string provenance(const ExperimentConfig& c, const std::vector<Pulse>& pulses) {
  ExperimentConfig echo = c;
  echo.pulses = pulses;
  return "{\"config\": " + config_to_json(echo) + "}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-D finite-rate-of-innovation sampling kernels, simulation and recovery"};
  app.require_subcommand(1);

  Overrides o;
  std::string out;

  std::string domain = "spatial";
  int nx = 0;
  int ny = 0;
  auto* kernel_cmd = app.add_subcommand("kernel", "Export a kernel on a grid (CSV)");
  add_common(kernel_cmd, o);
  kernel_cmd->add_option("--domain", domain, "spatial | frequency")
      ->check(CLI::IsMember({"spatial", "frequency"}))
      ->capture_default_str();
  kernel_cmd->add_option("--nx", nx, "Points along x (default per domain)");
  kernel_cmd->add_option("--ny", ny, "Points along y (default per domain)");
  kernel_cmd->add_option("--out", out, "Output CSV");

  auto* sample_cmd = app.add_subcommand("sample", "Simulate kernel-based sampling of one signal");
  add_common(sample_cmd, o);
  sample_cmd->add_option("--out", out, "Output samples CSV (sidecar JSON written next to it)");

  std::string samples_path;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "DTFT on the spectral grid and demodulation");
  add_common(spectrum_cmd, o);
  spectrum_cmd->add_option("--samples", samples_path, "Samples CSV")->required()->check(CLI::ExistingFile);
  spectrum_cmd->add_option("--out", out, "Output SWCE CSV");

  std::string swce_path;
  auto* estimate_cmd = app.add_subcommand("estimate", "Recover locations and amplitudes from SWCE measurements");
  add_common(estimate_cmd, o);
  estimate_cmd->add_option("--swce", swce_path, "SWCE CSV")->required()->check(CLI::ExistingFile);
  estimate_cmd->add_option("--out", out, "Output JSON");

  int m_max = 3;
  auto* alias_cmd = app.add_subcommand("check-alias", "Verify the alias-cancellation conditions");
  add_common(alias_cmd, o);
  alias_cmd->add_option("--m-max", m_max, "Largest shift index checked")->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "Run an experiment (kind from config or --kind)");
  add_common(run_cmd, o);
  auto* dirac_cmd = app.add_subcommand("run-dirac", "Run the Dirac experiment");
  add_common(dirac_cmd, o);
  auto* blobs_cmd = app.add_subcommand("run-blobs", "Run the Gaussian blob experiment");
  add_common(blobs_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (kernel_cmd->parsed()) {
      const ExperimentConfig c = resolve(o);
      const KernelSpec kernel = make_kernel(c);
      const KernelDomain d = domain == "spatial" ? KernelDomain::Spatial : KernelDomain::Frequency;
      EvalGrid grid = default_eval_grid(kernel, d);
      if (nx > 0) grid.nx = nx;
      if (ny > 0) grid.ny = ny;
      const std::string path = in_dir(o, out, "kernel_" + domain + ".csv");
      write_kernel_csv(path, kernel, d, grid);
      std::cout << path << "\n";
    } else if (sample_cmd->parsed()) {
      const ExperimentConfig c = resolve(o);
      const KernelSpec kernel = make_kernel(c);
      const PulseShape shape = make_shape(c);
      const std::vector<Pulse> pulses = draw_pulses(c, c.seed);
      const SamplingConfig window =
          covering_window(kernel, shape, c.fov, sampling_rate_x(c), sampling_rate_y(c));
      SampleSet samples = acquire(FriSignal{pulses, shape}, kernel, window);
      if (!(std::isinf(c.snr_db) && c.snr_db > 0.0)) samples = add_awgn(samples, c.snr_db, c.seed);
      const std::string path = in_dir(o, out, "samples.csv");
      write_samples(path, samples, provenance(c, pulses));
      std::cout << path << "\n";
    } else if (spectrum_cmd->parsed()) {
      const ExperimentConfig c = resolve(o);
      const KernelSpec kernel = make_kernel(c);
      const SampleSet samples = read_samples(samples_path);
      const SpectralGrid grid = make_grid(c);
      const SwceMeasurements p = demodulate(dtft_on_grid(samples, grid), kernel, make_shape(c), grid);
      const std::string path = in_dir(o, out, "swce.csv");
      write_swce(path, p);
      std::cout << path << "\n";
    } else if (estimate_cmd->parsed()) {
      const ExperimentConfig c = resolve(o);
      const SwceMeasurements p = read_swce(swce_path);
      EstimationOptions opt;
      opt.pairing = c.pairing;
      opt.wrap_origin_x = 0.5 * (c.fov.x0 + c.fov.x1) - 0.5 * p.grid.period_x();
      opt.wrap_origin_y = 0.5 * (c.fov.y0 + c.fov.y1) - 0.5 * p.grid.period_y();
      const EstimationResult r = estimate_2d(p, c.L, opt);
      const std::string path = in_dir(o, out, "estimate.json");
      write_text(path, estimation_json(r));
      std::cout << path << "\n";
    } else if (alias_cmd->parsed()) {
      const ExperimentConfig c = resolve(o);
      const AliasReport r = alias_check(make_kernel(c), sampling_rate_x(c), sampling_rate_y(c), m_max);
      std::cout << alias_report_json(r);
      if (!r.pass) return 1;
    } else {
      std::optional<ExperimentKind> forced;
      if (dirac_cmd->parsed()) forced = ExperimentKind::Dirac;
      if (blobs_cmd->parsed()) forced = ExperimentKind::Blobs;
      const ExperimentConfig c = resolve(o, forced);
      const ExperimentReport r = run_experiment(c);
      fs::create_directories(o.out_dir);
      const fs::path dir(o.out_dir);
      write_text((dir / "report.json").string(), report_to_json(r));
      write_trials_csv((dir / "trials.csv").string(), r);
      char timing[128];
      std::snprintf(timing, sizeof timing, "{\n  \"runtime_seconds\": %.6f\n}\n", r.runtime_seconds);
      write_text((dir / "timing.json").string(), timing);
      std::printf("mse_db %.6g over %d trials (%.2f s)\n", r.mse_db, c.trials, r.runtime_seconds);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegenerateError& e) {
    std::cerr << "numerical degeneracy: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
