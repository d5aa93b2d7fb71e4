#pragma once

#include <string>

#include "fri2d/estimation.hpp"
#include "fri2d/experiments.hpp"
#include "fri2d/kernels.hpp"
#include "fri2d/signals.hpp"
#include "fri2d/spectral.hpp"

namespace fri2d {

enum class KernelDomain { Spatial, Frequency };

/// Row-major evaluation lattice: nx points on [x0, x1], ny on [y0, y1].
struct EvalGrid {
  double x0 = 0.0;
  double x1 = 0.0;
  int nx = 0;
  double y0 = 0.0;
  double y1 = 0.0;
  int ny = 0;
};

/// Spatial: the support bounding box padded by 10 percent. Frequency:
/// |w| <= (max|k| + 2) w0 per axis, 8 points per w0 step.
EvalGrid default_eval_grid(const KernelSpec& kernel, KernelDomain domain);

/// CSV `x,y,re,im` (spatial closed form, sms_spatial / nonsep_spatial) or
/// `omega_x,omega_y,re,im` (frequency), 17 significant digits.
void write_kernel_csv(const std::string& path, const KernelSpec& kernel, KernelDomain domain, const EvalGrid& grid);

/// `name.csv` -> `name.json`; other names get `.json` appended.
std::string sidecar_path(const std::string& csv_path);

/// CSV `n1,n2,re,im` and a JSON sidecar with the sampling configuration and
/// `provenance_json` (any JSON text, stored verbatim as an object).
void write_samples(const std::string& csv_path, const SampleSet& samples, const std::string& provenance_json = "{}");
SampleSet read_samples(const std::string& csv_path);

/// CSV `k1,k2,re,im` and a JSON sidecar with the grid.
void write_swce(const std::string& csv_path, const SwceMeasurements& p);
SwceMeasurements read_swce(const std::string& csv_path);

std::string estimation_json(const EstimationResult& result);
std::string alias_report_json(const AliasReport& report);

/// Fully resolved configuration, defaults included.
std::string config_to_json(const ExperimentConfig& config);
/// Starts from the defaults of "kind" (dirac when absent) and overrides the
/// fields present. Unknown keys are rejected with ConfigError.
ExperimentConfig config_from_json(const std::string& text);

/// Report with the config echo; runtime is left out so equal inputs give
/// byte-identical output.
std::string report_to_json(const ExperimentReport& report);
/// CSV `trial,pulse,x,y,x_hat,y_hat,gamma_re,gamma_im,gamma_hat_re,gamma_hat_im`.
void write_trials_csv(const std::string& path, const ExperimentReport& report);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace fri2d
