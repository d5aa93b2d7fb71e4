#include "fri2d/spectral.hpp"

#include <cmath>
#include <sstream>

#include "fri2d/error.hpp"

namespace fri2d {

namespace {

// Rows: index in `range`; columns: n in `window`.
Eigen::MatrixXcd axis_phases(const IndexRange& range, double omega0, const IndexRange& window, double ts) {
  Eigen::MatrixXcd e(range.size(), window.size());
  for (int k = 0; k < range.size(); ++k) {
    for (int n = 0; n < window.size(); ++n) {
      // Reduce the phase before the exponential; k n w0 Ts grows with the window.
      const double phase = std::remainder((range.min + k) * omega0 * ((window.min + n) * ts), kTwoPi);
      e(k, n) = std::polar(1.0, -phase);
    }
  }
  return e;
}

}  // namespace

Eigen::MatrixXcd dtft_on_grid(const SampleSet& samples, const SpectralGrid& grid) {
  const auto& cfg = samples.config;
  if (cfg.omega_sx < grid.critical_rate_x() * (1.0 - 1e-12) || cfg.omega_sy < grid.critical_rate_y() * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "dtft_on_grid: sampling rates (" << cfg.omega_sx << ", " << cfg.omega_sy << ") are below (|K1| w0x, |K2| w0y) = ("
        << grid.critical_rate_x() << ", " << grid.critical_rate_y() << ")";
    throw ConfigError(msg.str());
  }
  if (samples.values.rows() != cfg.n1.size() || samples.values.cols() != cfg.n2.size()) {
    throw ConfigError("dtft_on_grid: sample array does not match its window");
  }
  const Eigen::MatrixXcd ex = axis_phases(grid.k1(), grid.omega0x(), cfg.n1, cfg.ts_x());
  const Eigen::MatrixXcd ey = axis_phases(grid.k2(), grid.omega0y(), cfg.n2, cfg.ts_y());
  return cfg.ts_x() * cfg.ts_y() * (ex * samples.values * ey.transpose());
}

SwceMeasurements demodulate(const Eigen::MatrixXcd& fhat, const KernelSpec& kernel, const PulseShape& shape,
                            const SpectralGrid& grid, double floor) {
  if (fhat.rows() != grid.k1().size() || fhat.cols() != grid.k2().size()) {
    throw ConfigError("demodulate: fhat is not |K1| x |K2|");
  }
  Eigen::MatrixXcd divisor(fhat.rows(), fhat.cols());
  for (int a = 0; a < grid.k1().size(); ++a) {
    for (int b = 0; b < grid.k2().size(); ++b) {
      const double wx = (grid.k1().min + a) * grid.omega0x();
      const double wy = (grid.k2().min + b) * grid.omega0y();
      divisor(a, b) = kernel.frequency(wx, wy) * pulse_ctft(shape, wx, wy);
    }
  }
  const double peak = divisor.cwiseAbs().maxCoeff();
  for (int a = 0; a < grid.k1().size(); ++a) {
    for (int b = 0; b < grid.k2().size(); ++b) {
      if (!(std::abs(divisor(a, b)) >= floor * peak) || peak == 0.0) {
        std::ostringstream msg;
        msg << "demodulate: |G H| = " << std::abs(divisor(a, b)) << " at (k1, k2) = (" << grid.k1().min + a << ", "
            << grid.k2().min + b << ") is below " << floor << " of its maximum " << peak;
        throw DegenerateError(msg.str());
      }
    }
  }
  return {fhat.cwiseQuotient(divisor), grid};
}

Eigen::MatrixXcd swce_model(const SpectralGrid& grid, const std::vector<Pulse>& pulses) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(grid.k1().size(), grid.k2().size());
  for (const auto& pulse : pulses) {
    Eigen::VectorXcd ex;
    Eigen::VectorXcd ey;
    modulation_terms(grid.k1(), grid.omega0x(), -pulse.x, ex);
    modulation_terms(grid.k2(), grid.omega0y(), -pulse.y, ey);
    p += pulse.gamma * ex * ey.transpose();
  }
  return p;
}

}  // namespace fri2d
