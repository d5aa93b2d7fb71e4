#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fri2d/error.hpp"
#include "fri2d/kernels.hpp"

namespace fri2d {

AliasReport alias_check(const FrequencyResponse& response, const SpectralGrid& grid, double omega_sx,
                        double omega_sy, int m_max, AliasTolerances tol) {
  // Relative slack for rates passed as |K| * w0 after a round trip through
  // a period (Ts = 2 pi / ws).
  constexpr double kRateSlack = 1e-12;
  if (omega_sx < grid.critical_rate_x() * (1.0 - kRateSlack)) {
    std::ostringstream msg;
    msg << "alias_check: x sampling rate " << omega_sx << " is below |K1| omega0x = " << grid.critical_rate_x();
    throw ConfigError(msg.str());
  }
  if (omega_sy < grid.critical_rate_y() * (1.0 - kRateSlack)) {
    std::ostringstream msg;
    msg << "alias_check: y sampling rate " << omega_sy << " is below |K2| omega0y = " << grid.critical_rate_y();
    throw ConfigError(msg.str());
  }
  if (m_max < 1) throw ConfigError("alias_check: m_max must be >= 1");

  AliasReport report;
  report.m_max = m_max;
  report.min_grid_magnitude = std::numeric_limits<double>::infinity();
  for (int k1 = grid.k1().min; k1 <= grid.k1().max; ++k1) {
    for (int k2 = grid.k2().min; k2 <= grid.k2().max; ++k2) {
      const double mag = std::abs(response(k1 * grid.omega0x(), k2 * grid.omega0y()));
      report.min_grid_magnitude = std::min(report.min_grid_magnitude, mag);
      report.max_grid_magnitude = std::max(report.max_grid_magnitude, mag);
    }
  }
  const double scale = report.max_grid_magnitude;
  if (!(scale > 0.0)) {
    report.pass = false;
    report.worst_zero_violation = std::numeric_limits<double>::infinity();
    return report;
  }

  for (int k1 = grid.k1().min; k1 <= grid.k1().max; ++k1) {
    for (int k2 = grid.k2().min; k2 <= grid.k2().max; ++k2) {
      for (int m1 = -m_max; m1 <= m_max; ++m1) {
        for (int m2 = -m_max; m2 <= m_max; ++m2) {
          if (m1 == 0 && m2 == 0) continue;
          const double wx = k1 * grid.omega0x() + m1 * omega_sx;
          const double wy = k2 * grid.omega0y() + m2 * omega_sy;
          const double rel = std::abs(response(wx, wy)) / scale;
          if (rel > report.worst_zero_violation) {
            report.worst_zero_violation = rel;
            report.worst_zero_omega_x = wx;
            report.worst_zero_omega_y = wy;
          }
        }
      }
    }
  }
  report.pass = report.min_grid_magnitude >= tol.nonzero * scale && report.worst_zero_violation <= tol.zero;
  return report;
}

AliasReport alias_check(const KernelSpec& kernel, double omega_sx, double omega_sy, int m_max,
                        AliasTolerances tol) {
  return alias_check([&kernel](double wx, double wy) { return kernel.frequency(wx, wy); }, kernel.grid(),
                     omega_sx, omega_sy, m_max, tol);
}

double rotated_sinc_energy(double half_width, int nodes) {
  if (!(half_width > 0.0)) throw ConfigError("rotated_sinc_energy: half_width must be positive");
  const auto& rule = gauss_legendre(nodes);
  // Half-unit cells: the integrand oscillates twice per unit along each axis.
  const double cell = 0.5;
  const int cells = static_cast<int>(std::ceil(2.0 * half_width / cell));
  const double h = 2.0 * half_width / cells;

  std::vector<double> pts;
  std::vector<double> wts;
  pts.reserve(static_cast<std::size_t>(cells) * nodes);
  for (int c = 0; c < cells; ++c) {
    const double mid = -half_width + (c + 0.5) * h;
    for (int i = 0; i < nodes; ++i) {
      pts.push_back(mid + 0.5 * h * rule.nodes[i]);
      wts.push_back(0.5 * h * rule.weights[i]);
    }
  }
  double total = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < pts.size(); ++b) {
      const double v = sinc(pts[a] + pts[b]) * sinc(pts[b] - pts[a]);
      row += wts[b] * v * v;
    }
    total += wts[a] * row;
  }
  return total;
}

}  // namespace fri2d
