#include "fri2d/kernels.hpp"

#include <cmath>
#include <string>

#include "fri2d/error.hpp"

namespace fri2d {

SeparableSmsKernel::SeparableSmsKernel(SpectralGrid grid, int r1, int r2)
    : grid_(std::move(grid)), r1_(r1), r2_(r2) {
  if (r1 < 1 || r2 < 1) {
    throw ConfigError("SeparableSmsKernel: spline orders r1, r2 must be >= 1 (got " + std::to_string(r1) +
                      ", " + std::to_string(r2) + ")");
  }
}

NonseparableKernel::NonseparableKernel(SpectralGrid grid)
    : NonseparableKernel(grid, Eigen::MatrixXcd::Ones(grid.k1().size(), grid.k2().size())) {}

NonseparableKernel::NonseparableKernel(SpectralGrid grid, Eigen::MatrixXcd q)
    : grid_(std::move(grid)), q_(std::move(q)) {
  if (q_.rows() != grid_.k1().size() || q_.cols() != grid_.k2().size()) {
    throw ConfigError("NonseparableKernel: q must be |K1| x |K2| (" + std::to_string(grid_.k1().size()) + " x " +
                      std::to_string(grid_.k2().size()) + ")");
  }
  for (Eigen::Index r = 0; r < q_.rows(); ++r) {
    for (Eigen::Index c = 0; c < q_.cols(); ++c) {
      if (q_(r, c) == cplx(0.0) || !std::isfinite(std::abs(q_(r, c)))) {
        throw ConfigError("NonseparableKernel: q[" + std::to_string(grid_.k1().min + r) + "," +
                          std::to_string(grid_.k2().min + c) + "] must be finite and nonzero");
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(q_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  for (Eigen::Index r = 0; r < s.size(); ++r) {
    if (s(r) <= 1e-14 * s(0)) break;
    factors_.push_back({svd.matrixU().col(r) * s(r), svd.matrixV().col(r).conjugate()});
  }
}

cplx NonseparableKernel::q_at(int k1, int k2) const { return q_(k1 - grid_.k1().min, k2 - grid_.k2().min); }

bool NonseparableKernel::in_support(double x, double y) const {
  const double s = grid_.omega0x() * x + grid_.omega0y() * y;
  const double t = grid_.omega0y() * y - grid_.omega0x() * x;
  const double edge = kTwoPi * (1.0 + 2.0 * kJumpTolerance);
  return std::abs(s) <= edge && std::abs(t) <= edge;
}

void modulation_terms(const IndexRange& range, double omega0, double x, Eigen::VectorXcd& out) {
  out.resize(range.size());
  const double theta = omega0 * x;
  const cplx step = std::polar(1.0, theta);
  cplx value = std::polar(1.0, range.min * theta);
  for (int i = 0; i < range.size(); ++i) {
    out(i) = value;
    value *= step;
  }
}

namespace {

cplx dirichlet_sum(const IndexRange& range, double omega0, double x) {
  Eigen::VectorXcd terms;
  modulation_terms(range, omega0, x, terms);
  return terms.sum();
}

cplx nonsep_modulation(const NonseparableKernel& kernel, double x, double y) {
  Eigen::VectorXcd ex;
  Eigen::VectorXcd ey;
  modulation_terms(kernel.grid().k1(), kernel.grid().omega0x(), x, ex);
  modulation_terms(kernel.grid().k2(), kernel.grid().omega0y(), y, ey);
  cplx sum = 0.0;
  for (const auto& f : kernel.factors()) sum += f.a.cwiseProduct(ex).sum() * f.b.cwiseProduct(ey).sum();
  return sum;
}

}  // namespace

double sms_freq(const SeparableSmsKernel& kernel, double omega_x, double omega_y) {
  const auto& g = kernel.grid();
  const double ux = omega_x / g.omega0x();
  const double uy = omega_y / g.omega0y();
  double sx = 0.0;
  for (int k1 = g.k1().min; k1 <= g.k1().max; ++k1) sx += std::pow(sinc(ux - k1), kernel.r1());
  double sy = 0.0;
  for (int k2 = g.k2().min; k2 <= g.k2().max; ++k2) sy += std::pow(sinc(uy - k2), kernel.r2());
  // The double sum over K1 x K2 of products factorizes.
  return sx * sy;
}

cplx sms_spatial(const SeparableSmsKernel& kernel, double x, double y) {
  const auto& g = kernel.grid();
  const double bx = bspline(kernel.r1() - 1, x / g.period_x());
  if (bx == 0.0) return 0.0;
  const double by = bspline(kernel.r2() - 1, y / g.period_y());
  if (by == 0.0) return 0.0;
  return bx * by * dirichlet_sum(g.k1(), g.omega0x(), x) * dirichlet_sum(g.k2(), g.omega0y(), y);
}

cplx nonsep_freq(const NonseparableKernel& kernel, double omega_x, double omega_y) {
  const auto& g = kernel.grid();
  const double ux = omega_x / g.omega0x();
  const double uy = omega_y / g.omega0y();
  cplx sum = 0.0;
  for (int k1 = g.k1().min; k1 <= g.k1().max; ++k1) {
    for (int k2 = g.k2().min; k2 <= g.k2().max; ++k2) {
      const double a = ux - k1;
      const double b = uy - k2;
      const double w = sinc(a + b) * sinc(b - a);
      if (w != 0.0) sum += kernel.q_at(k1, k2) * w;
    }
  }
  return kPi * kPi * sum;
}

cplx nonsep_spatial(const NonseparableKernel& kernel, double x, double y) {
  if (!kernel.in_support(x, y)) return 0.0;
  const auto& g = kernel.grid();
  const double s = g.omega0x() * x + g.omega0y() * y;
  const double t = g.omega0y() * y - g.omega0x() * x;
  const double edge = bspline(0, s / (4.0 * kPi)) * bspline(0, t / (4.0 * kPi));
  return edge * g.omega0x() * g.omega0y() / 8.0 * nonsep_modulation(kernel, x, y);
}

// ---------------------------------------------------------------------------

const SpectralGrid& KernelSpec::grid() const {
  return std::visit([](const auto& k) -> const SpectralGrid& { return k.grid(); }, kernel_);
}

cplx KernelSpec::frequency(double omega_x, double omega_y) const {
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_)) return sms_freq(*sep, omega_x, omega_y);
  return nonsep_freq(std::get<NonseparableKernel>(kernel_), omega_x, omega_y);
}

cplx KernelSpec::impulse_response(double x, double y) const {
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_)) {
    return sms_spatial(*sep, x, y) / (sep->grid().period_x() * sep->grid().period_y());
  }
  return nonsep_spatial(std::get<NonseparableKernel>(kernel_), x, y);
}

cplx KernelSpec::modulation(double x, double y) const {
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_)) {
    const auto& g = sep->grid();
    return dirichlet_sum(g.k1(), g.omega0x(), x) * dirichlet_sum(g.k2(), g.omega0y(), y);
  }
  return nonsep_modulation(std::get<NonseparableKernel>(kernel_), x, y);
}

double KernelSpec::half_width_x() const {
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_)) return sep->half_support_x();
  return grid().period_x();
}

double KernelSpec::half_width_y() const {
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_)) return sep->half_support_y();
  return grid().period_y();
}

bool KernelSpec::in_support(double x, double y) const {
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_)) {
    return std::abs(x) <= sep->half_support_x() && std::abs(y) <= sep->half_support_y();
  }
  return std::get<NonseparableKernel>(kernel_).in_support(x, y);
}

std::vector<SmoothCell> KernelSpec::cells() const {
  std::vector<SmoothCell> out;
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_)) {
    const double tx = sep->grid().period_x();
    const double ty = sep->grid().period_y();
    const double gain = 1.0 / (tx * ty);
    for (int px = 0; px < sep->r1(); ++px) {
      const double x0 = -sep->half_support_x() + px * tx;
      for (int py = 0; py < sep->r2(); ++py) {
        const double y0 = -sep->half_support_y() + py * ty;
        SmoothCell cell;
        cell.polygon = {{x0, y0}, {x0 + tx, y0}, {x0 + tx, y0 + ty}, {x0, y0 + ty}};
        cell.piece_x = px;
        cell.piece_y = py;
        cell.pure_modulation = sep->r1() == 1 && sep->r2() == 1;
        cell.gain = gain;
        out.push_back(std::move(cell));
      }
    }
    return out;
  }
  const auto& g = grid();
  SmoothCell cell;
  cell.polygon = {{0.0, -g.period_y()}, {g.period_x(), 0.0}, {0.0, g.period_y()}, {-g.period_x(), 0.0}};
  cell.pure_modulation = true;
  cell.gain = g.omega0x() * g.omega0y() / 8.0;
  out.push_back(std::move(cell));
  return out;
}

cplx KernelSpec::cell_value(const SmoothCell& cell, double x, double y) const {
  if (cell.pure_modulation) return cell.gain * modulation(x, y);
  const auto& sep = std::get<SeparableSmsKernel>(kernel_);
  const auto& g = sep.grid();
  const double bx = bspline_piece(sep.r1() - 1, cell.piece_x, x / g.period_x());
  const double by = bspline_piece(sep.r2() - 1, cell.piece_y, y / g.period_y());
  return cell.gain * bx * by * modulation(x, y);
}

}  // namespace fri2d
