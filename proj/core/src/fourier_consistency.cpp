#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "fri2d/error.hpp"
#include "fri2d/kernels.hpp"

namespace fri2d {
namespace {

// Lattice frame (s, t) with x = A (s, t); the support is the rectangle
// [s_lo, s_hi] x [t_lo, t_hi] split into pieces_s x pieces_t smooth pieces.
struct Frame {
  Eigen::Matrix2d a;
  double s_lo, s_hi, t_lo, t_hi;
  int pieces_s, pieces_t;
};

Frame frame_of(const KernelSpec& kernel) {
  Frame f{};
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel.variant())) {
    f.a = Eigen::Matrix2d::Identity();
    f.s_lo = -sep->half_support_x();
    f.s_hi = sep->half_support_x();
    f.t_lo = -sep->half_support_y();
    f.t_hi = sep->half_support_y();
    f.pieces_s = sep->r1();
    f.pieces_t = sep->r2();
    return f;
  }
  // s = w0x x + w0y y, t = w0y y - w0x x.
  const auto& g = kernel.grid();
  f.a << 0.5 / g.omega0x(), -0.5 / g.omega0x(), 0.5 / g.omega0y(), 0.5 / g.omega0y();
  f.s_lo = f.t_lo = -kTwoPi;
  f.s_hi = f.t_hi = kTwoPi;
  f.pieces_s = f.pieces_t = 1;
  return f;
}

double step_bound(const KernelSpec& kernel) {
  const auto& g = kernel.grid();
  return std::min(g.period_x(), g.period_y()) / (8.0 * std::max(g.k1().size(), g.k2().size()));
}

double spatial_step(const Frame& f, int cells_per_piece) {
  const double hs = (f.s_hi - f.s_lo) / (f.pieces_s * cells_per_piece);
  const double ht = (f.t_hi - f.t_lo) / (f.pieces_t * cells_per_piece);
  return std::max(hs * f.a.col(0).cwiseAbs().maxCoeff(), ht * f.a.col(1).cwiseAbs().maxCoeff());
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan2d {
 public:
  FftPlan2d(int rows, int cols) : rows_(rows), cols_(cols) {
    buffer_ = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_2d(rows, cols, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~FftPlan2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buffer_);
  }
  FftPlan2d(const FftPlan2d&) = delete;
  FftPlan2d& operator=(const FftPlan2d&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buffer_); }
  void execute() { fftw_execute(plan_); }

 private:
  int rows_, cols_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace

int minimum_cells_per_piece(const KernelSpec& kernel) {
  const Frame f = frame_of(kernel);
  const double bound = step_bound(kernel);
  int n = 1;
  while (spatial_step(f, n) > bound) ++n;
  return n;
}

FourierConsistencyReport fourier_consistency(const KernelSpec& kernel, int cells_per_piece, int pad_factor) {
  if (pad_factor < 4) throw ConfigError("fourier_consistency: pad_factor must be >= 4");
  if (cells_per_piece < 1) throw ConfigError("fourier_consistency: cells_per_piece must be >= 1");
  const Frame f = frame_of(kernel);
  const double step = spatial_step(f, cells_per_piece);
  const double bound = step_bound(kernel);
  if (step > bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "fourier_consistency: spatial step " << step << " exceeds min(T0x,T0y)/(8 max|K|) = " << bound
        << "; need cells_per_piece >= " << minimum_cells_per_piece(kernel);
    throw ConfigError(msg.str());
  }

  constexpr int kNodes = 8;
  const auto& rule = gauss_legendre(kNodes);
  const int ns = f.pieces_s * cells_per_piece;
  const int nt = f.pieces_t * cells_per_piece;
  const double hs = (f.s_hi - f.s_lo) / ns;
  const double ht = (f.t_hi - f.t_lo) / nt;
  const int ms = pad_factor * ns;
  const int mt = pad_factor * nt;

  // Signed bin frequencies in the frame.
  std::vector<double> fs(ms);
  std::vector<double> ft(mt);
  for (int m = 0; m < ms; ++m) fs[m] = kTwoPi * (m < ms / 2 ? m : m - ms) / (ms * hs);
  for (int m = 0; m < mt; ++m) ft[m] = kTwoPi * (m < mt / 2 ? m : m - mt) / (mt * ht);

  Eigen::MatrixXcd accum = Eigen::MatrixXcd::Zero(ms, mt);
  FftPlan2d plan(ms, mt);
  std::vector<cplx> phase_s(ms);
  std::vector<cplx> phase_t(mt);

  for (int i = 0; i < kNodes; ++i) {
    const double ds = 0.5 * hs * rule.nodes[i];
    const double ws = 0.5 * hs * rule.weights[i];
    for (int m = 0; m < ms; ++m) phase_s[m] = ws * std::polar(1.0, -fs[m] * (f.s_lo + 0.5 * hs + ds));
    for (int j = 0; j < kNodes; ++j) {
      const double dt = 0.5 * ht * rule.nodes[j];
      const double wt = 0.5 * ht * rule.weights[j];
      for (int m = 0; m < mt; ++m) phase_t[m] = wt * std::polar(1.0, -ft[m] * (f.t_lo + 0.5 * ht + dt));

      cplx* buf = plan.data();
      std::fill(buf, buf + static_cast<std::size_t>(ms) * mt, cplx(0.0));
      for (int c = 0; c < ns; ++c) {
        const double s = f.s_lo + (c + 0.5) * hs + ds;
        for (int d = 0; d < nt; ++d) {
          const double t = f.t_lo + (d + 0.5) * ht + dt;
          const Eigen::Vector2d p = f.a * Eigen::Vector2d(s, t);
          buf[static_cast<std::size_t>(c) * mt + d] = kernel.impulse_response(p.x(), p.y());
        }
      }
      plan.execute();
      for (int m1 = 0; m1 < ms; ++m1) {
        for (int m2 = 0; m2 < mt; ++m2) {
          accum(m1, m2) += phase_s[m1] * phase_t[m2] * buf[static_cast<std::size_t>(m1) * mt + m2];
        }
      }
    }
  }

  const double det = std::abs(f.a.determinant());
  const Eigen::Matrix2d to_omega = f.a.transpose().inverse();
  Eigen::MatrixXcd analytic(ms, mt);
  double peak = 0.0;
  for (int m1 = 0; m1 < ms; ++m1) {
    for (int m2 = 0; m2 < mt; ++m2) {
      const Eigen::Vector2d w = to_omega * Eigen::Vector2d(fs[m1], ft[m2]);
      analytic(m1, m2) = kernel.frequency(w.x(), w.y());
      peak = std::max(peak, std::abs(analytic(m1, m2)));
    }
  }

  FourierConsistencyReport report;
  report.spatial_step = step;
  for (int m1 = 0; m1 < ms; ++m1) {
    for (int m2 = 0; m2 < mt; ++m2) {
      const double mag = std::abs(analytic(m1, m2));
      if (mag <= 1e-3 * peak) continue;
      const double err = std::abs(det * accum(m1, m2) - analytic(m1, m2)) / mag;
      report.max_relative_error = std::max(report.max_relative_error, err);
      ++report.compared_frequencies;
    }
  }
  return report;
}

}  // namespace fri2d
