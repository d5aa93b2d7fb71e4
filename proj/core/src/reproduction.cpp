#include <algorithm>
#include <cmath>
#include <sstream>

#include "fri2d/error.hpp"
#include "fri2d/kernels.hpp"

namespace fri2d {
namespace {

void check_shift_reach(const IndexRange& shifts, double ts, double lo, double hi, double half, const char* axis) {
  const double slack = 1e-12 * (std::abs(lo) + std::abs(hi) + half);
  if (shifts.min * ts > lo - half + slack || shifts.max * ts < hi + half - slack) {
    std::ostringstream msg;
    msg << "reproduce_exponential: " << axis << " shifts [" << shifts.min << ", " << shifts.max
        << "] must reach one support half-width (" << half << ") past the evaluation region [" << lo << ", " << hi
        << "]";
    throw ConfigError(msg.str());
  }
}

}  // namespace

ReproductionResult reproduce_exponential(const SeparableSmsKernel& kernel, const ReproductionRequest& req) {
  const auto& g = kernel.grid();
  if (!g.k1().contains(req.k1) || !g.k2().contains(req.k2)) {
    std::ostringstream msg;
    msg << "reproduce_exponential: (k1, k2) = (" << req.k1 << ", " << req.k2 << ") is outside K1 x K2";
    throw ConfigError(msg.str());
  }
  if (req.i < 0 || req.j < 0) throw ConfigError("reproduce_exponential: polynomial orders must be >= 0");
  if (!(req.ts_x > 0.0) || !(req.ts_y > 0.0)) throw ConfigError("reproduce_exponential: shift spacing must be positive");
  if (!(req.eval_x1 > req.eval_x0) || !(req.eval_y1 > req.eval_y0)) {
    throw ConfigError("reproduce_exponential: evaluation region is empty");
  }
  check_shift_reach(req.shifts_x, req.ts_x, req.eval_x0, req.eval_x1, kernel.half_support_x(), "x");
  check_shift_reach(req.shifts_y, req.ts_y, req.eval_y0, req.eval_y1, kernel.half_support_y(), "y");

  const int p = req.points_per_axis;
  if (req.shifts_x.size() > p || req.shifts_y.size() > p) {
    std::ostringstream msg;
    msg << "reproduce_exponential: " << std::max(req.shifts_x.size(), req.shifts_y.size())
        << " shifts per axis exceed " << p << " evaluation points per axis";
    throw ConfigError(msg.str());
  }

  // Kronecker-structured system: one 1-D solve per axis, c = c_x c_y^T.
  const auto solve_axis = [p](const IndexRange& k, double w0, int order, double ts, const IndexRange& shifts,
                              double lo, double hi, int power, int freq, Eigen::VectorXcd& fit, Eigen::VectorXcd& t) {
    const double period = kTwoPi / w0;
    Eigen::MatrixXcd a(p, shifts.size());
    t.resize(p);
    for (int row = 0; row < p; ++row) {
      const double x = lo + (row + 0.5) * (hi - lo) / p;
      t(row) = std::pow(x / ts, power) * std::polar(1.0, freq * w0 * x);
      for (int n = 0; n < shifts.size(); ++n) {
        const double u = x - (shifts.min + n) * ts;
        const double b = bspline(order - 1, u / period);
        cplx d = 0.0;
        if (b != 0.0) {
          for (int kk = k.min; kk <= k.max; ++kk) d += std::polar(1.0, kk * w0 * u);
        }
        a(row, n) = b * d;
      }
    }
    const Eigen::VectorXcd c = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(a).solve(t);
    fit = a * c;
    return c;
  };

  Eigen::VectorXcd fit_x, fit_y, tx, ty;
  const Eigen::VectorXcd cx = solve_axis(g.k1(), g.omega0x(), kernel.r1(), req.ts_x, req.shifts_x, req.eval_x0,
                                         req.eval_x1, req.i, req.k1, fit_x, tx);
  const Eigen::VectorXcd cy = solve_axis(g.k2(), g.omega0y(), kernel.r2(), req.ts_y, req.shifts_y, req.eval_y0,
                                         req.eval_y1, req.j, req.k2, fit_y, ty);

  ReproductionResult out;
  out.coeffs = cx * cy.transpose();
  out.relative_residual = (fit_x * fit_y.transpose() - tx * ty.transpose()).norm() / (tx.norm() * ty.norm());
  return out;
}

ReproductionRequest default_reproduction_request(const SeparableSmsKernel& kernel, int i, int j, int k1, int k2) {
  const auto& g = kernel.grid();
  ReproductionRequest req;
  req.i = i;
  req.j = j;
  req.k1 = k1;
  req.k2 = k2;
  req.ts_x = g.period_x() / g.k1().size();
  req.ts_y = g.period_y() / g.k2().size();
  req.eval_x0 = -0.5 * g.period_x();
  req.eval_x1 = 0.5 * g.period_x();
  req.eval_y0 = -0.5 * g.period_y();
  req.eval_y1 = 0.5 * g.period_y();
  const auto reach = [](double lo, double hi, double half, double ts) {
    return IndexRange{static_cast<int>(std::floor((lo - half) / ts + 1e-9)),
                      static_cast<int>(std::ceil((hi + half) / ts - 1e-9))};
  };
  req.shifts_x = reach(req.eval_x0, req.eval_x1, kernel.half_support_x(), req.ts_x);
  req.shifts_y = reach(req.eval_y0, req.eval_y1, kernel.half_support_y(), req.ts_y);
  return req;
}

}  // namespace fri2d
