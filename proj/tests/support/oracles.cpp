#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

namespace oracle {

using namespace fri2d;

double plain_sinc(double u) { return u == 0.0 ? 1.0 : std::sin(kPi * u) / (kPi * u); }

double sms_freq_sum(const SeparableSmsKernel& k, double wx, double wy) {
  const auto& g = k.grid();
  double sum = 0.0;
  for (int k1 = g.k1().min; k1 <= g.k1().max; ++k1) {
    for (int k2 = g.k2().min; k2 <= g.k2().max; ++k2) {
      sum += std::pow(plain_sinc((wx - k1 * g.omega0x()) / g.omega0x()), k.r1()) *
             std::pow(plain_sinc((wy - k2 * g.omega0y()) / g.omega0y()), k.r2());
    }
  }
  return sum;
}

cplx nonsep_freq_sum(const NonseparableKernel& k, double wx, double wy) {
  const auto& g = k.grid();
  cplx sum = 0.0;
  for (int k1 = g.k1().min; k1 <= g.k1().max; ++k1) {
    for (int k2 = g.k2().min; k2 <= g.k2().max; ++k2) {
      const double u = wx / g.omega0x() - k1;
      const double v = wy / g.omega0y() - k2;
      sum += k.q_at(k1, k2) * plain_sinc(u + v) * plain_sinc(v - u);
    }
  }
  return kPi * kPi * sum;
}

double bspline_by_convolution(int r, double t, double h) {
  // Samples of the unit rect on the lattice h (i + 1/2), i.e. cell averages.
  const int half = static_cast<int>(std::lround(0.5 / h));
  std::vector<double> rect(2 * half, 1.0);
  std::vector<double> f = rect;
  for (int n = 0; n < r; ++n) {
    std::vector<double> g(f.size() + rect.size() - 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = 0; j < rect.size(); ++j) g[i + j] += f[i] * rect[j] * h;
    }
    f = std::move(g);
  }
  // f[i] approximates beta^r at the centre of its support plus an offset of
  // (i - (size - 1) / 2) h; interpolate linearly.
  const double pos = t / h + 0.5 * (static_cast<double>(f.size()) - 1.0);
  if (pos < 0.0 || pos > static_cast<double>(f.size() - 1)) return 0.0;
  const auto i0 = static_cast<std::size_t>(std::floor(pos));
  const std::size_t i1 = std::min(i0 + 1, f.size() - 1);
  const double frac = pos - static_cast<double>(i0);
  return (1.0 - frac) * f[i0] + frac * f[i1];
}

cplx truncated_gaussian_spectrum(double sigma, double w, double wx, double wy, int n) {
  if (n % 2 == 1) ++n;
  const double h = 2.0 * w / n;
  cplx sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = -w + i * h;
    const double ci = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    for (int j = 0; j <= n; ++j) {
      const double y = -w + j * h;
      const double cj = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      const double g = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      sum += ci * cj * g * std::polar(1.0, -(wx * x + wy * y));
    }
  }
  return sum * (h * h / 9.0);
}

namespace {

void panels(double a, double b, double width, int nodes, std::vector<double>& x, std::vector<double>& w) {
  const auto& rule = gauss_legendre(nodes);
  const int count = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  const double h = (b - a) / count;
  x.clear();
  w.clear();
  for (int p = 0; p < count; ++p) {
    for (int i = 0; i < nodes; ++i) {
      x.push_back(a + (p + 0.5) * h + 0.5 * h * rule.nodes[i]);
      w.push_back(0.5 * h * rule.weights[i]);
    }
  }
}

}  // namespace

cplx gaussian_sample(const KernelSpec& kernel, double sigma, double halfwidth, double dx, double dy) {
  const auto pulse = [&](double ux, double uy) {
    if (std::abs(ux) > halfwidth || std::abs(uy) > halfwidth) return 0.0;
    return std::exp(-(ux * ux + uy * uy) / (2.0 * sigma * sigma));
  };
  const auto& g = kernel.grid();
  std::vector<double> sx, sw, tx, tw;
  cplx sum = 0.0;
  if (const auto* sep = std::get_if<SeparableSmsKernel>(&kernel.variant())) {
    // One knot interval at a time so every panel sees one polynomial piece.
    for (int px = 0; px < sep->r1(); ++px) {
      const double xa = -sep->half_support_x() + px * g.period_x();
      panels(xa, xa + g.period_x(), 0.5 * sigma, 6, sx, sw);
      for (int py = 0; py < sep->r2(); ++py) {
        const double ya = -sep->half_support_y() + py * g.period_y();
        panels(ya, ya + g.period_y(), 0.5 * sigma, 6, tx, tw);
        for (std::size_t i = 0; i < sx.size(); ++i) {
          if (std::abs(dx - sx[i]) > halfwidth) continue;
          for (std::size_t j = 0; j < tx.size(); ++j) {
            const double h = pulse(dx - sx[i], dy - tx[j]);
            if (h == 0.0) continue;
            sum += sw[i] * tw[j] * h * kernel.impulse_response(sx[i], tx[j]);
          }
        }
      }
    }
    return sum;
  }
  // Rotated frame s = w0x x + w0y y, t = w0y y - w0x x over [-2 pi, 2 pi]^2.
  const double width = 0.5 * sigma * std::min(g.omega0x(), g.omega0y());
  panels(-kTwoPi, kTwoPi, width, 6, sx, sw);
  panels(-kTwoPi, kTwoPi, width, 6, tx, tw);
  const double jac = 1.0 / (2.0 * g.omega0x() * g.omega0y());
  for (std::size_t i = 0; i < sx.size(); ++i) {
    for (std::size_t j = 0; j < tx.size(); ++j) {
      const double x = (sx[i] - tx[j]) / (2.0 * g.omega0x());
      const double y = (sx[i] + tx[j]) / (2.0 * g.omega0y());
      const double h = pulse(dx - x, dy - y);
      if (h == 0.0) continue;
      sum += sw[i] * tw[j] * jac * h * kernel.impulse_response(x, y);
    }
  }
  return sum;
}

SwceMeasurements dirac_measurements(const KernelSpec& kernel, const std::vector<Pulse>& pulses, double oversampling) {
  FieldOfView fov{pulses[0].x, pulses[0].x, pulses[0].y, pulses[0].y};
  for (const auto& p : pulses) {
    fov.x0 = std::min(fov.x0, p.x);
    fov.x1 = std::max(fov.x1, p.x);
    fov.y0 = std::min(fov.y0, p.y);
    fov.y1 = std::max(fov.y1, p.y);
  }
  const auto& g = kernel.grid();
  const SamplingConfig cfg = covering_window(kernel, DiracPulse{}, fov, oversampling * g.critical_rate_x(),
                                             oversampling * g.critical_rate_y());
  const SampleSet s = acquire(FriSignal{pulses, DiracPulse{}}, kernel, cfg);
  return demodulate(dtft_on_grid(s, g), kernel, DiracPulse{}, g);
}

namespace {

Eigen::MatrixXcd design(const SpectralGrid& g, const std::vector<Location>& locs) {
  const int n1 = g.k1().size();
  const int n2 = g.k2().size();
  Eigen::MatrixXcd v(n1 * n2, static_cast<Eigen::Index>(locs.size()));
  for (std::size_t c = 0; c < locs.size(); ++c) {
    for (int b = 0; b < n2; ++b) {
      for (int a = 0; a < n1; ++a) {
        const double ph = (g.k1().min + a) * g.omega0x() * locs[c].x + (g.k2().min + b) * g.omega0y() * locs[c].y;
        v(b * n1 + a, static_cast<Eigen::Index>(c)) = std::polar(1.0, -ph);
      }
    }
  }
  return v;
}

Eigen::VectorXcd flatten(const Eigen::MatrixXcd& p) {
  Eigen::VectorXcd out(p.size());
  for (Eigen::Index b = 0; b < p.cols(); ++b) {
    for (Eigen::Index a = 0; a < p.rows(); ++a) out(b * p.rows() + a) = p(a, b);
  }
  return out;
}

}  // namespace

std::vector<cplx> normal_equation_amplitudes(const SwceMeasurements& p, const std::vector<Location>& locs) {
  const Eigen::MatrixXcd v = design(p.grid, locs);
  const Eigen::MatrixXcd gram = v.adjoint() * v;
  const Eigen::VectorXcd rhs = v.adjoint() * flatten(p.values);
  const Eigen::VectorXcd gamma = gram.llt().solve(rhs);
  return {gamma.data(), gamma.data() + gamma.size()};
}

double brute_force_assignment_cost(const Eigen::MatrixXd& cost) {
  std::vector<int> perm(cost.cols());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (Eigen::Index r = 0; r < cost.rows(); ++r) c += cost(r, perm[r]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

// Maximizes |<a(x,y), R>|^2 / (N - |<a1, a(x,y)>|^2 / N) over the grid; the
// denominator is the norm of a(x,y) after projecting out a fixed atom a1
// (absent: plain correlation).
Location best_atom(const SpectralGrid& g, const Eigen::MatrixXcd& r, const Location* fixed, double ox, double oy,
                   double step) {
  const int nx = static_cast<int>(std::ceil(g.period_x() / step));
  const int ny = static_cast<int>(std::ceil(g.period_y() / step));
  const int n1 = g.k1().size();
  const int n2 = g.k2().size();
  const double n = static_cast<double>(n1) * n2;
  Eigen::MatrixXcd ax(n1, nx);
  Eigen::MatrixXcd by(n2, ny);
  for (int i = 0; i < nx; ++i) {
    for (int a = 0; a < n1; ++a) ax(a, i) = std::polar(1.0, (g.k1().min + a) * g.omega0x() * (ox + i * step));
  }
  for (int j = 0; j < ny; ++j) {
    for (int b = 0; b < n2; ++b) by(b, j) = std::polar(1.0, (g.k2().min + b) * g.omega0y() * (oy + j * step));
  }
  const Eigen::MatrixXcd m = ax.transpose() * r;
  Eigen::VectorXcd dx(nx);
  Eigen::VectorXcd dy(ny);
  if (fixed) {
    // <a1, a(x, y)> = D1(x - x1) D2(y - y1).
    for (int i = 0; i < nx; ++i) {
      cplx s = 0.0;
      for (int a = 0; a < n1; ++a) s += std::polar(1.0, -(g.k1().min + a) * g.omega0x() * (ox + i * step - fixed->x));
      dx(i) = s;
    }
    for (int j = 0; j < ny; ++j) {
      cplx s = 0.0;
      for (int b = 0; b < n2; ++b) s += std::polar(1.0, -(g.k2().min + b) * g.omega0y() * (oy + j * step - fixed->y));
      dy(j) = s;
    }
  }
  double best = -1.0;
  Location loc;
  for (int i = 0; i < nx; ++i) {
    const Eigen::RowVectorXcd row = m.row(i) * by;
    for (int j = 0; j < ny; ++j) {
      double den = n;
      if (fixed) den = std::max(n - std::norm(dx(i) * dy(j)) / n, 1e-12 * n);
      const double score = std::norm(row(j)) / den;
      if (score > best) {
        best = score;
        loc = {ox + i * step, oy + j * step};
      }
    }
  }
  return loc;
}

Eigen::MatrixXcd project_out(const SpectralGrid& g, const Eigen::MatrixXcd& p, const Location& l) {
  const Eigen::MatrixXcd v = design(g, {l});
  const Eigen::VectorXcd flat = flatten(p);
  const Eigen::VectorXcd res = flat - v * ((v.adjoint() * flat) / v.squaredNorm());
  Eigen::MatrixXcd out(p.rows(), p.cols());
  for (Eigen::Index b = 0; b < p.cols(); ++b) {
    for (Eigen::Index a = 0; a < p.rows(); ++a) out(a, b) = res(b * p.rows() + a);
  }
  return out;
}

struct VarPro : Eigen::DenseFunctor<double> {
  VarPro(const SpectralGrid& grid, Eigen::VectorXcd target, int l)
      : Eigen::DenseFunctor<double>(2 * l, static_cast<int>(2 * target.size())), g(grid), p(std::move(target)), L(l) {}

  int operator()(const Eigen::VectorXd& params, Eigen::VectorXd& fvec) const {
    std::vector<Location> locs(L);
    for (int l = 0; l < L; ++l) locs[l] = {params(2 * l), params(2 * l + 1)};
    const Eigen::MatrixXcd v = design(g, locs);
    const Eigen::VectorXcd gamma = v.colPivHouseholderQr().solve(p);
    const Eigen::VectorXcd r = v * gamma - p;
    fvec.head(r.size()) = r.real();
    fvec.tail(r.size()) = r.imag();
    return 0;
  }

  SpectralGrid g;
  Eigen::VectorXcd p;
  int L;
};

}  // namespace

std::vector<Location> grid_search_locations(const SwceMeasurements& p, int L, double ox, double oy, double step) {
  const auto& g = p.grid;
  std::vector<Location> locs;
  locs.push_back(best_atom(g, p.values, nullptr, ox, oy, step));
  if (L == 2) {
    locs.push_back(best_atom(g, project_out(g, p.values, locs[0]), &locs[0], ox, oy, step));
    locs[0] = best_atom(g, project_out(g, p.values, locs[1]), &locs[1], ox, oy, step);
  }
  Eigen::VectorXd x(2 * L);
  for (int l = 0; l < L; ++l) {
    x(2 * l) = locs[l].x;
    x(2 * l + 1) = locs[l].y;
  }
  VarPro f(g, flatten(p.values), L);
  Eigen::NumericalDiff<VarPro> nd(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<VarPro>> lm(nd);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  lm.setMaxfev(4000);
  lm.minimize(x);
  for (int l = 0; l < L; ++l) {
    locs[l] = {wrap(x(2 * l), g.period_x(), ox), wrap(x(2 * l + 1), g.period_y(), oy)};
  }
  return locs;
}

}  // namespace oracle
