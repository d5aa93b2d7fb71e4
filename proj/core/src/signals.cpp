#include "fri2d/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "fri2d/error.hpp"

namespace fri2d {

GaussianPulse gaussian_pulse(double sigma) { return GaussianPulse{sigma, 6.0 * sigma}; }

void validate(const PulseShape& shape) {
  if (const auto* g = std::get_if<GaussianPulse>(&shape)) {
    if (!(g->sigma > 0.0) || !std::isfinite(g->sigma)) throw ConfigError("Gaussian pulse: sigma must be positive");
    if (!(g->truncation_halfwidth >= 4.0 * g->sigma) || !std::isfinite(g->truncation_halfwidth)) {
      std::ostringstream msg;
      msg << "Gaussian pulse: truncation half-width " << g->truncation_halfwidth << " is below 4 sigma = "
          << 4.0 * g->sigma;
      throw ConfigError(msg.str());
    }
  }
}

double pulse_halfwidth(const PulseShape& shape) {
  if (const auto* g = std::get_if<GaussianPulse>(&shape)) return g->truncation_halfwidth;
  return 0.0;
}

double pulse_ctft(const PulseShape& shape, double omega_x, double omega_y) {
  if (const auto* g = std::get_if<GaussianPulse>(&shape)) {
    const double s2 = g->sigma * g->sigma;
    return kTwoPi * s2 * std::exp(-0.5 * s2 * (omega_x * omega_x + omega_y * omega_y));
  }
  return 1.0;
}

void validate(const FriSignal& signal) {
  if (signal.pulses.empty()) throw ConfigError("FriSignal: need at least one pulse");
  validate(signal.shape);
  for (std::size_t a = 0; a < signal.pulses.size(); ++a) {
    const auto& p = signal.pulses[a];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(std::abs(p.gamma))) {
      throw ConfigError("FriSignal: pulse " + std::to_string(a) + " has a non-finite parameter");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (signal.pulses[b].x == p.x && signal.pulses[b].y == p.y) {
        throw ConfigError("FriSignal: pulses " + std::to_string(b) + " and " + std::to_string(a) +
                          " share the same location");
      }
    }
  }
}

namespace {

void check_rates(const SpectralGrid& grid, double omega_sx, double omega_sy) {
  constexpr double kSlack = 1e-12;
  if (!(omega_sx >= grid.critical_rate_x() * (1.0 - kSlack))) {
    std::ostringstream msg;
    msg << "sampling rate omega_sx = " << omega_sx << " is below |K1| omega0x = " << grid.critical_rate_x();
    throw ConfigError(msg.str());
  }
  if (!(omega_sy >= grid.critical_rate_y() * (1.0 - kSlack))) {
    std::ostringstream msg;
    msg << "sampling rate omega_sy = " << omega_sy << " is below |K2| omega0y = " << grid.critical_rate_y();
    throw ConfigError(msg.str());
  }
}

IndexRange index_cover(double lo, double hi, double ts) {
  return {static_cast<int>(std::floor(lo / ts + 1e-9)), static_cast<int>(std::ceil(hi / ts - 1e-9))};
}

// Modulation written as sum_r (sum_k1 a_r e^{j k1 w0x x}) (sum_k2 b_r e^{j k2 w0y y}).
struct ModFactors {
  std::vector<Eigen::VectorXcd> a;
  std::vector<Eigen::VectorXcd> b;
};

ModFactors modulation_factors(const KernelSpec& kernel) {
  ModFactors f;
  if (const auto* ns = std::get_if<NonseparableKernel>(&kernel.variant())) {
    for (const auto& fac : ns->factors()) {
      f.a.push_back(fac.a);
      f.b.push_back(fac.b);
    }
  } else {
    f.a.push_back(Eigen::VectorXcd::Ones(kernel.grid().k1().size()));
    f.b.push_back(Eigen::VectorXcd::Ones(kernel.grid().k2().size()));
  }
  return f;
}

cplx weighted_exponential_sum(const Eigen::VectorXcd& w, const IndexRange& range, double omega0, double x) {
  const double theta = omega0 * x;
  const cplx step = std::polar(1.0, theta);
  cplx term = std::polar(1.0, range.min * theta);
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    sum += w(i) * term;
    term *= step;
  }
  return sum;
}

bool inside(const ConvexPolygon& poly, double x, double y) {
  const double scale = 1e-12 * (1.0 + std::abs(x) + std::abs(y));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    const double cross = (q.x - p.x) * (y - p.y) - (q.y - p.y) * (x - p.x);
    if (cross < -scale) return false;
  }
  return true;
}

// Sutherland-Hodgman against the half-plane a x + b y <= c.
ConvexPolygon clip(const ConvexPolygon& poly, double a, double b, double c) {
  ConvexPolygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    const double fp = a * p.x + b * p.y - c;
    const double fq = a * q.x + b * q.y - c;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

ConvexPolygon clip_to_box(ConvexPolygon poly, double x0, double x1, double y0, double y1) {
  poly = clip(poly, 1.0, 0.0, x1);
  if (poly.size() >= 3) poly = clip(poly, -1.0, 0.0, -x0);
  if (poly.size() >= 3) poly = clip(poly, 0.0, 1.0, y1);
  if (poly.size() >= 3) poly = clip(poly, 0.0, -1.0, -y0);
  return poly;
}

// Vertical extent of a convex polygon at abscissa x.
std::pair<double, double> vertical_extent(const ConvexPolygon& poly, double x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    const double xa = std::min(p.x, q.x);
    const double xb = std::max(p.x, q.x);
    if (x < xa || x > xb) continue;
    if (xb == xa) {
      lo = std::min({lo, p.y, q.y});
      hi = std::max({hi, p.y, q.y});
      continue;
    }
    const double y = p.y + (x - p.x) / (q.x - p.x) * (q.y - p.y);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  return {lo, hi};
}

// Composite Gauss-Legendre nodes on [a, b] with panels no longer than `panel`.
void composite_rule(double a, double b, double panel, std::vector<double>& nodes, std::vector<double>& weights) {
  constexpr int kNodes = 10;
  const auto& rule = gauss_legendre(kNodes);
  nodes.clear();
  weights.clear();
  if (!(b > a)) return;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < kNodes; ++i) {
      nodes.push_back(mid + 0.5 * h * rule.nodes[i]);
      weights.push_back(0.5 * h * rule.weights[i]);
    }
  }
}

class GaussianAcquirer {
 public:
  GaussianAcquirer(const KernelSpec& kernel, const GaussianPulse& pulse)
      : kernel_(kernel), pulse_(pulse), cells_(kernel.cells()), factors_(modulation_factors(kernel)) {
    const auto& g = kernel.grid();
    const double fastest = std::max(g.k1().max_abs() * g.omega0x(), g.k2().max_abs() * g.omega0y());
    panel_ = 2.0 * pulse.sigma;
    if (fastest > 0.0) panel_ = std::min(panel_, 2.0 / fastest);

    // Truncated pulse spectrum on the axis frequencies k w0.
    std::vector<double> nodes;
    std::vector<double> weights;
    const double w = pulse.truncation_halfwidth;
    composite_rule(-w, w, panel_, nodes, weights);
    const auto axis_spectrum = [&](const IndexRange& range, double omega0) {
      Eigen::VectorXd h(range.size());
      for (int i = 0; i < range.size(); ++i) {
        const double om = (range.min + i) * omega0;
        double sum = 0.0;
        for (std::size_t n = 0; n < nodes.size(); ++n) sum += weights[n] * profile(nodes[n]) * std::cos(om * nodes[n]);
        h(i) = sum;
      }
      return h;
    };
    hx_ = axis_spectrum(g.k1(), g.omega0x());
    hy_ = axis_spectrum(g.k2(), g.omega0y());
    for (const auto& a : factors_.a) ax_.push_back(a.cwiseProduct(hx_.cast<cplx>()));
    for (const auto& b : factors_.b) by_.push_back(b.cwiseProduct(hy_.cast<cplx>()));
  }

  /// psi at offset d = sample point - pulse centre, for unit amplitude.
  cplx operator()(double dx, double dy) const {
    const double w = pulse_.truncation_halfwidth;
    const double x0 = dx - w;
    const double x1 = dx + w;
    const double y0 = dy - w;
    const double y1 = dy + w;
    cplx total = 0.0;
    for (const auto& cell : cells_) {
      if (cell.pure_modulation && inside(cell.polygon, x0, y0) && inside(cell.polygon, x1, y0) &&
          inside(cell.polygon, x1, y1) && inside(cell.polygon, x0, y1)) {
        total += cell.gain * interior(dx, dy);
        continue;
      }
      const ConvexPolygon piece = clip_to_box(cell.polygon, x0, x1, y0, y1);
      if (piece.size() < 3) continue;
      total += integrate(cell, piece, dx, dy);
    }
    return total;
  }

 private:
  [[nodiscard]] double profile(double s) const {
    return std::exp(-0.5 * s * s / (pulse_.sigma * pulse_.sigma));
  }

  [[nodiscard]] cplx interior(double dx, double dy) const {
    const auto& g = kernel_.grid();
    cplx sum = 0.0;
    for (std::size_t r = 0; r < ax_.size(); ++r) {
      sum += weighted_exponential_sum(ax_[r], g.k1(), g.omega0x(), dx) *
             weighted_exponential_sum(by_[r], g.k2(), g.omega0y(), dy);
    }
    return sum;
  }

  [[nodiscard]] cplx integrate(const SmoothCell& cell, const ConvexPolygon& piece, double dx, double dy) const {
    const auto& g = kernel_.grid();
    const auto* sep = std::get_if<SeparableSmsKernel>(&kernel_.variant());
    std::vector<double> breaks;
    for (const auto& v : piece) breaks.push_back(v.x);
    std::sort(breaks.begin(), breaks.end());

    std::vector<double> xn, xw, yn, yw;
    std::vector<cplx> ax(factors_.a.size());
    cplx total = 0.0;
    for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
      composite_rule(breaks[seg], breaks[seg + 1], panel_, xn, xw);
      for (std::size_t i = 0; i < xn.size(); ++i) {
        const double x = xn[i];
        double wx = xw[i] * profile(dx - x);
        if (sep && !cell.pure_modulation) wx *= bspline_piece(sep->r1() - 1, cell.piece_x, x / g.period_x());
        if (wx == 0.0) continue;
        for (std::size_t r = 0; r < ax.size(); ++r) ax[r] = weighted_exponential_sum(factors_.a[r], g.k1(), g.omega0x(), x);
        const auto [lo, hi] = vertical_extent(piece, x);
        composite_rule(lo, hi, panel_, yn, yw);
        cplx inner = 0.0;
        for (std::size_t k = 0; k < yn.size(); ++k) {
          const double y = yn[k];
          double wy = yw[k] * profile(dy - y);
          if (sep && !cell.pure_modulation) wy *= bspline_piece(sep->r2() - 1, cell.piece_y, y / g.period_y());
          if (wy == 0.0) continue;
          cplx m = 0.0;
          for (std::size_t r = 0; r < ax.size(); ++r) {
            m += ax[r] * weighted_exponential_sum(factors_.b[r], g.k2(), g.omega0y(), y);
          }
          inner += wy * m;
        }
        total += wx * inner;
      }
    }
    return cell.gain * total;
  }

  const KernelSpec& kernel_;
  GaussianPulse pulse_;
  std::vector<SmoothCell> cells_;
  ModFactors factors_;
  double panel_ = 0.0;
  Eigen::VectorXd hx_;
  Eigen::VectorXd hy_;
  std::vector<Eigen::VectorXcd> ax_;
  std::vector<Eigen::VectorXcd> by_;
};

}  // namespace

SamplingConfig covering_window(const KernelSpec& kernel, const PulseShape& shape, const FieldOfView& fov,
                               double omega_sx, double omega_sy) {
  check_rates(kernel.grid(), omega_sx, omega_sy);
  validate(shape);
  if (!(fov.x1 >= fov.x0) || !(fov.y1 >= fov.y0)) throw ConfigError("covering_window: empty field of view");
  const double w = pulse_halfwidth(shape);
  SamplingConfig cfg;
  cfg.omega_sx = omega_sx;
  cfg.omega_sy = omega_sy;
  cfg.n1 = index_cover(fov.x0 - w - kernel.half_width_x(), fov.x1 + w + kernel.half_width_x(), cfg.ts_x());
  cfg.n2 = index_cover(fov.y0 - w - kernel.half_width_y(), fov.y1 + w + kernel.half_width_y(), cfg.ts_y());
  return cfg;
}

SampleSet acquire(const FriSignal& signal, const KernelSpec& kernel, const SamplingConfig& config) {
  validate(signal);
  check_rates(kernel.grid(), config.omega_sx, config.omega_sy);
  if (config.n1.min > config.n1.max || config.n2.min > config.n2.max) {
    throw ConfigError("acquire: empty sample window");
  }
  const double tsx = config.ts_x();
  const double tsy = config.ts_y();
  const double w = pulse_halfwidth(signal.shape);
  const double reach_x = w + kernel.half_width_x();
  const double reach_y = w + kernel.half_width_y();

  for (std::size_t l = 0; l < signal.pulses.size(); ++l) {
    const auto& p = signal.pulses[l];
    const double lo_x = config.n1.min * tsx - (p.x - reach_x);
    const double hi_x = (p.x + reach_x) - config.n1.max * tsx;
    const double lo_y = config.n2.min * tsy - (p.y - reach_y);
    const double hi_y = (p.y + reach_y) - config.n2.max * tsy;
    const double tol = 1e-9 * std::max(tsx, tsy);
    const double worst = std::max({lo_x, hi_x, lo_y, hi_y});
    if (worst > tol) {
      std::ostringstream msg;
      msg << "acquire: sample window misses the support of pulse " << l << " by " << worst << " (";
      if (worst == lo_x) msg << "x below n1_min Tsx";
      else if (worst == hi_x) msg << "x above n1_max Tsx";
      else if (worst == lo_y) msg << "y below n2_min Tsy";
      else msg << "y above n2_max Tsy";
      msg << ")";
      throw ConfigError(msg.str());
    }
  }

  SampleSet out;
  out.config = config;
  out.values = Eigen::MatrixXcd::Zero(config.n1.size(), config.n2.size());

  const auto* gauss = std::get_if<GaussianPulse>(&signal.shape);
  std::unique_ptr<GaussianAcquirer> acquirer;
  if (gauss) acquirer = std::make_unique<GaussianAcquirer>(kernel, *gauss);

  for (const auto& p : signal.pulses) {
    const int a0 = std::max(config.n1.min, static_cast<int>(std::floor((p.x - reach_x) / tsx)));
    const int a1 = std::min(config.n1.max, static_cast<int>(std::ceil((p.x + reach_x) / tsx)));
    const int b0 = std::max(config.n2.min, static_cast<int>(std::floor((p.y - reach_y) / tsy)));
    const int b1 = std::min(config.n2.max, static_cast<int>(std::ceil((p.y + reach_y) / tsy)));
    for (int n1 = a0; n1 <= a1; ++n1) {
      for (int n2 = b0; n2 <= b1; ++n2) {
        const double dx = n1 * tsx - p.x;
        const double dy = n2 * tsy - p.y;
        const cplx v = acquirer ? (*acquirer)(dx, dy) : kernel.impulse_response(dx, dy);
        out.values(n1 - config.n1.min, n2 - config.n2.min) += p.gamma * v;
      }
    }
  }
  return out;
}

SampleSet add_awgn(const SampleSet& samples, double snr_db, std::uint64_t seed) {
  if (std::isnan(snr_db)) throw ConfigError("add_awgn: snr_db is NaN");
  const double power = samples.values.squaredNorm() / static_cast<double>(samples.values.size());
  if (!(power > 0.0)) throw DegenerateError("add_awgn: all samples are zero, SNR is undefined");
  if (std::isinf(snr_db) && snr_db > 0.0) return samples;

  const double variance = power * std::pow(10.0, -snr_db / 10.0);
  const double peak = samples.values.cwiseAbs().maxCoeff();
  const bool real = (samples.values.imag().cwiseAbs().array() <= 1e-12 * peak).all();

  std::mt19937_64 rng(seed);
  SampleSet out = samples;
  if (real) {
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    for (Eigen::Index i = 0; i < out.values.size(); ++i) out.values(i) += noise(rng);
  } else {
    std::normal_distribution<double> noise(0.0, std::sqrt(0.5 * variance));
    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
      const double re = noise(rng);
      const double im = noise(rng);
      out.values(i) += cplx(re, im);
    }
  }
  return out;
}

double empirical_snr_db(const SampleSet& clean, const SampleSet& noisy) {
  const double noise = (noisy.values - clean.values).squaredNorm();
  return 10.0 * std::log10(clean.values.squaredNorm() / noise);
}

}  // namespace fri2d
