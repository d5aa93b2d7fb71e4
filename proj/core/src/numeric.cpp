#include "fri2d/numeric.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "fri2d/error.hpp"

namespace fri2d {

double sinc(double u) {
  if (u == 0.0) return 1.0;
  const double n = std::nearbyint(u);
  const double frac = u - n;
  if (frac == 0.0) return 0.0;
  // sin(pi u) = (-1)^n sin(pi (u - n))
  const double sign = (std::fmod(n, 2.0) == 0.0) ? 1.0 : -1.0;
  return sign * std::sin(kPi * frac) / (kPi * u);
}

double bspline(int order, double t) {
  if (order < 0) throw ConfigError("bspline: order must be nonnegative");
  if (order == 0) {
    const double a = std::abs(t) - 0.5;
    if (std::abs(a) <= kJumpTolerance) return 0.5;
    return a < 0.0 ? 1.0 : 0.0;
  }
  const double half = 0.5 * (order + 1);
  if (std::abs(t) >= half) return 0.0;
  const double n = order;
  return ((half + t) * bspline(order - 1, t + 0.5) + (half - t) * bspline(order - 1, t - 0.5)) / n;
}

double bspline_piece(int order, int piece, double t) {
  if (order < 0 || piece < 0 || piece > order) {
    throw ConfigError("bspline_piece: piece index out of range");
  }
  // Right half evaluated through the even symmetry; keeps the truncated-power
  // sum short and well conditioned.
  if (2 * piece > order) return bspline_piece(order, order - piece, -t);
  const double half = 0.5 * (order + 1);
  double binom = 1.0;
  double factorial = 1.0;
  for (int i = 2; i <= order; ++i) factorial *= i;
  double sum = 0.0;
  for (int k = 0; k <= piece; ++k) {
    if (k > 0) binom = binom * (order + 2 - k) / k;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * std::pow(t + half - k, order);
  }
  return sum / factorial;
}

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Refresh the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(n));
  return *slot;
}

double wrap(double value, double period, double origin) {
  double r = std::fmod(value - origin, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return origin + r;
}

}  // namespace fri2d
