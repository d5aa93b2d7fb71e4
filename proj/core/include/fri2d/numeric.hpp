#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace fri2d {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Normalized sinc, sin(pi u) / (pi u) with sinc(0) = 1.
/// The argument is reduced about the nearest integer first, so exact
/// nonzero integers give an exact zero.
double sinc(double u);

/// Centered cardinal B-spline of degree `order`: the (order+1)-fold
/// convolution of the unit rect, supported on [-(order+1)/2, (order+1)/2].
/// Degree 0 is the rect with value 1/2 at the jumps t = +-1/2; arguments
/// within kJumpTolerance of a jump count as on it, so lattice points that
/// land on an edge up to rounding get the edge value.
double bspline(int order, double t);

inline constexpr double kJumpTolerance = 1e-12;

/// Polynomial piece `piece` (0-based from the left knot) of the degree-`order`
/// B-spline, evaluated at any t, i.e. without the support cut-off. Used by
/// integrators that need the smooth extension of one piece up to its knots.
double bspline_piece(int order, int piece, double t);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre nodes and weights (Newton iteration on P_n).
/// Results are cached per n; the returned reference stays valid.
const GaussRule& gauss_legendre(int n);

/// Wraps `value` into [origin, origin + period).
double wrap(double value, double period, double origin = 0.0);

}  // namespace fri2d
