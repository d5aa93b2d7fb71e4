#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "fri2d/grid.hpp"
#include "fri2d/numeric.hpp"

namespace fri2d {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Convex polygon, vertices in counter-clockwise order.
using ConvexPolygon = std::vector<Point2>;

/// Sum of modulated splines, separable in x and y. Orders r1, r2 >= 1 set the
/// B-spline degree (r - 1) and the support [-r T0 / 2, r T0 / 2] per axis.
class SeparableSmsKernel {
 public:
  SeparableSmsKernel(SpectralGrid grid, int r1, int r2);

  [[nodiscard]] const SpectralGrid& grid() const { return grid_; }
  [[nodiscard]] int r1() const { return r1_; }
  [[nodiscard]] int r2() const { return r2_; }
  [[nodiscard]] double half_support_x() const { return 0.5 * r1_ * grid_.period_x(); }
  [[nodiscard]] double half_support_y() const { return 0.5 * r2_ * grid_.period_y(); }

 private:
  SpectralGrid grid_;
  int r1_;
  int r2_;
};

/// Rotated-sinc-product kernel. Its spatial support is the square
/// |omega0x x + omega0y y| <= 2 pi, |omega0y y - omega0x x| <= 2 pi.
class NonseparableKernel {
 public:
  /// All coefficients equal to one.
  explicit NonseparableKernel(SpectralGrid grid);
  /// q is |K1| x |K2|, row k1 - k1_min, column k2 - k2_min. Zero entries are
  /// rejected because the response on S would vanish there.
  NonseparableKernel(SpectralGrid grid, Eigen::MatrixXcd q);

  [[nodiscard]] const SpectralGrid& grid() const { return grid_; }
  [[nodiscard]] const Eigen::MatrixXcd& q() const { return q_; }
  [[nodiscard]] cplx q_at(int k1, int k2) const;
  [[nodiscard]] bool in_support(double x, double y) const;

  /// Rank-revealing factorization q = sum_r a_r b_r^T used for fast
  /// modulation sums; rank 1 for the default all-ones q.
  struct Factor {
    Eigen::VectorXcd a;
    Eigen::VectorXcd b;
  };
  [[nodiscard]] const std::vector<Factor>& factors() const { return factors_; }

 private:
  SpectralGrid grid_;
  Eigen::MatrixXcd q_;
  std::vector<Factor> factors_;
};

/// e^{j k omega0 x} for k in `range`, written into `out` (resized).
void modulation_terms(const IndexRange& range, double omega0, double x, Eigen::VectorXcd& out);

/// Frequency response of the separable SMS kernel:
/// sum over S of sinc^r1((wx - k1 w0x) / w0x) sinc^r2((wy - k2 w0y) / w0y).
double sms_freq(const SeparableSmsKernel& kernel, double omega_x, double omega_y);

/// Impulse response of the separable SMS kernel in its closed form
/// beta^{r1-1}(x / T0x) beta^{r2-1}(y / T0y) sum_S e^{j(k1 w0x x + k2 w0y y)},
/// with no leading constant. Its Fourier transform is T0x T0y sms_freq; see
/// KernelSpec::impulse_response for the unit-gain version.
cplx sms_spatial(const SeparableSmsKernel& kernel, double x, double y);

/// pi^2 sum_S q[k1,k2] sinc(a + b) sinc(b - a), a = wx / w0x - k1, b = wy / w0y - k2.
cplx nonsep_freq(const NonseparableKernel& kernel, double omega_x, double omega_y);

/// (w0x w0y / 8) rect rect sum_S q[k1,k2] e^{j(k1 w0x x + k2 w0y y)}.
/// Exactly zero outside the rotated square; rect takes the value 1/2 on its
/// edges, so sampled Poisson sums stay exact when samples hit an edge.
cplx nonsep_spatial(const NonseparableKernel& kernel, double x, double y);

/// Region on which the impulse response is one smooth (polynomial times
/// exponential) function. Integrators split their domain along these cells.
struct SmoothCell {
  ConvexPolygon polygon;
  int piece_x = 0;
  int piece_y = 0;
  /// The response is gain * modulation(x, y) inside the cell.
  bool pure_modulation = false;
  double gain = 0.0;
};

/// Either kernel family behind one interface.
class KernelSpec {
 public:
  using Variant = std::variant<SeparableSmsKernel, NonseparableKernel>;

  KernelSpec(SeparableSmsKernel kernel) : kernel_(std::move(kernel)) {}  // NOLINT
  KernelSpec(NonseparableKernel kernel) : kernel_(std::move(kernel)) {}  // NOLINT

  [[nodiscard]] const Variant& variant() const { return kernel_; }
  [[nodiscard]] bool separable() const { return std::holds_alternative<SeparableSmsKernel>(kernel_); }
  [[nodiscard]] const SpectralGrid& grid() const;

  /// Analytic frequency response G(j wx, j wy).
  [[nodiscard]] cplx frequency(double omega_x, double omega_y) const;

  /// Impulse response whose continuous Fourier transform is exactly
  /// frequency(). For the nonseparable kernel this is nonsep_spatial; the
  /// separable closed form is divided by T0x T0y.
  [[nodiscard]] cplx impulse_response(double x, double y) const;

  /// sum_S q[k1,k2] e^{j(k1 w0x x + k2 w0y y)} (q = 1 for the separable kernel).
  [[nodiscard]] cplx modulation(double x, double y) const;

  /// Half-widths of the axis-aligned bounding box of the support.
  [[nodiscard]] double half_width_x() const;
  [[nodiscard]] double half_width_y() const;
  [[nodiscard]] bool in_support(double x, double y) const;

  [[nodiscard]] std::vector<SmoothCell> cells() const;
  /// Smooth extension of the impulse response of `cell` to any (x, y).
  [[nodiscard]] cplx cell_value(const SmoothCell& cell, double x, double y) const;

 private:
  Variant kernel_;
};

// ---------------------------------------------------------------------------
// Admissibility checks

struct AliasReport {
  bool pass = false;
  /// max over shifted points of |G| / max_S |G|.
  double worst_zero_violation = 0.0;
  double worst_zero_omega_x = 0.0;
  double worst_zero_omega_y = 0.0;
  /// min and max of |G| over S.
  double min_grid_magnitude = 0.0;
  double max_grid_magnitude = 0.0;
  int m_max = 0;
};

/// Relative tolerances (multiples of max_S |G|).
struct AliasTolerances {
  double zero = 1e-10;
  double nonzero = 1e-6;
};

using FrequencyResponse = std::function<cplx(double, double)>;

/// Checks |G| >= tol.nonzero * max on S and |G| <= tol.zero * max at every
/// (k1 w0x + m1 wsx, k2 w0y + m2 wsy) with max(|m1|,|m2|) <= m_max,
/// (m1,m2) != (0,0). Throws ConfigError naming the axis when a sampling rate
/// is below |K| w0, or when m_max < 1.
AliasReport alias_check(const FrequencyResponse& response, const SpectralGrid& grid, double omega_sx,
                        double omega_sy, int m_max, AliasTolerances tol = {});

/// Convenience overload evaluating KernelSpec::frequency.
AliasReport alias_check(const KernelSpec& kernel, double omega_sx, double omega_sy, int m_max,
                        AliasTolerances tol = {});

struct FourierConsistencyReport {
  double max_relative_error = 0.0;
  double spatial_step = 0.0;
  std::size_t compared_frequencies = 0;
};

/// Numerically transforms the impulse response and compares it with the
/// analytic frequency response.
///
/// The support is tiled by a uniform lattice of cells aligned with the
/// kernel's smooth pieces (knot lines of the splines, edges of the rotated
/// square); `cells_per_piece` cells span each piece along each lattice axis.
/// Every cell carries the same Gauss-Legendre sub-grid, so each sub-grid
/// offset is a uniform lattice whose zero-padded DFT (`pad_factor` times the
/// lattice length) is taken by FFT; phase-shifting and weighting the DFTs
/// gives the continuous transform on the padded frequency lattice. The
/// result is the largest |numeric - analytic| / |analytic| over bins where
/// |G| > 1e-3 max |G|.
///
/// Throws ConfigError when the spatial step exceeds
/// min(T0x, T0y) / (8 max(|K1|, |K2|)) or pad_factor < 4.
FourierConsistencyReport fourier_consistency(const KernelSpec& kernel, int cells_per_piece,
                                             int pad_factor = 4);

/// Smallest cells_per_piece meeting the step bound of fourier_consistency.
int minimum_cells_per_piece(const KernelSpec& kernel);

struct ReproductionRequest {
  int i = 0;
  int j = 0;
  int k1 = 0;
  int k2 = 0;
  double ts_x = 0.0;  ///< shift spacing along x
  double ts_y = 0.0;
  IndexRange shifts_x;  ///< n1 range
  IndexRange shifts_y;  ///< n2 range
  double eval_x0 = 0.0, eval_x1 = 0.0;
  double eval_y0 = 0.0, eval_y1 = 0.0;
  int points_per_axis = 48;
};

struct ReproductionResult {
  Eigen::MatrixXcd coeffs;  ///< rows n1 - shifts_x.min, columns n2 - shifts_y.min
  double relative_residual = 0.0;
};

/// Least-squares fit of sum_n c[n1,n2] g_S(x - n1 Tsx, y - n2 Tsy) to
/// (x^i y^j / (Tsx^i Tsy^j)) e^{j(k1 w0x x + k2 w0y y)} on a tensor grid over
/// the evaluation region. The system is the Kronecker product of one 1-D
/// system per axis and is solved as such. Throws ConfigError when (k1, k2)
/// is outside the grid, i or j is negative, the shift range does not reach
/// one support half-width past the region, or an axis has more shifts than
/// points.
ReproductionResult reproduce_exponential(const SeparableSmsKernel& kernel, const ReproductionRequest& request);

/// Request with critical spacing Ts = T0 / |K|, the region
/// [-T0/2, T0/2]^2 and the tightest admissible shift range.
ReproductionRequest default_reproduction_request(const SeparableSmsKernel& kernel, int i, int j, int k1,
                                                 int k2);

/// Composite Gauss-Legendre quadrature of |sinc(u + v) sinc(v - u)|^2 over
/// [-half_width, half_width]^2 (half-unit cells, `nodes` points per cell axis).
double rotated_sinc_energy(double half_width, int nodes = 10);

}  // namespace fri2d
