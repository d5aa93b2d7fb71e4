#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fri2d/estimation.hpp"
#include "fri2d/kernels.hpp"
#include "fri2d/signals.hpp"
#include "fri2d/spectral.hpp"

namespace oracle {

using fri2d::cplx;

/// sin(pi u) / (pi u), no argument reduction.
double plain_sinc(double u);

/// Term-by-term double sums over K1 x K2.
double sms_freq_sum(const fri2d::SeparableSmsKernel& k, double wx, double wy);
cplx nonsep_freq_sum(const fri2d::NonseparableKernel& k, double wx, double wy);

/// beta^r(t) from r repeated discrete convolutions of a sampled rect (step h).
double bspline_by_convolution(int r, double t, double h = 1e-4);

/// 2-D composite Simpson rule of the truncated Gaussian times e^{-j w.x}.
cplx truncated_gaussian_spectrum(double sigma, double halfwidth, double wx, double wy, int intervals = 1200);

/// int h(u) g(d - u) du over the kernel support, with panels aligned to the
/// kernel's smooth pieces and a hard pulse cut-off.
cplx gaussian_sample(const fri2d::KernelSpec& kernel, double sigma, double halfwidth, double dx, double dy);

/// Samples -> DTFT -> demodulation for Diracs at critical rate times `oversampling`.
fri2d::SwceMeasurements dirac_measurements(const fri2d::KernelSpec& kernel, const std::vector<fri2d::Pulse>& pulses,
                                           double oversampling = 1.0);

/// (V^H V)^{-1} V^H p by Cholesky on the normal equations.
std::vector<cplx> normal_equation_amplitudes(const fri2d::SwceMeasurements& p,
                                             const std::vector<fri2d::Location>& locs);

/// Exhaustive minimum over all permutations; returns the best cost.
double brute_force_assignment_cost(const Eigen::MatrixXd& cost);

/// Grid search for L <= 2 locations at `step` resolution over
/// [origin, origin + T0) per axis (greedy atoms with projection scores,
/// then one exchange pass), refined by Levenberg-Marquardt on the
/// variable-projection residual.
std::vector<fri2d::Location> grid_search_locations(const fri2d::SwceMeasurements& p, int L, double origin_x,
                                                   double origin_y, double step = 1e-3);

}  // namespace oracle
