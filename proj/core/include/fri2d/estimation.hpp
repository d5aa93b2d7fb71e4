#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fri2d/numeric.hpp"
#include "fri2d/spectral.hpp"

namespace fri2d {

struct Location {
  double x = 0.0;
  double y = 0.0;
};

/// Poles u of p[k] = sum_l c_l u_l^k from the rank-L truncated Hankel pencil.
/// pencil_param M sizes the Hankel matrix (N - M) x (M + 1); 0 selects
/// floor(N / 2). Throws ConfigError when N < 2L or M is outside [L, N - L],
/// DegenerateError when sigma_L / sigma_1 < rank_tol.
std::vector<cplx> matrix_pencil_1d(const Eigen::VectorXcd& sequence, int L, int pencil_param = 0,
                                   double rank_tol = 1e-12);

/// Same pencil with one Hankel block per column of `snapshots`, stacked.
/// Blocks are weighted by their energy through the stacking.
std::vector<cplx> matrix_pencil_multi(const Eigen::MatrixXcd& snapshots, int L, int pencil_param = 0,
                                      double rank_tol = 1e-12);

/// Annihilating-filter (Prony) poles: least-squares filter of length L + 1,
/// then the roots of its polynomial. Throws ConfigError when the sequence is
/// shorter than 2L, DegenerateError when the filter system is singular.
std::vector<cplx> prony_oracle(const Eigen::VectorXcd& sequence, int L);

struct AmplitudeFit {
  std::vector<cplx> amplitudes;
  double residual = 0.0;  ///< ||P - model|| / ||P||
};

/// Least-squares amplitudes for fixed locations. Throws DegenerateError when
/// the 2-D Vandermonde matrix is rank deficient.
AmplitudeFit amplitudes_ls(const SwceMeasurements& p, const std::vector<Location>& locations);

enum class PairingMethod {
  /// Shared signal subspace of the block-Hankel enhanced matrix; x and y
  /// shift operators diagonalized jointly, so poles come out paired.
  CoupledPencil,
  /// Per-axis pencils, then maximum-weight assignment on the amplitude
  /// matrix |C| of all x/y pole combinations.
  AmplitudeAssignment,
};

struct EstimationOptions {
  PairingMethod pairing = PairingMethod::CoupledPencil;
  /// Locations are wrapped into [origin, origin + T0) per axis.
  double wrap_origin_x = 0.0;
  double wrap_origin_y = 0.0;
  double rank_tol = 1e-12;
  double ambiguity_tol = 1e-3;
};

struct EstimationResult {
  std::vector<Location> locations;
  std::vector<cplx> amplitudes;
  double residual = 0.0;
  /// |C| normalized by its largest entry; rows x poles, columns y poles.
  Eigen::MatrixXd pairing_matrix;
  /// Rows of pairing_matrix whose two largest entries are within
  /// ambiguity_tol of each other.
  std::vector<int> ambiguous_rows;
  std::vector<cplx> poles_x;
  std::vector<cplx> poles_y;
};

/// Recovers L pulses from P. Requires |K1|, |K2| >= 2L + 1 (ConfigError).
EstimationResult estimate_2d(const SwceMeasurements& p, int L, const EstimationOptions& options = {});

}  // namespace fri2d
