#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fri2d/numeric.hpp"

namespace fri2d {

/// Minimum-cost assignment of every row to a distinct column (rows <= cols),
/// Hungarian algorithm with potentials, O(rows^2 cols). Returns the column
/// chosen for each row. Among equal-cost optima the result depends only on
/// the matrix, never on scheduling.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Roots of z^n + c[0] z^{n-1} + ... + c[n-1] from the eigenvalues of the
/// companion matrix.
Eigen::VectorXcd polynomial_roots(const Eigen::VectorXcd& monic_tail);

/// Moore-Penrose pseudoinverse with singular values below tol * max dropped.
Eigen::MatrixXcd pseudo_inverse(const Eigen::MatrixXcd& a, double tol = 1e-13);

}  // namespace fri2d
