#include "fri2d/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fri2d/error.hpp"
#include "fri2d/linalg.hpp"

namespace fri2d {
namespace {

void sort_by_angle(std::vector<cplx>& poles) {
  std::sort(poles.begin(), poles.end(), [](const cplx& a, const cplx& b) {
    const double pa = std::arg(a);
    const double pb = std::arg(b);
    if (pa != pb) return pa < pb;
    return std::abs(a) < std::abs(b);
  });
}

int resolve_pencil(int n, int L, int pencil_param) {
  if (L < 1) throw ConfigError("matrix pencil: L must be >= 1");
  if (n < 2 * L) {
    std::ostringstream msg;
    msg << "matrix pencil: sequence length " << n << " is below 2L = " << 2 * L;
    throw ConfigError(msg.str());
  }
  const int m = pencil_param == 0 ? n / 2 : pencil_param;
  if (m < L || m > n - L) {
    std::ostringstream msg;
    msg << "matrix pencil: pencil parameter " << m << " is outside [" << L << ", " << n - L << "]";
    throw ConfigError(msg.str());
  }
  return m;
}

// Hankel blocks Y[i][j] = s[i + j] of every column of `snapshots`, stacked.
Eigen::MatrixXcd stacked_hankel(const Eigen::MatrixXcd& snapshots, int m) {
  const int n = static_cast<int>(snapshots.rows());
  const int rows = n - m;
  Eigen::MatrixXcd y(rows * snapshots.cols(), m + 1);
  for (Eigen::Index s = 0; s < snapshots.cols(); ++s) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j <= m; ++j) y(s * rows + i, j) = snapshots(i + j, s);
    }
  }
  return y;
}

std::vector<cplx> pencil_poles(const Eigen::MatrixXcd& y, int L, double rank_tol) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(y, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() < L || !(s(0) > 0.0) || s(L - 1) < rank_tol * s(0)) {
    std::ostringstream msg;
    msg << "matrix pencil: rank below L = " << L;
    if (s.size() >= L && s(0) > 0.0) msg << " (sigma_L / sigma_1 = " << s(L - 1) / s(0) << ")";
    throw DegenerateError(msg.str());
  }
  const Eigen::MatrixXcd w = svd.matrixV().leftCols(L).conjugate();
  const Eigen::Index m = w.rows() - 1;
  const Eigen::MatrixXcd phi = pseudo_inverse(w.topRows(m)) * w.bottomRows(m);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(phi, false);
  if (eig.info() != Eigen::Success) throw DegenerateError("matrix pencil: eigenvalue iteration failed");
  std::vector<cplx> poles(eig.eigenvalues().data(), eig.eigenvalues().data() + L);
  sort_by_angle(poles);
  return poles;
}

// Number of singular values of the stacked Hankel matrix above rank_tol, capped at L.
int numerical_rank(const Eigen::MatrixXcd& y, int L, double rank_tol) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(y);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  int r = 0;
  while (r < L && r < s.size() && s(r) >= rank_tol * s(0)) ++r;
  return r;
}

// Columns u^k for k = 0..n-1.
Eigen::MatrixXcd vandermonde(const std::vector<cplx>& poles, int n) {
  Eigen::MatrixXcd v(n, static_cast<Eigen::Index>(poles.size()));
  for (std::size_t c = 0; c < poles.size(); ++c) {
    cplx term = 1.0;
    for (int k = 0; k < n; ++k) {
      v(k, static_cast<Eigen::Index>(c)) = term;
      term *= poles[c];
    }
  }
  return v;
}

Eigen::MatrixXd normalized_magnitude(const Eigen::MatrixXcd& c) {
  Eigen::MatrixXd mag = c.cwiseAbs();
  const double peak = mag.size() > 0 ? mag.maxCoeff() : 0.0;
  if (peak > 0.0) mag /= peak;
  return mag;
}

std::vector<int> ambiguous_rows(const Eigen::MatrixXd& mag, double tol) {
  std::vector<int> rows;
  if (mag.cols() < 2) return rows;
  for (Eigen::Index r = 0; r < mag.rows(); ++r) {
    std::vector<double> v;
    for (Eigen::Index c = 0; c < mag.cols(); ++c) v.push_back(mag(r, c));
    std::partial_sort(v.begin(), v.begin() + 2, v.end(), std::greater<>());
    if (v[0] > 0.0 && v[0] - v[1] <= tol * v[0]) rows.push_back(static_cast<int>(r));
  }
  return rows;
}

double pole_to_location(const cplx& u, double omega0, double origin) {
  return wrap(-std::arg(u) / omega0, kTwoPi / omega0, origin);
}

struct PairedPoles {
  std::vector<cplx> u;
  std::vector<cplx> v;
  Eigen::MatrixXd pairing;
  std::vector<int> ambiguous;
  std::vector<cplx> poles_x;
  std::vector<cplx> poles_y;
};

PairedPoles coupled_pencil(const Eigen::MatrixXcd& p, int L, const EstimationOptions& opt) {
  const int n1 = static_cast<int>(p.rows());
  const int n2 = static_cast<int>(p.cols());
  const int m1 = (n1 + 1) / 2;
  const int m2 = (n2 + 1) / 2;
  const int c1 = n1 - m1 + 1;
  const int c2 = n2 - m2 + 1;
  Eigen::MatrixXcd e(m1 * m2, c1 * c2);
  for (int i1 = 0; i1 < m1; ++i1) {
    for (int i2 = 0; i2 < m2; ++i2) {
      for (int j1 = 0; j1 < c1; ++j1) {
        for (int j2 = 0; j2 < c2; ++j2) e(i1 * m2 + i2, j1 * c2 + j2) = p(i1 + j1, i2 + j2);
      }
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(e, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(L - 1) < opt.rank_tol * s(0)) {
    std::ostringstream msg;
    msg << "estimate_2d: enhanced matrix has rank below L = " << L;
    if (s(0) > 0.0) msg << " (sigma_L / sigma_1 = " << s(L - 1) / s(0) << ")";
    throw DegenerateError(msg.str());
  }
  const Eigen::MatrixXcd us = svd.matrixU().leftCols(L);

  Eigen::MatrixXcd up_x((m1 - 1) * m2, L);
  Eigen::MatrixXcd down_x((m1 - 1) * m2, L);
  for (int i1 = 0; i1 + 1 < m1; ++i1) {
    for (int i2 = 0; i2 < m2; ++i2) {
      up_x.row(i1 * m2 + i2) = us.row(i1 * m2 + i2);
      down_x.row(i1 * m2 + i2) = us.row((i1 + 1) * m2 + i2);
    }
  }
  Eigen::MatrixXcd up_y(m1 * (m2 - 1), L);
  Eigen::MatrixXcd down_y(m1 * (m2 - 1), L);
  for (int i1 = 0; i1 < m1; ++i1) {
    for (int i2 = 0; i2 + 1 < m2; ++i2) {
      up_y.row(i1 * (m2 - 1) + i2) = us.row(i1 * m2 + i2);
      down_y.row(i1 * (m2 - 1) + i2) = us.row(i1 * m2 + i2 + 1);
    }
  }
  const Eigen::MatrixXcd phi_x = pseudo_inverse(up_x) * down_x;
  const Eigen::MatrixXcd phi_y = pseudo_inverse(up_y) * down_y;

  // Fixed irrational weight; distinct (u, v) pairs give distinct eigenvalues.
  const cplx beta = 0.6180339887498949 * std::polar(1.0, 0.5);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(phi_x + beta * phi_y);
  if (eig.info() != Eigen::Success) throw DegenerateError("estimate_2d: joint diagonalization failed");
  const Eigen::MatrixXcd t = eig.eigenvectors();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(t);
  if (!lu.isInvertible()) throw DegenerateError("estimate_2d: shift operators are not jointly diagonalizable");
  const Eigen::MatrixXcd dx = lu.solve(phi_x * t);
  const Eigen::MatrixXcd dy = lu.solve(phi_y * t);

  PairedPoles out;
  for (int l = 0; l < L; ++l) {
    out.u.push_back(dx(l, l));
    out.v.push_back(dy(l, l));
  }
  // Order pairs by x pole angle, then y, for reproducible output.
  std::vector<int> order(L);
  for (int l = 0; l < L; ++l) order[l] = l;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double xa = std::arg(out.u[a]);
    const double xb = std::arg(out.u[b]);
    if (xa != xb) return xa < xb;
    return std::arg(out.v[a]) < std::arg(out.v[b]);
  });
  std::vector<cplx> u;
  std::vector<cplx> v;
  for (int l : order) {
    u.push_back(out.u[l]);
    v.push_back(out.v[l]);
  }
  out.u = u;
  out.v = v;
  out.poles_x = u;
  out.poles_y = v;

  const Eigen::MatrixXcd c =
      pseudo_inverse(vandermonde(u, n1)) * p * pseudo_inverse(vandermonde(v, n2)).transpose();
  out.pairing = normalized_magnitude(c);
  out.ambiguous = ambiguous_rows(out.pairing, opt.ambiguity_tol);
  return out;
}

PairedPoles assignment_pairing(const Eigen::MatrixXcd& p, int L, const EstimationOptions& opt) {
  const int n1 = static_cast<int>(p.rows());
  const int n2 = static_cast<int>(p.cols());
  const int mx = n1 / 2;
  const int my = n2 / 2;
  const Eigen::MatrixXcd hx = stacked_hankel(p, mx);
  const Eigen::MatrixXcd hy = stacked_hankel(p.transpose(), my);
  const int lx = numerical_rank(hx, L, opt.rank_tol);
  const int ly = numerical_rank(hy, L, opt.rank_tol);
  if (lx == 0 || ly == 0) throw DegenerateError("estimate_2d: measurements are zero");

  PairedPoles out;
  out.poles_x = pencil_poles(hx, lx, opt.rank_tol);
  out.poles_y = pencil_poles(hy, ly, opt.rank_tol);
  const Eigen::MatrixXcd c = pseudo_inverse(vandermonde(out.poles_x, n1)) * p *
                             pseudo_inverse(vandermonde(out.poles_y, n2)).transpose();
  out.pairing = normalized_magnitude(c);
  out.ambiguous = ambiguous_rows(out.pairing, opt.ambiguity_tol);

  std::vector<std::pair<int, int>> pairs;
  if (lx == L && ly == L) {
    const std::vector<int> cols = min_cost_assignment(-out.pairing);
    for (int r = 0; r < L; ++r) pairs.emplace_back(r, cols[r]);
  } else {
    // A shared pole: keep the L strongest entries of |C|, ties in (row, column) order.
    std::vector<std::pair<int, int>> all;
    for (int r = 0; r < lx; ++r) {
      for (int s = 0; s < ly; ++s) all.emplace_back(r, s);
    }
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
      return out.pairing(a.first, a.second) > out.pairing(b.first, b.second);
    });
    if (static_cast<int>(all.size()) < L) throw DegenerateError("estimate_2d: fewer pole pairs than L");
    pairs.assign(all.begin(), all.begin() + L);
    std::sort(pairs.begin(), pairs.end());
  }
  for (const auto& [r, s] : pairs) {
    out.u.push_back(out.poles_x[r]);
    out.v.push_back(out.poles_y[s]);
  }
  return out;
}

}  // namespace

std::vector<cplx> matrix_pencil_1d(const Eigen::VectorXcd& sequence, int L, int pencil_param, double rank_tol) {
  const int m = resolve_pencil(static_cast<int>(sequence.size()), L, pencil_param);
  return pencil_poles(stacked_hankel(sequence, m), L, rank_tol);
}

std::vector<cplx> matrix_pencil_multi(const Eigen::MatrixXcd& snapshots, int L, int pencil_param, double rank_tol) {
  const int m = resolve_pencil(static_cast<int>(snapshots.rows()), L, pencil_param);
  return pencil_poles(stacked_hankel(snapshots, m), L, rank_tol);
}

std::vector<cplx> prony_oracle(const Eigen::VectorXcd& sequence, int L) {
  const int n = static_cast<int>(sequence.size());
  if (L < 1) throw ConfigError("prony_oracle: L must be >= 1");
  if (n < 2 * L) {
    std::ostringstream msg;
    msg << "prony_oracle: sequence length " << n << " is below 2L = " << 2 * L;
    throw ConfigError(msg.str());
  }
  Eigen::MatrixXcd a(n - L, L);
  Eigen::VectorXcd rhs(n - L);
  for (int k = L; k < n; ++k) {
    for (int i = 1; i <= L; ++i) a(k - L, i - 1) = sequence(k - i);
    rhs(k - L) = -sequence(k);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(L - 1) < 1e-12 * s(0)) throw DegenerateError("prony_oracle: annihilation system is singular");
  const Eigen::VectorXcd h = svd.solve(rhs);
  const Eigen::VectorXcd roots = polynomial_roots(h);
  std::vector<cplx> poles(roots.data(), roots.data() + roots.size());
  sort_by_angle(poles);
  return poles;
}

AmplitudeFit amplitudes_ls(const SwceMeasurements& p, const std::vector<Location>& locations) {
  const auto& g = p.grid;
  const Eigen::Index rows = p.values.size();
  const auto cols = static_cast<Eigen::Index>(locations.size());
  if (cols == 0) throw ConfigError("amplitudes_ls: no locations");
  Eigen::MatrixXcd v(rows, cols);
  Eigen::VectorXcd ex;
  Eigen::VectorXcd ey;
  for (Eigen::Index c = 0; c < cols; ++c) {
    modulation_terms(g.k1(), g.omega0x(), -locations[c].x, ex);
    modulation_terms(g.k2(), g.omega0y(), -locations[c].y, ey);
    // Column-major vec of ex ey^T, matching Eigen's storage of P.
    for (Eigen::Index b = 0; b < ey.size(); ++b) v.block(b * ex.size(), c, ex.size(), 1) = ex * ey(b);
  }
  const Eigen::Map<const Eigen::VectorXcd> target(p.values.data(), rows);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(v);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) {
    throw DegenerateError("amplitudes_ls: Vandermonde matrix is rank deficient (duplicate locations?)");
  }
  const Eigen::VectorXcd gamma = qr.solve(target);
  AmplitudeFit fit;
  fit.amplitudes.assign(gamma.data(), gamma.data() + cols);
  const double norm = target.norm();
  fit.residual = norm > 0.0 ? (v * gamma - target).norm() / norm : 0.0;
  return fit;
}

EstimationResult estimate_2d(const SwceMeasurements& p, int L, const EstimationOptions& options) {
  const auto& g = p.grid;
  if (L < 1) throw ConfigError("estimate_2d: L must be >= 1");
  if (g.k1().size() < 2 * L + 1 || g.k2().size() < 2 * L + 1) {
    std::ostringstream msg;
    msg << "estimate_2d: need |K1|, |K2| >= 2L + 1 = " << 2 * L + 1 << " (have " << g.k1().size() << ", "
        << g.k2().size() << ")";
    throw ConfigError(msg.str());
  }
  if (p.values.rows() != g.k1().size() || p.values.cols() != g.k2().size()) {
    throw ConfigError("estimate_2d: measurement matrix is not |K1| x |K2|");
  }
  if (!p.values.allFinite()) throw DegenerateError("estimate_2d: measurements contain non-finite values");

  const PairedPoles paired = options.pairing == PairingMethod::CoupledPencil
                                 ? coupled_pencil(p.values, L, options)
                                 : assignment_pairing(p.values, L, options);

  EstimationResult result;
  for (int l = 0; l < L; ++l) {
    result.locations.push_back({pole_to_location(paired.u[l], g.omega0x(), options.wrap_origin_x),
                                pole_to_location(paired.v[l], g.omega0y(), options.wrap_origin_y)});
  }
  const AmplitudeFit fit = amplitudes_ls(p, result.locations);
  result.amplitudes = fit.amplitudes;
  result.residual = fit.residual;
  result.pairing_matrix = paired.pairing;
  result.ambiguous_rows = paired.ambiguous;
  result.poles_x = paired.poles_x;
  result.poles_y = paired.poles_y;
  return result;
}

}  // namespace fri2d
