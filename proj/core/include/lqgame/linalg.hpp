#pragma once

#include <Eigen/Dense>
#include <string>

namespace lqgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd symmetrize(const MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

/** tr(A B) without forming the product. Both arguments must be square. */
inline double trace_product(const MatrixXd& a, const MatrixXd& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

double min_eigenvalue(const MatrixXd& sym);
double max_abs_eigenvalue(const MatrixXd& sym);

/**
 * Canonical covariance cleanup: symmetrize, then clamp eigenvalues in
 * [-1e-10, 0) to zero.  Matrices that are already PSD pass through without an
 * eigendecomposition round-trip so identical inputs keep identical bytes
 * (the covariance tree dedupes on raw bytes).  Eigenvalues below -1e-10 are
 * left alone; they indicate a real defect that validation should surface.
 */
MatrixXd sanitize_covariance(const MatrixXd& p);

/**
 * Inverse of a symmetric matrix through its eigendecomposition.  Returns an
 * exactly symmetric result.  If any |eigenvalue| <= tol * max(1, |lambda|_max)
 * the matrix is reported singular via *singular (the returned matrix is then
 * unusable).
 */
MatrixXd symmetric_inverse(const MatrixXd& sym, double tol, bool* singular);

/** Byte-wise key for covariance dedup; -0.0 is folded into +0.0 first. */
std::string covariance_key(const MatrixXd& p);

}  // namespace lqgame
