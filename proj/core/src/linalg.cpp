#include "lqgame/linalg.hpp"

#include <cmath>
#include <cstring>

namespace lqgame {

double min_eigenvalue(const MatrixXd& sym) {
  if (sym.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_abs_eigenvalue(const MatrixXd& sym) {
  if (sym.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

MatrixXd sanitize_covariance(const MatrixXd& p) {
  MatrixXd s = symmetrize(p);
  if (s.rows() == 0) return s;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s);
  VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() >= 0.0) return s;
  bool changed = false;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < 0.0 && lam[i] >= -1e-10) {
      lam[i] = 0.0;
      changed = true;
    }
  }
  if (!changed) return s;
  return symmetrize(es.eigenvectors() * lam.asDiagonal() *
                    es.eigenvectors().transpose());
}

MatrixXd symmetric_inverse(const MatrixXd& sym, double tol, bool* singular) {
  if (sym.rows() == 0) {
    if (singular) *singular = false;
    return sym;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  const VectorXd& lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam.cwiseAbs().minCoeff() <= tol * scale) {
    if (singular) *singular = true;
    return MatrixXd::Zero(sym.rows(), sym.cols());
  }
  if (singular) *singular = false;
  return symmetrize(es.eigenvectors() * lam.cwiseInverse().asDiagonal() *
                    es.eigenvectors().transpose());
}

std::string covariance_key(const MatrixXd& p) {
  std::string key(static_cast<std::size_t>(p.size()) * sizeof(double), '\0');
  char* out = key.data();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      double v = p(i, j) + 0.0;  // folds -0.0 into +0.0
      std::memcpy(out, &v, sizeof(double));
      out += sizeof(double);
    }
  }
  return key;
}

}  // namespace lqgame
