#include "lqgame/riccati.hpp"

#include <stdexcept>
#include <string>

#include "lqgame/errors.hpp"

namespace lqgame {
namespace {

constexpr double kConcavityTol = 1e-12;
constexpr double kSingularTol = 1e-12;

}  // namespace

CurvatureFactors factor_M(const GameSpec& spec, const MatrixXd& L_next, int n,
                          ConcavityPolicy policy) {
  const std::size_t i = static_cast<std::size_t>(n);
  const Eigen::Index md = spec.defender_dim();
  const Eigen::Index ma = spec.attacker_dim();

  MatrixXd LBd = L_next * spec.Bd;
  MatrixXd LBa = L_next * spec.Ba;
  MatrixXd W = symmetrize(spec.Ra[i] - spec.Ba.transpose() * LBa);
  double margin = min_eigenvalue(W);
  if (policy == ConcavityPolicy::Strict && margin <= kConcavityTol)
    throw ConcavityViolation(
        n, "attacker curvature R^a - B^a' L B^a has min eigenvalue " +
               std::to_string(margin) + " at stage " + std::to_string(n));

  bool singular = false;
  MatrixXd Winv = symmetric_inverse(W, kSingularTol, &singular);
  if (singular)
    throw ConcavityViolation(
        n, "attacker curvature R^a - B^a' L B^a is singular at stage " +
               std::to_string(n));

  MatrixXd X = spec.Ba.transpose() * LBd;  // B^a' L B^d
  MatrixXd SB = symmetrize(spec.Rd[i] + spec.Bd.transpose() * LBd +
                           X.transpose() * Winv * X);
  MatrixXd SBinv = symmetric_inverse(SB, kSingularTol, &singular);
  if (singular)
    throw ConcavityViolation(
        n, "defender curvature is singular after eliminating the attacker "
           "block at stage " +
               std::to_string(n));

  CurvatureFactors f;
  f.W = std::move(W);
  f.SB = std::move(SB);
  f.Winv = Winv;
  f.SBinv = std::move(SBinv);
  f.Omega = MatrixXd::Identity(md + ma, md + ma);
  f.Omega.block(md, 0, ma, md) = Winv * X;
  f.T = MatrixXd::Zero(md + ma, md + ma);
  f.T.topLeftCorner(md, md) = f.SBinv;
  f.T.bottomRightCorner(ma, ma) = -f.Winv;
  return f;
}

RiccatiSolution backward_riccati(const GameSpec& spec, ConcavityPolicy policy) {
  const int N = spec.horizon;
  const Eigen::Index nx = spec.state_dim();
  const Eigen::Index md = spec.defender_dim();
  const Eigen::Index ma = spec.attacker_dim();

  RiccatiSolution sol;
  sol.L.resize(static_cast<std::size_t>(N) + 1);
  sol.M.resize(static_cast<std::size_t>(N));
  sol.factors.resize(static_cast<std::size_t>(N));
  sol.K.resize(static_cast<std::size_t>(N));
  sol.phi.resize(static_cast<std::size_t>(N));
  sol.concavity_ok.assign(static_cast<std::size_t>(N), true);
  sol.concavity_margin.assign(static_cast<std::size_t>(N), 0.0);

  sol.L[static_cast<std::size_t>(N)] = symmetrize(spec.Q.back());

  for (int n = N - 1; n >= 0; --n) {
    const std::size_t i = static_cast<std::size_t>(n);
    const MatrixXd& L1 = sol.L[i + 1];
    CurvatureFactors f = factor_M(spec, L1, n, policy);
    sol.concavity_margin[i] = min_eigenvalue(f.W);
    sol.concavity_ok[i] = sol.concavity_margin[i] > kConcavityTol;

    MatrixXd LBd = L1 * spec.Bd;
    MatrixXd X = spec.Ba.transpose() * LBd;
    MatrixXd M(md + ma, md + ma);
    M.topLeftCorner(md, md) = symmetrize(spec.Rd[i] + spec.Bd.transpose() * LBd);
    M.topRightCorner(md, ma) = X.transpose();
    M.bottomLeftCorner(ma, md) = X;
    M.bottomRightCorner(ma, ma) = -f.W;

    MatrixXd FtLA(md + ma, nx);
    FtLA.topRows(md) = spec.Bd.transpose() * L1 * spec.A;
    FtLA.bottomRows(ma) = spec.Ba.transpose() * L1 * spec.A;
    MatrixXd Minv = f.Minv();
    MatrixXd K = Minv * FtLA;
    MatrixXd phi = symmetrize(FtLA.transpose() * Minv * FtLA);

    sol.factors[i] = std::move(f);
    sol.M[i] = std::move(M);
    sol.K[i] = std::move(K);
    sol.phi[i] = phi;
    sol.L[i] = symmetrize(spec.Q[i] + spec.A.transpose() * L1 * spec.A - phi);
  }
  return sol;
}

PlayerGains gains_explicit(const GameSpec& spec, const MatrixXd& L_next, int n,
                           ConcavityPolicy policy) {
  const Eigen::Index nx = spec.state_dim();
  const MatrixXd& L = L_next;
  CurvatureFactors f = factor_M(spec, L_next, n, policy);
  MatrixXd U = MatrixXd::Identity(nx, nx) +
               L * spec.Ba * f.Winv * spec.Ba.transpose();
  PlayerGains g;
  g.Kd = f.SBinv * spec.Bd.transpose() * U * L * spec.A;
  g.Ka = -f.Winv * spec.Ba.transpose() *
         (MatrixXd::Identity(nx, nx) -
          L * spec.Bd * f.SBinv * spec.Bd.transpose() * U) *
         L * spec.A;
  return g;
}

Controls controls_at(const GameSpec& spec, const RiccatiSolution& sol, int n,
                     const VectorXd& xhat) {
  if (n < 0 || n >= spec.horizon)
    throw std::out_of_range("control stage " + std::to_string(n) +
                            " outside 0.." + std::to_string(spec.horizon - 1));
  const Eigen::Index md = spec.defender_dim();
  const Eigen::Index ma = spec.attacker_dim();
  VectorXd u = -(sol.K[static_cast<std::size_t>(n)] * xhat);
  Controls c;
  c.ud = u.head(md);
  c.ua = u.tail(ma);
  return c;
}

}  // namespace lqgame
