#pragma once

#include <vector>

#include "lqgame/linalg.hpp"
#include "lqgame/model.hpp"

namespace lqgame {

/**
 * Governs how the backward recursion treats stages where the attacker's
 * curvature W = R^a - B^a' L B^a is not positive definite.  Strict rejects
 * such stages outright.  Permissive keeps going as long as the stacked
 * curvature matrix stays invertible, recording which stages lost concavity;
 * the recursion and gains remain well defined there, but the linear profile
 * is a stationary point rather than a saddle.
 */
enum class ConcavityPolicy { Strict, Permissive };

/**
 * Per-stage factorization of the stacked curvature matrix
 *   M = [ R^d + B^d' L B^d   B^d' L B^a        ]
 *       [ B^a' L B^d          B^a' L B^a - R^a ]
 * as M^-1 = Omega T Omega' with Omega unit lower-triangular and
 * T = diag(SB^-1, -W^-1), where W = R^a - B^a' L B^a and
 * SB = R^d + B^d' L B^d + B^d' L B^a W^-1 B^a' L B^d.
 */
struct CurvatureFactors {
  MatrixXd W;
  MatrixXd SB;
  MatrixXd Winv;
  MatrixXd SBinv;
  MatrixXd Omega;
  MatrixXd T;

  MatrixXd Minv() const { return Omega * T * Omega.transpose(); }
};

struct RiccatiSolution {
  std::vector<MatrixXd> L;        // value matrices, stages 0..N
  std::vector<MatrixXd> M;        // stacked curvature, stages 0..N-1
  std::vector<CurvatureFactors> factors;
  std::vector<MatrixXd> K;        // stacked feedback gains, (md+ma) x q
  std::vector<MatrixXd> phi;      // value-of-information weight per stage
  std::vector<bool> concavity_ok;
  std::vector<double> concavity_margin;  // min eigenvalue of W per stage

  int horizon() const { return static_cast<int>(K.size()); }
  MatrixXd Minv(int n) const { return factors[static_cast<std::size_t>(n)].Minv(); }
};

/**
 * Backward value recursion L_n = Q_n + A' L_{n+1} A - phi_n with
 * phi_n = A' L_{n+1} [B^d B^a] M_n^-1 [B^d B^a]' L_{n+1} A.
 * Throws ConcavityViolation per the policy described above.
 */
RiccatiSolution backward_riccati(const GameSpec& spec,
                                 ConcavityPolicy policy = ConcavityPolicy::Strict);

/** Factorization of a single stage's curvature matrix. */
CurvatureFactors factor_M(const GameSpec& spec, const MatrixXd& L_next, int n,
                          ConcavityPolicy policy = ConcavityPolicy::Strict);

/**
 * Closed-form per-player gains obtained by block elimination of M.  Equal to
 * the corresponding row blocks of RiccatiSolution::K.
 */
struct PlayerGains {
  MatrixXd Kd;
  MatrixXd Ka;
};
PlayerGains gains_explicit(const GameSpec& spec, const MatrixXd& L_next, int n,
                           ConcavityPolicy policy = ConcavityPolicy::Strict);

/**
 * Equilibrium controls at stage n given the state estimate:
 *   [u^d; u^a] = -K_n xhat.
 */
struct Controls {
  VectorXd ud;
  VectorXd ua;
};
Controls controls_at(const GameSpec& spec, const RiccatiSolution& sol, int n,
                     const VectorXd& xhat);

}  // namespace lqgame
