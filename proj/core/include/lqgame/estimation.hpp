#pragma once

#include "lqgame/linalg.hpp"
#include "lqgame/model.hpp"

namespace lqgame {

/**
 * One-step prediction of the estimation error covariance:
 *   Z(P) = A P A' + C sigma_s C'.
 */
MatrixXd predict_covariance(const GameSpec& spec, const MatrixXd& P);

/**
 * Observation update quantities for a predicted covariance Z.  The innovation
 * covariance is S = D Z D' + E sigma_o E'; the Kalman gain is G = Z D' S^-1
 * and the covariance reduction is H = Z D' S^-1 D Z, so the posterior
 * covariance after a delivered observation is Z - H.
 *
 * When the observation is perfect (D square and invertible, no measurement
 * noise) the update is computed exactly: H = Z, G = D^-1, posterior zero.
 * Throws SingularInnovation if S is singular while Z itself is not negligible.
 */
struct ObservationUpdate {
  MatrixXd H;  // covariance reduction Z - posterior
  MatrixXd G;  // Kalman gain
};
ObservationUpdate observation_update(const GameSpec& spec, const MatrixXd& Z);

/**
 * Posterior covariance after one stage given the delivery indicator h.
 * h = 1 applies the observation update in Joseph form for numerical symmetry;
 * h = 0 returns the prediction unchanged.
 */
MatrixXd propagate_covariance(const GameSpec& spec, const MatrixXd& P, int h);

/**
 * Covariance of the estimation error before stage 0, given whether the
 * initial observation was delivered (h0).  A known initial state has zero
 * covariance and admits no initial observation; throws
 * InvalidInitialObservation if h0 = 1 in that case.
 */
MatrixXd initial_covariance(const GameSpec& spec, int h0);

/**
 * Covariance reduction available at stage 0.  For a Gaussian initial state
 * this is the update computed directly from x0_cov; there is no prediction
 * step before the first observation.
 */
ObservationUpdate initial_update(const GameSpec& spec);

/** State estimate and error covariance carried through a rollout. */
struct FilterState {
  VectorXd xhat;
  MatrixXd P;
};

/**
 * One full estimator step: predict the mean with both players' controls,
 * then correct with the observation when it was delivered.
 *   xhat_pred = A xhat + B^d ud + B^a ua
 *   h = 1: xhat' = xhat_pred + G (y - D xhat_pred), P' from the Joseph update
 *   h = 0: xhat' = xhat_pred, P' = Z(P)
 * y must be present exactly when h = 1.
 */
FilterState filter_step(const GameSpec& spec, const FilterState& state,
                        const VectorXd& ud, const VectorXd& ua,
                        const VectorXd* y, int h);

}  // namespace lqgame
