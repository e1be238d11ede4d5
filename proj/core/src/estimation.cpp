#include "lqgame/estimation.hpp"

#include "lqgame/errors.hpp"

namespace lqgame {
namespace {

constexpr double kSingularTol = 1e-12;

MatrixXd joseph_posterior(const GameSpec& spec, const MatrixXd& Z,
                          const ObservationUpdate& u) {
  // Joseph form keeps the posterior symmetric positive semidefinite even when
  // the gain is computed from a marginally conditioned innovation.
  MatrixXd I = MatrixXd::Identity(spec.state_dim(), spec.state_dim());
  MatrixXd J = I - u.G * spec.D;
  MatrixXd post = J * Z * J.transpose() +
                  u.G * spec.E * spec.sigma_o * spec.E.transpose() * u.G.transpose();
  return sanitize_covariance(post);
}

}  // namespace

MatrixXd predict_covariance(const GameSpec& spec, const MatrixXd& P) {
  return symmetrize(spec.A * P * spec.A.transpose() +
                    spec.C * spec.sigma_s * spec.C.transpose());
}

ObservationUpdate observation_update(const GameSpec& spec, const MatrixXd& Z) {
  const Eigen::Index nx = spec.state_dim();
  if (perfect_observation(spec)) {
    // The observation pins the state exactly, so the full prior uncertainty
    // is removed no matter how ill-conditioned Z is.
    ObservationUpdate u;
    u.H = Z;
    u.G = spec.D.inverse();
    return u;
  }
  MatrixXd S = symmetrize(spec.D * Z * spec.D.transpose() +
                          spec.E * spec.sigma_o * spec.E.transpose());
  bool singular = false;
  MatrixXd Sinv = symmetric_inverse(S, kSingularTol, &singular);
  if (singular) {
    if (max_abs_eigenvalue(Z) <= kSingularTol) {
      // Nothing left to learn; the degenerate innovation is harmless.
      ObservationUpdate u;
      u.H = MatrixXd::Zero(nx, nx);
      u.G = MatrixXd::Zero(nx, spec.obs_dim());
      return u;
    }
    throw SingularInnovation(
        "innovation covariance is singular but the predicted covariance is "
        "not; the observation geometry leaves an unobservable noisy direction");
  }
  ObservationUpdate u;
  u.G = Z * spec.D.transpose() * Sinv;
  u.H = symmetrize(u.G * spec.D * Z);
  return u;
}

MatrixXd propagate_covariance(const GameSpec& spec, const MatrixXd& P, int h) {
  MatrixXd Z = predict_covariance(spec, P);
  if (h == 0) return sanitize_covariance(Z);
  return joseph_posterior(spec, Z, observation_update(spec, Z));
}

MatrixXd initial_covariance(const GameSpec& spec, int h0) {
  if (spec.initial_kind == InitialStateKind::KnownExactly) {
    if (h0 != 0) throw InvalidInitialObservation();
    return MatrixXd::Zero(spec.state_dim(), spec.state_dim());
  }
  MatrixXd P0 = sanitize_covariance(spec.x0_cov);
  if (h0 == 0) return P0;
  return joseph_posterior(spec, P0, observation_update(spec, P0));
}

ObservationUpdate initial_update(const GameSpec& spec) {
  if (spec.initial_kind == InitialStateKind::KnownExactly) {
    ObservationUpdate u;
    u.H = MatrixXd::Zero(spec.state_dim(), spec.state_dim());
    u.G = MatrixXd::Zero(spec.state_dim(), spec.obs_dim());
    return u;
  }
  return observation_update(spec, sanitize_covariance(spec.x0_cov));
}

FilterState filter_step(const GameSpec& spec, const FilterState& state,
                        const VectorXd& ud, const VectorXd& ua,
                        const VectorXd* y, int h) {
  if ((h == 1) != (y != nullptr))
    throw SolverError(h == 1 ? "delivered observation missing its value"
                             : "observation value supplied for a stage "
                               "without delivery");
  FilterState next;
  VectorXd pred = spec.A * state.xhat + spec.Bd * ud + spec.Ba * ua;
  MatrixXd Z = predict_covariance(spec, state.P);
  if (h == 0) {
    next.xhat = pred;
    next.P = sanitize_covariance(Z);
    return next;
  }
  ObservationUpdate u = observation_update(spec, Z);
  next.xhat = pred + u.G * (*y - spec.D * pred);
  next.P = joseph_posterior(spec, Z, u);
  return next;
}

}  // namespace lqgame
