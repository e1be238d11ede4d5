#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace lqgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/** Who announces their observation/jamming decision first at each stage. */
enum class InfoStructure { DefenderLeads, AttackerLeads, Simultaneous };

enum class InitialStateKind { KnownExactly, Gaussian };

/**
 * Maps the pair (i_d, i_a) to the observation outcome h in {0,1}.  The
 * default rule is h = i_d * (1 - i_a): the defender receives a measurement
 * exactly when it pays for one and the attacker is not jamming.  The solver
 * supports only the default rule; the hook exists so library users can roll
 * out alternate rules in simulation.
 */
struct ObservationRule {
  std::function<int(int, int)> h = [](int i_d, int i_a) {
    return i_d * (1 - i_a);
  };
  bool is_standard() const {
    return h(0, 0) == 0 && h(0, 1) == 0 && h(1, 0) == 1 && h(1, 1) == 0;
  }
};

/**
 * Full description of one finite-horizon game instance.
 *
 * Dynamics   x_{n+1} = A x_n + Bd ud_n + Ba ua_n + C w_n,  w ~ N(0, sigma_s)
 * Sensing    y_n = D x_n + E v_n (delivered only when h_n = 1), v ~ N(0, sigma_o)
 * Stage cost x'Q_n x + ud'Rd_n ud - ua'Ra_n ua + i_d Od_n - i_a Oa_n,
 * plus the terminal term x_N' Q_N x_N.  The defender minimizes, the attacker
 * maximizes.  Q holds N+1 entries (terminal last); Rd/Ra/Od/Oa hold N.
 *
 * Treat instances as immutable once validated.
 */
struct GameSpec {
  int horizon = 0;  // N, number of control stages

  MatrixXd A, Bd, Ba, C, D, E;
  MatrixXd sigma_s, sigma_o;

  InitialStateKind initial_kind = InitialStateKind::Gaussian;
  VectorXd x0_mean;
  MatrixXd x0_cov;  // zero when the initial state is known exactly

  std::vector<MatrixXd> Q;   // size N+1
  std::vector<MatrixXd> Rd;  // size N
  std::vector<MatrixXd> Ra;  // size N
  std::vector<double> Od;    // size N
  std::vector<double> Oa;    // size N

  InfoStructure info_structure = InfoStructure::DefenderLeads;
  ObservationRule rule;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int defender_dim() const { return static_cast<int>(Bd.cols()); }
  int attacker_dim() const { return static_cast<int>(Ba.cols()); }
  int process_noise_dim() const { return static_cast<int>(C.cols()); }
  int obs_dim() const { return static_cast<int>(D.rows()); }
  int obs_noise_dim() const { return static_cast<int>(E.cols()); }
};

/** One failed validation rule, e.g. "Rd[3] not positive definite". */
struct Violation {
  std::string field;
  std::string message;
};

/** Returns an empty list exactly when the spec satisfies every invariant. */
std::vector<Violation> validate(const GameSpec& spec);

/** True when y reveals x exactly: D square invertible and no sensor noise. */
bool perfect_observation(const GameSpec& spec);

/** Field-for-field equality (the rule is compared on its four input pairs). */
bool operator==(const GameSpec& a, const GameSpec& b);

std::string to_string(InfoStructure s);

/**
 * Convenience constructor for one-dimensional instances with constant stage
 * costs.  Cost overrides for individual stages can be applied afterwards.
 */
GameSpec make_scalar_spec(int horizon, double a, double bd, double ba, double c,
                          double d, double e, double sigma_s, double sigma_o,
                          double x0_mean, double x0_cov, double q, double q_N,
                          double rd, double ra, double od, double oa,
                          InfoStructure info = InfoStructure::DefenderLeads);

}  // namespace lqgame
