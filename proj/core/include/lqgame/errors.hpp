#pragma once

#include <stdexcept>
#include <string>

namespace lqgame {

/** Base class for all solver-raised failures. */
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * The attacker's stage problem is not well posed at some stage: the block
 * Ra_n - Ba' L_{n+1} Ba failed the requested definiteness/invertibility check,
 * so the game matrix M_n cannot be factored (or, under the strict policy, the
 * attacker's maximization is unbounded and no equilibrium of the linear form
 * exists).
 */
class ConcavityViolation : public SolverError {
 public:
  ConcavityViolation(int stage, const std::string& detail)
      : SolverError("concavity violation at stage " + std::to_string(stage) +
                    ": " + detail),
        stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

/** Innovation covariance D Z D' + E Sigma_o E' is numerically singular. */
class SingularInnovation : public SolverError {
 public:
  explicit SingularInnovation(const std::string& detail)
      : SolverError("singular innovation covariance: " + detail) {}
};

/** Initial observation requested for an exactly known initial state. */
class InvalidInitialObservation : public SolverError {
 public:
  InvalidInitialObservation()
      : SolverError("initial state is known exactly; an initial observation "
                    "is meaningless (h0 must be 0)") {}
};

/** Policy iteration was seeded with a (0,1) pair, which the scheme forbids. */
class InvalidInitialPolicy : public SolverError {
 public:
  explicit InvalidInitialPolicy(int stage)
      : SolverError("initial policy contains (i_d,i_a)=(0,1) at stage " +
                    std::to_string(stage)),
        stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

/**
 * Under simultaneous announcements a stage game had no pure-strategy Nash
 * equilibrium (both observation and jamming costs below the stage threshold).
 */
class NoPureNashError : public SolverError {
 public:
  NoPureNashError(int stage, int node_id)
      : SolverError("no pure-strategy equilibrium at stage " +
                    std::to_string(stage) +
                    (node_id >= 0 ? " (tree node " + std::to_string(node_id) + ")"
                                  : std::string())),
        stage_(stage),
        node_id_(node_id) {}
  int stage() const { return stage_; }
  int node_id() const { return node_id_; }

 private:
  int stage_;
  int node_id_;
};

/** Config-file syntax or schema failure, with location information. */
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& field, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) +
                           (field.empty() ? "" : ", field '" + field + "'") +
                           ": " + message),
        line_(line),
        field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace lqgame
