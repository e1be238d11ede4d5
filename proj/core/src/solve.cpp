#include "lqgame/solve.hpp"

#include <utility>

#include "lqgame/errors.hpp"

namespace lqgame {

SolveResult solve(const GameSpec& spec, const SolveOptions& options) {
  auto violations = validate(spec);
  if (!violations.empty())
    throw SolverError("invalid spec: " + violations.front().field + ": " +
                      violations.front().message);

  SolveResult result;
  result.riccati = backward_riccati(spec, options.concavity);

  SolveMethod method = options.method;
  if (method == SolveMethod::Auto)
    method = perfect_observation(spec) ||
                     spec.horizon <= options.enumeration_max_horizon
                 ? SolveMethod::Enumeration
                 : SolveMethod::PolicyIteration;

  if (method == SolveMethod::Enumeration) {
    result.tree = backward_enumerate(spec, result.riccati);
  } else {
    PolicyIterationOptions pi;
    pi.max_iters = options.max_policy_iters;
    PolicyIterationResult run = policy_iteration(spec, result.riccati, pi);
    result.iterations = run.iterations;
    result.tree = std::move(run.tree);
  }
  result.value = evaluate_value(spec, result.riccati, result.tree);
  return result;
}

}  // namespace lqgame
