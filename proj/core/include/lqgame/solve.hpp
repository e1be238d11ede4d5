#pragma once

#include "lqgame/policy_iteration.hpp"
#include "lqgame/value.hpp"

namespace lqgame {

enum class SolveMethod { Auto, Enumeration, PolicyIteration };

/**
 * Auto picks enumeration whenever the covariance tree stays small (perfect
 * observation, or horizon at most enumeration_max_horizon) and policy
 * iteration otherwise.
 */
struct SolveOptions {
  SolveMethod method = SolveMethod::Auto;
  ConcavityPolicy concavity = ConcavityPolicy::Permissive;
  int max_policy_iters = 100;
  int enumeration_max_horizon = 16;
};

struct SolveResult {
  RiccatiSolution riccati;
  StrategyTree tree;
  ValueBreakdown value;
  int iterations = 0;  // policy iteration passes, 0 for enumeration
};

/** Riccati recursion, decision layer, and value breakdown in one call. */
SolveResult solve(const GameSpec& spec, const SolveOptions& options = {});

}  // namespace lqgame
