#pragma once

#include <vector>

#include "lqgame/strategy_tree.hpp"

namespace lqgame {

struct PolicyIterationOptions {
  int max_iters = 100;
};

/**
 * Fixed-point search over open-loop observation/jamming sequences.  `Id` and
 * `Ia` are the final sequences, `J[k]` the cost-to-go of the
 * observation/jamming layer from stage k along the path they induce
 * (`J[horizon] = 0`).  `tree` holds that single path in strategy-tree form:
 * one node per level with only the taken child links set.
 */
struct PolicyIterationResult {
  std::vector<int> Id;
  std::vector<int> Ia;
  std::vector<double> J;
  bool converged = false;
  int iterations = 0;
  StrategyTree tree;
};

/**
 * Iterates policy evaluation and greedy update until the sequences repeat or
 * `max_iters` passes are spent.  Evaluation follows the deterministic
 * covariance trajectory the fixed sequences induce; the update walks forward,
 * rescoring each stage with tail values of the previous sequences at both
 * candidate successors.  Throws InvalidInitialPolicy if the initial
 * sequences contain the dominated pair (0,1), and NoPureNashError (with node
 * id -1) if an update stage has no pure equilibrium under Simultaneous.
 * Non-convergence is not an error: the last sequences are returned with
 * `converged = false`.
 */
PolicyIterationResult policy_iteration(const GameSpec& spec,
                                       const RiccatiSolution& riccati,
                                       const std::vector<int>& init_Id,
                                       const std::vector<int>& init_Ia,
                                       const PolicyIterationOptions& options = {});

/** Same, starting from the all-(0,0) sequences. */
PolicyIterationResult policy_iteration(const GameSpec& spec,
                                       const RiccatiSolution& riccati,
                                       const PolicyIterationOptions& options = {});

}  // namespace lqgame
