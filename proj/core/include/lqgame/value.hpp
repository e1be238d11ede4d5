#pragma once

#include <vector>

#include "lqgame/strategy_tree.hpp"

namespace lqgame {

/**
 * Additive split of the game value V_0*.  `initial` is E[x_0' L_0 x_0] for
 * the prior, `process_noise` the accumulated Tr(sigma_s C' L_{n+1} C),
 * `estimation` the accumulated Tr(P_n phi_n) along the equilibrium path,
 * `observation` the defender's observation spending, and `jamming` the
 * attacker's spending with its game-cost sign (never positive).
 */
struct ValueBreakdown {
  double initial = 0.0;
  double process_noise = 0.0;
  double estimation = 0.0;
  double observation = 0.0;
  double jamming = 0.0;

  double total() const {
    return initial + process_noise + estimation + observation + jamming;
  }
};

/** Breakdown along the tree's equilibrium path. */
ValueBreakdown evaluate_value(const GameSpec& spec,
                              const RiccatiSolution& riccati,
                              const StrategyTree& tree);

/** Breakdown along the trajectory fixed 0/1 sequences induce. */
ValueBreakdown evaluate_value(const GameSpec& spec,
                              const RiccatiSolution& riccati,
                              const std::vector<int>& Id,
                              const std::vector<int>& Ia);

}  // namespace lqgame
