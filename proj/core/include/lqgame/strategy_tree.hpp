#pragma once

#include <string>
#include <vector>

#include "lqgame/riccati.hpp"
#include "lqgame/stage_game.hpp"

namespace lqgame {

/**
 * One reachable covariance state.  A node at level `stage` holds the
 * post-decision covariance produced by stages 0..stage-1 (its key lists the
 * delivery bits h_0..h_{stage-1} of the first history that reached it) and
 * carries the equilibrium decision taken at `stage` on that covariance.
 * Nodes at level horizon are leaves: value zero, no decision, no children.
 */
struct CovarianceNode {
  int id = -1;
  int stage = 0;
  std::string key;
  MatrixXd P;
  int child0 = -1;         // next level's node when h_stage = 0
  int child1 = -1;         // next level's node when h_stage = 1
  StageDecision decision;  // meaningful only below the leaf level
  double threshold = 0.0;
  double J = 0.0;          // value-to-go of the observation/jamming layer
};

/**
 * The stage-0 decision precedes every node: it is taken on the prior
 * covariance and selects between the level-1 roots.  With an exactly known
 * initial state both delivery outcomes coincide and the roots merge.
 */
struct Stage0Record {
  StageDecision decision;
  double threshold = 0.0;
  double J = 0.0;  // total observation/jamming layer value of the game
  int root0 = -1;
  int root1 = -1;
};

struct StrategyTree {
  int horizon = 0;
  std::string method;     // "enumeration" or "policy_iteration"
  bool converged = true;  // always true for enumeration
  Stage0Record stage0;
  std::vector<CovarianceNode> nodes;

  /** Nodes visited by the equilibrium path, one per level 1..horizon. */
  std::vector<int> on_path;

  /** Number of distinct covariances a decision was computed on (the prior
   * plus the deduplicated levels 1..horizon-1; leaves carry no decision). */
  int distinct_decision_covariances = 0;

  const CovarianceNode& node(int id) const {
    return nodes[static_cast<std::size_t>(id)];
  }

  /** Equilibrium decision at a stage along the on-path trajectory. */
  StageDecision decision_at(int stage) const {
    if (stage == 0) return stage0.decision;
    return node(on_path[static_cast<std::size_t>(stage) - 1]).decision;
  }

  /** Ids of the nodes at one level, in creation order. */
  std::vector<int> level(int stage) const;
};

/**
 * Full dynamic-programming solve: expands every reachable covariance level
 * by level (merging byte-identical covariances), then fills decisions,
 * thresholds and values backward.  Throws NoPureNashError under the
 * simultaneous information structure when some stage game has no pure
 * equilibrium.
 */
StrategyTree backward_enumerate(const GameSpec& spec,
                                const RiccatiSolution& riccati);

}  // namespace lqgame
