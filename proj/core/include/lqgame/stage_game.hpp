#pragma once

#include "lqgame/estimation.hpp"
#include "lqgame/linalg.hpp"
#include "lqgame/model.hpp"

namespace lqgame {

/**
 * Covariance data the stage-k observation/jamming game is played on: the
 * predicted covariance Zp and the reduction Hp an unjammed observation would
 * deliver.  The candidate post-decision covariances are Zp and Zp - Hp.
 */
struct PredictedPair {
  MatrixXd Zp;
  MatrixXd Hp;
};

/** Pair for a stage k >= 1 given the previous post-decision covariance. */
PredictedPair predicted_from(const GameSpec& spec, const MatrixXd& P_prev);

/**
 * Pair for stage 0.  The first decision acts on the prior directly; there is
 * no prediction step in front of the initial observation.
 */
PredictedPair initial_predicted(const GameSpec& spec);

/**
 * Post-decision covariance for a delivery outcome, sanitized so equal
 * covariances reached along different histories compare byte-identical.
 */
MatrixXd child_cov(const PredictedPair& pair, int h);

struct StageDecision {
  int id = 0;  // defender observes
  int ia = 0;  // attacker jams

  bool operator==(const StageDecision& o) const {
    return id == o.id && ia == o.ia;
  }
  bool operator!=(const StageDecision& o) const { return !(*this == o); }
};

/** Delivery indicator h for a decision pair under the game's observation rule. */
int delivery(const GameSpec& spec, const StageDecision& d);

/**
 * Cost-to-go of one cell of the stage game:
 *   Tr[(Zp - h Hp) phi_k] + i^d Od_k - i^a Oa_k + J_next(Zp - h Hp),
 * where J_z and J_zh are the continuation values at Zp and Zp - Hp.
 */
double stage_payoff(const GameSpec& spec, const MatrixXd& phi_k, int k,
                    const PredictedPair& pair, const StageDecision& d,
                    double J_z, double J_zh);

/**
 * Observation-value threshold
 *   T = Tr(Hp phi_k) + J_next(Zp) - J_next(Zp - Hp).
 * The last decision stage has zero continuation, so there T = Tr(Hp phi).
 */
double threshold_T(const MatrixXd& phi_k, const PredictedPair& pair,
                   double J_z, double J_zh);

/**
 * Stage equilibrium under the given move order.  Ties always resolve to
 * inaction.  Under Simultaneous a pure equilibrium need not exist
 * (exists = false when Od < T and Oa < T); the sequential structures always
 * produce one.
 */
struct EquilibriumResult {
  bool exists = true;
  StageDecision decision;
};
EquilibriumResult stage_equilibrium(InfoStructure info, double Od, double Oa,
                                    double T);

/**
 * Threshold, equilibrium decision, and the chosen cell's cost-to-go in one
 * call; throws NoPureNashError when no pure equilibrium exists.  node_id is
 * only used to tag the error (-1 when not solving inside a tree).
 */
struct StageOutcome {
  StageDecision decision;
  double threshold = 0.0;
  double J = 0.0;
};
StageOutcome stage_outcome(const GameSpec& spec, const MatrixXd& phi_k, int k,
                           const PredictedPair& pair, double J_z, double J_zh,
                           int node_id);

}  // namespace lqgame
