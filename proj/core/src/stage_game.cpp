#include "lqgame/stage_game.hpp"

#include "lqgame/errors.hpp"

namespace lqgame {

PredictedPair predicted_from(const GameSpec& spec, const MatrixXd& P_prev) {
  PredictedPair pair;
  pair.Zp = predict_covariance(spec, P_prev);
  pair.Hp = observation_update(spec, pair.Zp).H;
  return pair;
}

PredictedPair initial_predicted(const GameSpec& spec) {
  PredictedPair pair;
  if (spec.initial_kind == InitialStateKind::KnownExactly) {
    pair.Zp = MatrixXd::Zero(spec.state_dim(), spec.state_dim());
    pair.Hp = pair.Zp;
    return pair;
  }
  pair.Zp = sanitize_covariance(spec.x0_cov);
  pair.Hp = observation_update(spec, pair.Zp).H;
  return pair;
}

MatrixXd child_cov(const PredictedPair& pair, int h) {
  if (h == 0) return sanitize_covariance(pair.Zp);
  return sanitize_covariance(pair.Zp - pair.Hp);
}

int delivery(const GameSpec& spec, const StageDecision& d) {
  return spec.rule.h(d.id, d.ia);
}

double stage_payoff(const GameSpec& spec, const MatrixXd& phi_k, int k,
                    const PredictedPair& pair, const StageDecision& d,
                    double J_z, double J_zh) {
  const std::size_t i = static_cast<std::size_t>(k);
  int h = delivery(spec, d);
  MatrixXd after = child_cov(pair, h);
  double J_next = h == 0 ? J_z : J_zh;
  return trace_product(after, phi_k) + d.id * spec.Od[i] - d.ia * spec.Oa[i] +
         J_next;
}

double threshold_T(const MatrixXd& phi_k, const PredictedPair& pair,
                   double J_z, double J_zh) {
  return trace_product(pair.Hp, phi_k) + J_z - J_zh;
}

EquilibriumResult stage_equilibrium(InfoStructure info, double Od, double Oa,
                                    double T) {
  EquilibriumResult r;
  switch (info) {
    case InfoStructure::DefenderLeads:
      // If the defender observes, the attacker jams exactly when the jamming
      // cost is below the observation's value; the defender anticipates this.
      if (Oa < T) {
        if (Od < Oa) r.decision = {1, 1};
      } else if (Od < T) {
        r.decision = {1, 0};
      }
      return r;
    case InfoStructure::AttackerLeads:
      if (Od >= T) return r;  // defender would not observe anyway
      if (Od + Oa < T) {
        r.decision = {0, 1};
      } else {
        r.decision = {1, 0};
      }
      return r;
    case InfoStructure::Simultaneous:
      if (Od >= T) return r;
      if (Oa >= T) {
        r.decision = {1, 0};
        return r;
      }
      // Observing invites jamming and jamming deters observing: no cell is
      // stable in pure strategies.
      r.exists = false;
      return r;
  }
  return r;
}

StageOutcome stage_outcome(const GameSpec& spec, const MatrixXd& phi_k, int k,
                           const PredictedPair& pair, double J_z, double J_zh,
                           int node_id) {
  StageOutcome out;
  out.threshold = threshold_T(phi_k, pair, J_z, J_zh);
  const std::size_t i = static_cast<std::size_t>(k);
  EquilibriumResult eq =
      stage_equilibrium(spec.info_structure, spec.Od[i], spec.Oa[i], out.threshold);
  if (!eq.exists) throw NoPureNashError(k, node_id);
  out.decision = eq.decision;
  out.J = stage_payoff(spec, phi_k, k, pair, out.decision, J_z, J_zh);
  return out;
}

}  // namespace lqgame
