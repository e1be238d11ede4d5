#include "lqgame/value.hpp"

#include <cstddef>

#include "lqgame/errors.hpp"

namespace lqgame {

namespace {

ValueBreakdown base_terms(const GameSpec& spec,
                          const RiccatiSolution& riccati) {
  ValueBreakdown v;
  const MatrixXd& L0 = riccati.L[0];
  v.initial = spec.x0_mean.dot(L0 * spec.x0_mean) +
              trace_product(spec.x0_cov, L0);
  for (int n = 0; n < spec.horizon; ++n) {
    const MatrixXd& L1 = riccati.L[static_cast<std::size_t>(n) + 1];
    v.process_noise +=
        trace_product(spec.sigma_s, spec.C.transpose() * L1 * spec.C);
  }
  return v;
}

void add_stage(ValueBreakdown& v, const GameSpec& spec,
               const RiccatiSolution& riccati, int n, const MatrixXd& P_n,
               const StageDecision& d) {
  const std::size_t i = static_cast<std::size_t>(n);
  v.estimation += trace_product(P_n, riccati.phi[i]);
  v.observation += d.id * spec.Od[i];
  v.jamming -= d.ia * spec.Oa[i];
}

}  // namespace

ValueBreakdown evaluate_value(const GameSpec& spec,
                              const RiccatiSolution& riccati,
                              const StrategyTree& tree) {
  if (tree.horizon != spec.horizon)
    throw SolverError("strategy tree horizon does not match spec");
  ValueBreakdown v = base_terms(spec, riccati);
  for (int n = 0; n < spec.horizon; ++n) {
    const CovarianceNode& node =
        tree.node(tree.on_path[static_cast<std::size_t>(n)]);
    add_stage(v, spec, riccati, n, node.P, tree.decision_at(n));
  }
  return v;
}

ValueBreakdown evaluate_value(const GameSpec& spec,
                              const RiccatiSolution& riccati,
                              const std::vector<int>& Id,
                              const std::vector<int>& Ia) {
  const int N = spec.horizon;
  if (static_cast<int>(Id.size()) != N || static_cast<int>(Ia.size()) != N)
    throw SolverError("decision sequences must have length horizon");
  ValueBreakdown v = base_terms(spec, riccati);
  MatrixXd P;
  for (int n = 0; n < N; ++n) {
    PredictedPair pair =
        n == 0 ? initial_predicted(spec) : predicted_from(spec, P);
    StageDecision d{Id[static_cast<std::size_t>(n)],
                    Ia[static_cast<std::size_t>(n)]};
    P = child_cov(pair, delivery(spec, d));
    add_stage(v, spec, riccati, n, P, d);
  }
  return v;
}

}  // namespace lqgame
