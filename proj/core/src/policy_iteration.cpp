#include "lqgame/policy_iteration.hpp"

#include <cstddef>
#include <utility>

#include "lqgame/errors.hpp"

namespace lqgame {

namespace {

/**
 * Cost of following the tail Id[k..], Ia[k..] of fixed sequences.  For k >= 1
 * `P` is the post-decision covariance of stage k-1; stage 0 starts from the
 * prior pair instead.  Uses the same stage arithmetic as the tree so a policy
 * matching the tree's decisions reproduces its values bit for bit.
 */
double eval_tail(const GameSpec& spec, const RiccatiSolution& riccati,
                 const std::vector<int>& Id, const std::vector<int>& Ia,
                 int k, MatrixXd P) {
  const int N = spec.horizon;
  double total = 0.0;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(N - k));
  for (int j = k; j < N; ++j) {
    PredictedPair pair =
        j == 0 ? initial_predicted(spec) : predicted_from(spec, P);
    StageDecision d{Id[static_cast<std::size_t>(j)],
                    Ia[static_cast<std::size_t>(j)]};
    int h = delivery(spec, d);
    MatrixXd after = child_cov(pair, h);
    terms.push_back(trace_product(after, riccati.phi[static_cast<std::size_t>(j)]) +
                    d.id * spec.Od[static_cast<std::size_t>(j)] -
                    d.ia * spec.Oa[static_cast<std::size_t>(j)]);
    P = std::move(after);
  }
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) total += *it;
  return total;
}

struct UpdatePass {
  std::vector<int> Id, Ia;
  std::vector<double> thresholds;
  std::vector<PredictedPair> pairs;  // on the new path, one per stage
  std::vector<MatrixXd> post;        // post-decision covariances P_0..P_{N-1}
};

UpdatePass greedy_update(const GameSpec& spec, const RiccatiSolution& riccati,
                         const std::vector<int>& old_Id,
                         const std::vector<int>& old_Ia) {
  const int N = spec.horizon;
  UpdatePass pass;
  MatrixXd P;
  for (int k = 0; k < N; ++k) {
    PredictedPair pair =
        k == 0 ? initial_predicted(spec) : predicted_from(spec, P);
    double J_z = eval_tail(spec, riccati, old_Id, old_Ia, k + 1,
                           child_cov(pair, 0));
    double J_zh = eval_tail(spec, riccati, old_Id, old_Ia, k + 1,
                            child_cov(pair, 1));
    double T = threshold_T(riccati.phi[static_cast<std::size_t>(k)], pair,
                           J_z, J_zh);
    EquilibriumResult eq = stage_equilibrium(
        spec.info_structure, spec.Od[static_cast<std::size_t>(k)],
        spec.Oa[static_cast<std::size_t>(k)], T);
    if (!eq.exists) throw NoPureNashError(k, -1);
    pass.Id.push_back(eq.decision.id);
    pass.Ia.push_back(eq.decision.ia);
    pass.thresholds.push_back(T);
    P = child_cov(pair, delivery(spec, eq.decision));
    pass.pairs.push_back(std::move(pair));
    pass.post.push_back(P);
  }
  return pass;
}

}  // namespace

PolicyIterationResult policy_iteration(const GameSpec& spec,
                                       const RiccatiSolution& riccati,
                                       const std::vector<int>& init_Id,
                                       const std::vector<int>& init_Ia,
                                       const PolicyIterationOptions& options) {
  const int N = spec.horizon;
  if (options.max_iters < 1)
    throw SolverError("policy iteration needs max_iters >= 1");
  if (static_cast<int>(init_Id.size()) != N ||
      static_cast<int>(init_Ia.size()) != N)
    throw SolverError("initial decision sequences must have length horizon");
  for (int k = 0; k < N; ++k) {
    int id = init_Id[static_cast<std::size_t>(k)];
    int ia = init_Ia[static_cast<std::size_t>(k)];
    if ((id != 0 && id != 1) || (ia != 0 && ia != 1))
      throw SolverError("initial decision sequences must be 0/1 valued");
    if (id == 0 && ia == 1) throw InvalidInitialPolicy(k);
  }

  std::vector<int> cur_Id = init_Id;
  std::vector<int> cur_Ia = init_Ia;
  UpdatePass pass;
  PolicyIterationResult result;
  for (int it = 1; it <= options.max_iters; ++it) {
    pass = greedy_update(spec, riccati, cur_Id, cur_Ia);
    result.iterations = it;
    if (pass.Id == cur_Id && pass.Ia == cur_Ia) {
      result.converged = true;
      break;
    }
    cur_Id = pass.Id;
    cur_Ia = pass.Ia;
  }

  result.Id = pass.Id;
  result.Ia = pass.Ia;
  result.J.assign(static_cast<std::size_t>(N) + 1, 0.0);
  for (int k = N - 1; k >= 0; --k) {
    StageDecision d{result.Id[static_cast<std::size_t>(k)],
                    result.Ia[static_cast<std::size_t>(k)]};
    double J_next = result.J[static_cast<std::size_t>(k) + 1];
    result.J[static_cast<std::size_t>(k)] =
        stage_payoff(spec, riccati.phi[static_cast<std::size_t>(k)], k,
                     pass.pairs[static_cast<std::size_t>(k)], d, J_next,
                     J_next);
  }

  StrategyTree& tree = result.tree;
  tree.horizon = N;
  tree.method = "policy_iteration";
  tree.converged = result.converged;
  std::string key;
  for (int k = 0; k < N; ++k) {
    StageDecision d{result.Id[static_cast<std::size_t>(k)],
                    result.Ia[static_cast<std::size_t>(k)]};
    int h = delivery(spec, d);
    key += static_cast<char>('0' + h);
    CovarianceNode node;
    node.id = k;
    node.stage = k + 1;
    node.key = key;
    node.P = pass.post[static_cast<std::size_t>(k)];
    if (k + 1 < N) {
      StageDecision next{result.Id[static_cast<std::size_t>(k) + 1],
                         result.Ia[static_cast<std::size_t>(k) + 1]};
      node.decision = next;
      node.threshold = pass.thresholds[static_cast<std::size_t>(k) + 1];
      node.J = result.J[static_cast<std::size_t>(k) + 1];
      (delivery(spec, next) == 0 ? node.child0 : node.child1) = k + 1;
    }
    tree.nodes.push_back(std::move(node));
    tree.on_path.push_back(k);
  }
  tree.stage0.decision = {result.Id[0], result.Ia[0]};
  tree.stage0.threshold = pass.thresholds[0];
  tree.stage0.J = result.J[0];
  int h0 = delivery(spec, tree.stage0.decision);
  (h0 == 0 ? tree.stage0.root0 : tree.stage0.root1) = 0;
  tree.distinct_decision_covariances = N;
  return result;
}

PolicyIterationResult policy_iteration(const GameSpec& spec,
                                       const RiccatiSolution& riccati,
                                       const PolicyIterationOptions& options) {
  std::vector<int> zeros(static_cast<std::size_t>(spec.horizon), 0);
  return policy_iteration(spec, riccati, zeros, zeros, options);
}

}  // namespace lqgame
