#include "lqgame/strategy_tree.hpp"

#include <map>
#include <utility>

#include "lqgame/errors.hpp"

namespace lqgame {

std::vector<int> StrategyTree::level(int stage) const {
  std::vector<int> ids;
  for (const auto& n : nodes)
    if (n.stage == stage) ids.push_back(n.id);
  return ids;
}

StrategyTree backward_enumerate(const GameSpec& spec,
                                const RiccatiSolution& riccati) {
  const int N = spec.horizon;
  StrategyTree tree;
  tree.horizon = N;
  tree.method = "enumeration";

  PredictedPair pair0 = initial_predicted(spec);

  // Forward expansion.  Within each level byte-identical covariances merge,
  // so the perfect-observation tree collapses instead of doubling.
  std::vector<int> prev_level;
  {
    std::map<std::string, int> seen;
    for (int h = 0; h <= 1; ++h) {
      MatrixXd P = child_cov(pair0, h);
      auto [it, inserted] = seen.try_emplace(covariance_key(P), -1);
      if (inserted) {
        CovarianceNode node;
        node.id = static_cast<int>(tree.nodes.size());
        node.stage = 1;
        node.key = std::string(1, static_cast<char>('0' + h));
        node.P = std::move(P);
        it->second = node.id;
        prev_level.push_back(node.id);
        tree.nodes.push_back(std::move(node));
      }
      (h == 0 ? tree.stage0.root0 : tree.stage0.root1) = it->second;
    }
  }
  for (int stage = 1; stage < N; ++stage) {
    std::map<std::string, int> seen;
    std::vector<int> this_level;
    for (int nid : prev_level) {
      const MatrixXd parent_P = tree.nodes[static_cast<std::size_t>(nid)].P;
      const std::string parent_key = tree.nodes[static_cast<std::size_t>(nid)].key;
      PredictedPair pair = predicted_from(spec, parent_P);
      for (int h = 0; h <= 1; ++h) {
        MatrixXd P = child_cov(pair, h);
        auto [it, inserted] = seen.try_emplace(covariance_key(P), -1);
        if (inserted) {
          CovarianceNode child;
          child.id = static_cast<int>(tree.nodes.size());
          child.stage = stage + 1;
          child.key = parent_key + static_cast<char>('0' + h);
          child.P = std::move(P);
          it->second = child.id;
          this_level.push_back(child.id);
          tree.nodes.push_back(std::move(child));
        }
        auto& parent = tree.nodes[static_cast<std::size_t>(nid)];
        (h == 0 ? parent.child0 : parent.child1) = it->second;
      }
    }
    prev_level = std::move(this_level);
  }

  // Backward fill.  Children always have larger ids than their parents, so a
  // reverse scan visits them first; leaves keep J = 0.
  for (int id = static_cast<int>(tree.nodes.size()) - 1; id >= 0; --id) {
    CovarianceNode& node = tree.nodes[static_cast<std::size_t>(id)];
    if (node.stage == N) continue;
    PredictedPair pair = predicted_from(spec, node.P);
    double J_z = tree.node(node.child0).J;
    double J_zh = tree.node(node.child1).J;
    StageOutcome out = stage_outcome(
        spec, riccati.phi[static_cast<std::size_t>(node.stage)], node.stage,
        pair, J_z, J_zh, node.id);
    node.decision = out.decision;
    node.threshold = out.threshold;
    node.J = out.J;
  }
  {
    double J_z = tree.node(tree.stage0.root0).J;
    double J_zh = tree.node(tree.stage0.root1).J;
    StageOutcome out = stage_outcome(spec, riccati.phi[0], 0, pair0, J_z, J_zh, -1);
    tree.stage0.decision = out.decision;
    tree.stage0.threshold = out.threshold;
    tree.stage0.J = out.J;
  }

  int h0 = delivery(spec, tree.stage0.decision);
  int cur = h0 == 0 ? tree.stage0.root0 : tree.stage0.root1;
  for (;;) {
    tree.on_path.push_back(cur);
    const CovarianceNode& node = tree.node(cur);
    if (node.stage == N) break;
    int h = delivery(spec, node.decision);
    cur = h == 0 ? node.child0 : node.child1;
  }

  int distinct = 1;
  for (const auto& node : tree.nodes)
    if (node.stage < N) ++distinct;
  tree.distinct_decision_covariances = distinct;
  return tree;
}

}  // namespace lqgame
