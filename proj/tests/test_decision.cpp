#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "lqgame/tree_io.hpp"
#include "test_support.hpp"

using namespace lqgame;
using doctest::Approx;

namespace {

bool same_tree(const StrategyTree& a, const StrategyTree& b) {
  if (a.horizon != b.horizon || a.method != b.method ||
      a.converged != b.converged ||
      a.distinct_decision_covariances != b.distinct_decision_covariances)
    return false;
  if (a.stage0.decision != b.stage0.decision ||
      a.stage0.threshold != b.stage0.threshold || a.stage0.J != b.stage0.J ||
      a.stage0.root0 != b.stage0.root0 || a.stage0.root1 != b.stage0.root1)
    return false;
  if (a.nodes.size() != b.nodes.size() || a.on_path != b.on_path) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const CovarianceNode& x = a.nodes[i];
    const CovarianceNode& y = b.nodes[i];
    if (x.id != y.id || x.stage != y.stage || x.key != y.key ||
        x.child0 != y.child0 || x.child1 != y.child1 ||
        x.decision != y.decision || x.threshold != y.threshold || x.J != y.J)
      return false;
    if (covariance_key(x.P) != covariance_key(y.P)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("last-stage threshold is the information value of the update") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  RiccatiSolution sol = backward_riccati(spec, ConcavityPolicy::Permissive);
  PredictedPair pair = predicted_from(spec, MatrixXd::Constant(1, 1, 1.0));
  double T = threshold_T(sol.phi[29], pair, 0.0, 0.0);
  CHECK(T == Approx((23.1361 / 5.81) * (466.56 / 82.0)).epsilon(1e-12));
  CHECK(T > 22.65);
  CHECK(T < 22.66);
}

TEST_CASE("zero covariance reduction gives a zero threshold") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  RiccatiSolution sol = backward_riccati(spec, ConcavityPolicy::Permissive);
  PredictedPair pair;
  pair.Zp = MatrixXd::Constant(1, 1, 4.81);
  pair.Hp = MatrixXd::Zero(1, 1);
  CHECK(threshold_T(sol.phi[12], pair, 7.5, 7.5) == 0.0);
}

TEST_CASE("delivery follows i_d * (1 - i_a)") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0);
  CHECK(delivery(spec, {0, 0}) == 0);
  CHECK(delivery(spec, {0, 1}) == 0);
  CHECK(delivery(spec, {1, 0}) == 1);
  CHECK(delivery(spec, {1, 1}) == 0);
}

TEST_CASE("stage equilibrium cases under each move order") {
  const double T = 22.0;
  auto eq = [&](InfoStructure info, double od, double oa) {
    return stage_equilibrium(info, od, oa, T);
  };

  SUBCASE("defender announces first") {
    auto r = eq(InfoStructure::DefenderLeads, 0.0, 15.0);
    CHECK(r.exists);
    CHECK(r.decision == StageDecision{1, 1});
    CHECK(eq(InfoStructure::DefenderLeads, 0.0, 30.0).decision ==
          StageDecision{1, 0});
    CHECK(eq(InfoStructure::DefenderLeads, 25.0, 40.0).decision ==
          StageDecision{0, 0});
    // Ties resolve to inaction for whoever is indifferent.
    CHECK(eq(InfoStructure::DefenderLeads, 22.0, 30.0).decision ==
          StageDecision{0, 0});
    CHECK(eq(InfoStructure::DefenderLeads, 0.0, 22.0).decision ==
          StageDecision{1, 0});
  }

  SUBCASE("attacker announces first") {
    CHECK(eq(InfoStructure::AttackerLeads, 25.0, 1.0).decision ==
          StageDecision{0, 0});
    CHECK(eq(InfoStructure::AttackerLeads, 5.0, 10.0).decision ==
          StageDecision{0, 1});
    CHECK(eq(InfoStructure::AttackerLeads, 5.0, 20.0).decision ==
          StageDecision{1, 0});
    CHECK(eq(InfoStructure::AttackerLeads, 5.0, 17.0).decision ==
          StageDecision{1, 0});  // od + oa = T exactly
  }

  SUBCASE("simultaneous announcements") {
    auto quiet = eq(InfoStructure::Simultaneous, 25.0, 10.0);
    CHECK(quiet.exists);
    CHECK(quiet.decision == StageDecision{0, 0});
    auto watch = eq(InfoStructure::Simultaneous, 5.0, 40.0);
    CHECK(watch.exists);
    CHECK(watch.decision == StageDecision{1, 0});
    CHECK_FALSE(eq(InfoStructure::Simultaneous, 5.0, 10.0).exists);
  }
}

TEST_CASE("threshold rules agree with explicit best responses") {
  const double base = 100.0;
  for (double T : {2.0, 5.0, 22.0}) {
    for (int iod = 1; iod <= 12; ++iod) {
      for (int ioa = 1; ioa <= 12; ++ioa) {
        double od = 2.5 * iod;
        double oa = 2.5 * ioa;
        // Cell costs implied by the stage structure: observing pays od and,
        // if undisturbed, removes T; jamming pays the attacker oa.
        double c00 = base;
        double c01 = base - oa;
        double c10 = base - T + od;
        double c11 = base + od - oa;
        for (InfoStructure info :
             {InfoStructure::DefenderLeads, InfoStructure::AttackerLeads,
              InfoStructure::Simultaneous}) {
          EquilibriumResult r = stage_equilibrium(info, od, oa, T);
          CAPTURE(T);
          CAPTURE(od);
          CAPTURE(oa);
          CAPTURE(static_cast<int>(info));
          try {
            StageDecision d = test::oracle_select(info, c00, c01, c10, c11, 0);
            REQUIRE(r.exists);
            CHECK(r.decision == d);
          } catch (const test::OracleNoNash&) {
            CHECK_FALSE(r.exists);
          }
        }
      }
    }
  }
}

TEST_CASE("cell payoffs differ by exactly the threshold and action costs") {
  test::Engine eng(31);
  for (int trial = 0; trial < 20; ++trial) {
    GameSpec spec = test::random_spec(eng, 3, 4);
    RiccatiSolution sol = backward_riccati(spec);
    PredictedPair pair = initial_predicted(spec);
    double J_z = test::uniform(eng, -5.0, 5.0);
    double J_zh = test::uniform(eng, -5.0, 5.0);
    double T = threshold_T(sol.phi[0], pair, J_z, J_zh);
    double c00 = stage_payoff(spec, sol.phi[0], 0, pair, {0, 0}, J_z, J_zh);
    double c01 = stage_payoff(spec, sol.phi[0], 0, pair, {0, 1}, J_z, J_zh);
    double c10 = stage_payoff(spec, sol.phi[0], 0, pair, {1, 0}, J_z, J_zh);
    double c11 = stage_payoff(spec, sol.phi[0], 0, pair, {1, 1}, J_z, J_zh);
    double scale = 1.0 + std::abs(c00) + std::abs(T);
    CAPTURE(trial);
    CHECK(std::abs((c00 - c10) - (T - spec.Od[0])) <= 1e-9 * scale);
    CHECK(std::abs((c00 - c01) - spec.Oa[0]) <= 1e-12 * scale);
    CHECK(std::abs((c11 - c00) - (spec.Od[0] - spec.Oa[0])) <= 1e-12 * scale);
  }
}

TEST_CASE("noisy three-stage game expands the full binary tree") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0, 1.0, 3);
  RiccatiSolution sol = backward_riccati(spec, ConcavityPolicy::Permissive);
  StrategyTree tree = backward_enumerate(spec, sol);
  CHECK(tree.nodes.size() == 14);  // 2^(N+1) - 2 for N = 3
  CHECK(tree.level(1).size() == 2);
  CHECK(tree.level(2).size() == 4);
  CHECK(tree.level(3).size() == 8);
  CHECK(tree.distinct_decision_covariances == 7);
  CHECK(tree.on_path.size() == 3);
  CHECK(tree.method == "enumeration");
  CHECK(tree.converged);
}

TEST_CASE("perfect observation collapses levels to a covariance per age") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.0, 15.0, 1.0, 5);
  spec.E = MatrixXd::Zero(1, 1);
  REQUIRE(perfect_observation(spec));
  RiccatiSolution sol = backward_riccati(spec, ConcavityPolicy::Permissive);
  StrategyTree tree = backward_enumerate(spec, sol);
  // A covariance is determined by the time since the last delivered
  // observation, so level k holds k + 1 nodes instead of 2^k.
  for (int k = 1; k <= 4; ++k) {
    CAPTURE(k);
    CHECK(tree.level(k).size() == static_cast<std::size_t>(k) + 1);
  }
  CHECK(tree.distinct_decision_covariances == 15);
}

TEST_CASE("node count never exceeds the binary bound") {
  test::Engine eng(55);
  for (int trial = 0; trial < 20; ++trial) {
    GameSpec spec = test::random_spec(eng, 3, 5);
    RiccatiSolution sol = backward_riccati(spec);
    StrategyTree tree;
    try {
      tree = backward_enumerate(spec, sol);
    } catch (const NoPureNashError&) {
      continue;  // legitimate under simultaneous announcements
    }
    std::size_t bound = (std::size_t{2} << spec.horizon) - 2;
    CAPTURE(trial);
    CHECK(tree.nodes.size() <= bound);
    CHECK(tree.on_path.size() == static_cast<std::size_t>(spec.horizon));
  }
}

TEST_CASE("a delivered observation never enlarges the child covariance") {
  test::Engine eng(67);
  for (int trial = 0; trial < 30; ++trial) {
    GameSpec spec = test::random_spec(eng, 4, 4);
    PredictedPair pair = initial_predicted(spec);
    MatrixXd c0 = child_cov(pair, 0);
    MatrixXd c1 = child_cov(pair, 1);
    CAPTURE(trial);
    CHECK(min_eigenvalue(c0 - c1) >= -1e-9);
  }
}

TEST_CASE("a weak attacker never jams on the equilibrium path") {
  GameSpec spec = test::scalar_family_spec(0.5, 1.5, 0.0, 15.0, 1.0, 12);
  RiccatiSolution sol = backward_riccati(spec);
  StrategyTree tree = backward_enumerate(spec, sol);
  for (int n = 0; n < 12; ++n) {
    CAPTURE(n);
    CHECK(tree.decision_at(n).ia == 0);
  }
}

TEST_CASE("missing pure equilibrium reports its stage and node") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 1.0, 1.0, 1.0, 4,
                                           InfoStructure::Simultaneous);
  RiccatiSolution sol = backward_riccati(spec, ConcavityPolicy::Permissive);
  try {
    backward_enumerate(spec, sol);
    FAIL("expected NoPureNashError");
  } catch (const NoPureNashError& e) {
    CHECK(e.stage() == 3);
    CHECK(e.node_id() >= 0);
  }
}

TEST_CASE("missing pure equilibrium at the prior has no node id") {
  GameSpec spec = test::scalar_family_spec(0.9, 1.5, 0.1, 0.1, 1.0, 1,
                                           InfoStructure::Simultaneous);
  RiccatiSolution sol = backward_riccati(spec);
  try {
    backward_enumerate(spec, sol);
    FAIL("expected NoPureNashError");
  } catch (const NoPureNashError& e) {
    CHECK(e.stage() == 0);
    CHECK(e.node_id() == -1);
  }
}

TEST_CASE("enumeration matches the exhaustive oracle bit for bit") {
  test::Engine eng(20260823);
  int no_nash_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    GameSpec spec = test::random_scalar_spec(eng, 4);
    RiccatiSolution sol = backward_riccati(spec);
    CAPTURE(trial);

    StrategyTree tree;
    bool solver_threw = false;
    try {
      tree = backward_enumerate(spec, sol);
    } catch (const NoPureNashError&) {
      solver_threw = true;
    }
    bool oracle_threw = false;
    double value = 0.0;
    StageDecision chosen;
    try {
      value = test::oracle_value(spec, sol, 0, MatrixXd(), &chosen);
    } catch (const test::OracleNoNash&) {
      oracle_threw = true;
    }
    CHECK(solver_threw == oracle_threw);
    if (solver_threw) {
      ++no_nash_seen;
      continue;
    }

    CHECK(tree.stage0.J == value);
    CHECK(tree.stage0.decision == chosen);

    // Walk the equilibrium path, re-solving the remaining game at each stage.
    MatrixXd P = child_cov(initial_predicted(spec),
                           delivery(spec, tree.stage0.decision));
    for (int k = 1; k < spec.horizon; ++k) {
      StageDecision d;
      test::oracle_value(spec, sol, k, P, &d);
      CHECK(tree.decision_at(k) == d);
      P = child_cov(predicted_from(spec, P), delivery(spec, d));
    }
  }
  // The draw mixes info structures, so some simultaneous games without a
  // pure equilibrium should have shown up.
  CHECK(no_nash_seen > 0);
}

TEST_CASE("backward fill is a fixed point of its own recursion") {
  test::Engine eng(3);
  GameSpec spec = test::random_spec(eng, 3, 5, InfoStructure::DefenderLeads);
  RiccatiSolution sol = backward_riccati(spec);
  StrategyTree tree = backward_enumerate(spec, sol);

  PredictedPair prior = initial_predicted(spec);
  CHECK(covariance_key(child_cov(prior, 0)) ==
        covariance_key(tree.node(tree.stage0.root0).P));
  CHECK(covariance_key(child_cov(prior, 1)) ==
        covariance_key(tree.node(tree.stage0.root1).P));

  for (const CovarianceNode& node : tree.nodes) {
    if (node.stage >= spec.horizon) continue;  // leaves carry no decision
    PredictedPair pair = predicted_from(spec, node.P);
    CHECK(covariance_key(child_cov(pair, 0)) ==
          covariance_key(tree.node(node.child0).P));
    CHECK(covariance_key(child_cov(pair, 1)) ==
          covariance_key(tree.node(node.child1).P));
    double J_z = tree.node(node.child0).J;
    double J_zh = tree.node(node.child1).J;
    StageOutcome out = stage_outcome(spec, sol.phi[node.stage], node.stage,
                                     pair, J_z, J_zh, node.id);
    CHECK(out.decision == node.decision);
    CHECK(out.threshold == node.threshold);
    CHECK(out.J == node.J);
  }
}

TEST_CASE("tree serialization round-trips every field") {
  test::Engine eng(8);
  GameSpec spec = test::random_spec(eng, 3, 4, InfoStructure::DefenderLeads);
  RiccatiSolution sol = backward_riccati(spec);
  StrategyTree tree = backward_enumerate(spec, sol);

  std::string text = serialize_tree(tree);
  StrategyTree back = parse_tree(text);
  CHECK(same_tree(tree, back));
  CHECK(serialize_tree(back) == text);

  std::string path = "tree_roundtrip_tmp.json";
  save_tree(tree, path);
  StrategyTree loaded = load_tree(path);
  CHECK(same_tree(tree, loaded));
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_tree("not json at all"), SolverError);
}
