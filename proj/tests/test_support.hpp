#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "lqgame/errors.hpp"
#include "lqgame/solve.hpp"

namespace lqgame::test {

using Engine = std::mt19937_64;

inline double uniform(Engine& eng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(eng);
}

inline int uniform_int(Engine& eng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(eng);
}

inline MatrixXd random_matrix(Engine& eng, int rows, int cols, double scale) {
  MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = uniform(eng, -scale, scale);
  return m;
}

inline MatrixXd random_psd(Engine& eng, int n, double scale) {
  MatrixXd x = random_matrix(eng, n, n, scale);
  return symmetrize(x * x.transpose());
}

inline MatrixXd random_pd(Engine& eng, int n, double scale) {
  return random_psd(eng, n, scale) +
         uniform(eng, 0.1, 1.0) * MatrixXd::Identity(n, n);
}

/**
 * The scalar experiment family: sigma_s = 4, Q = 1, Q_N = 8, Rd = 1,
 * Gaussian prior N(0, 1), horizon 30, and the final-stage attacker energy
 * price fixed at 10 regardless of the base ra.
 */
inline GameSpec scalar_family_spec(double a, double ra, double od, double oa,
                                   double sigma_o = 1.0, int horizon = 30,
                                   InfoStructure info =
                                       InfoStructure::DefenderLeads) {
  GameSpec spec = make_scalar_spec(horizon, a, 1.0, 1.0, 1.0, 1.0, 1.0, 4.0,
                                   sigma_o, 0.0, 1.0, 1.0, 8.0, 1.0, ra, od,
                                   oa, info);
  spec.Ra.back() = MatrixXd::Constant(1, 1, 10.0);
  return spec;
}

/**
 * Random fully populated spec with dimensions at most `max_dim`.  Redraws
 * until the strict concavity condition holds at every stage, so the result
 * always admits the linear equilibrium.
 */
inline GameSpec random_spec(Engine& eng, int max_dim = 4, int max_horizon = 6,
                            std::optional<InfoStructure> info = {}) {
  for (;;) {
    const int q = uniform_int(eng, 1, max_dim);
    const int md = uniform_int(eng, 1, max_dim);
    const int ma = uniform_int(eng, 1, max_dim);
    const int p = uniform_int(eng, 1, q);
    const int r = uniform_int(eng, 1, q);
    const int N = uniform_int(eng, 1, max_horizon);

    GameSpec spec;
    spec.horizon = N;
    spec.A = random_matrix(eng, q, q, 1.0);
    double radius = spec.A.eigenvalues().cwiseAbs().maxCoeff();
    if (radius > 1.05) spec.A *= 1.05 / radius;
    spec.Bd = random_matrix(eng, q, md, 1.0);
    spec.Ba = random_matrix(eng, q, ma, 1.0);
    spec.C = random_matrix(eng, q, p, 1.0);
    spec.D = random_matrix(eng, r, q, 1.0);
    spec.E = uniform(eng, 0.3, 1.5) * MatrixXd::Identity(r, r);
    spec.sigma_s = random_pd(eng, p, 1.0);
    spec.sigma_o = random_pd(eng, r, 0.5);
    spec.initial_kind = InitialStateKind::Gaussian;
    spec.x0_mean = random_matrix(eng, q, 1, 1.0);
    spec.x0_cov = random_pd(eng, q, 1.0);
    for (int n = 0; n <= N; ++n) spec.Q.push_back(random_psd(eng, q, 0.7));
    for (int n = 0; n < N; ++n) {
      spec.Rd.push_back(random_pd(eng, md, 0.7));
      // Generous energy price so the attacker's problem stays concave.
      spec.Ra.push_back(random_pd(eng, ma, 0.5) +
                        uniform(eng, 30.0, 120.0) *
                            MatrixXd::Identity(ma, ma));
      spec.Od.push_back(uniform(eng, 0.05, 3.0));
      spec.Oa.push_back(uniform(eng, 0.05, 3.0));
    }
    spec.info_structure =
        info ? *info
             : static_cast<InfoStructure>(uniform_int(eng, 0, 2));
    if (!validate(spec).empty()) continue;
    try {
      backward_riccati(spec, ConcavityPolicy::Strict);
    } catch (const ConcavityViolation&) {
      continue;
    }
    return spec;
  }
}

/** Random scalar spec, same redraw rule. */
inline GameSpec random_scalar_spec(Engine& eng, int horizon,
                                   std::optional<InfoStructure> info = {}) {
  for (;;) {
    double a = uniform(eng, -1.2, 1.2);
    double bd = uniform(eng, 0.3, 1.5);
    double ba = uniform(eng, 0.3, 1.5);
    double c = uniform(eng, 0.3, 1.5);
    double d = uniform(eng, 0.5, 1.5);
    double e = uniform(eng, 0.3, 1.5);
    GameSpec spec = make_scalar_spec(
        horizon, a, bd, ba, c, d, e, uniform(eng, 0.5, 5.0),
        uniform(eng, 0.2, 2.0), uniform(eng, -1.0, 1.0),
        uniform(eng, 0.2, 2.0), uniform(eng, 0.0, 2.0), uniform(eng, 0.0, 8.0),
        uniform(eng, 0.3, 2.0), uniform(eng, 10.0, 80.0),
        uniform(eng, 0.05, 2.0), uniform(eng, 0.05, 4.0),
        info ? *info : static_cast<InfoStructure>(uniform_int(eng, 0, 2)));
    try {
      backward_riccati(spec, ConcavityPolicy::Strict);
    } catch (const ConcavityViolation&) {
      continue;
    }
    return spec;
  }
}

/** Raised by the oracle where the solver would raise NoPureNashError. */
struct OracleNoNash : std::runtime_error {
  explicit OracleNoNash(int stage)
      : std::runtime_error("oracle: no pure equilibrium"), stage(stage) {}
  int stage;
};

/**
 * Leader-follower selection over the four explicit cells of one stage game,
 * written from the move orders directly (follower best responses, leader
 * optimization, every tie resolved toward inaction) rather than from the
 * threshold rules the solver uses.
 */
inline StageDecision oracle_select(InfoStructure info, double c00, double c01,
                                   double c10, double c11, int stage) {
  switch (info) {
    case InfoStructure::DefenderLeads: {
      // Attacker best response per defender choice; jam only if strictly
      // better for the attacker (larger defender cost).
      double v0 = c01 > c00 ? c01 : c00;
      int a0 = c01 > c00 ? 1 : 0;
      double v1 = c11 > c10 ? c11 : c10;
      int a1 = c11 > c10 ? 1 : 0;
      if (v1 < v0) return {1, a1};
      return {0, a0};
    }
    case InfoStructure::AttackerLeads: {
      // Defender best response per attacker choice; observe only if strictly
      // cheaper.
      double v0 = c10 < c00 ? c10 : c00;
      int d0 = c10 < c00 ? 1 : 0;
      double v1 = c11 < c01 ? c11 : c01;
      int d1 = c11 < c01 ? 1 : 0;
      if (v1 > v0) return {d1, 1};
      return {d0, 0};
    }
    case InfoStructure::Simultaneous: {
      // A cell is stable when neither player strictly gains by flipping
      // their own bit; scan with inaction first.
      const StageDecision cells[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
      auto at = [&](int id, int ia) {
        return id == 0 ? (ia == 0 ? c00 : c01) : (ia == 0 ? c10 : c11);
      };
      for (const StageDecision& d : cells) {
        bool defender_moves = at(1 - d.id, d.ia) < at(d.id, d.ia);
        bool attacker_moves = at(d.id, 1 - d.ia) > at(d.id, d.ia);
        if (!defender_moves && !attacker_moves) return d;
      }
      throw OracleNoNash(stage);
    }
  }
  throw std::logic_error("unreachable");
}

/**
 * Exhaustive backward induction over the full outcome tree: no thresholds,
 * no deduplication, four explicit cells per node.  Payoff entries reuse the
 * library's stage arithmetic so agreement with the solver is exact, while
 * the equilibrium selection above is independent.
 */
inline double oracle_value(const GameSpec& spec,
                           const RiccatiSolution& riccati, int k,
                           const MatrixXd& P_prev,
                           StageDecision* chosen = nullptr) {
  if (k == spec.horizon) return 0.0;
  PredictedPair pair =
      k == 0 ? initial_predicted(spec) : predicted_from(spec, P_prev);
  double J_z = oracle_value(spec, riccati, k + 1, child_cov(pair, 0));
  double J_zh = oracle_value(spec, riccati, k + 1, child_cov(pair, 1));
  const MatrixXd& phi = riccati.phi[static_cast<std::size_t>(k)];
  double c00 = stage_payoff(spec, phi, k, pair, {0, 0}, J_z, J_zh);
  double c01 = stage_payoff(spec, phi, k, pair, {0, 1}, J_z, J_zh);
  double c10 = stage_payoff(spec, phi, k, pair, {1, 0}, J_z, J_zh);
  double c11 = stage_payoff(spec, phi, k, pair, {1, 1}, J_z, J_zh);
  StageDecision d =
      oracle_select(spec.info_structure, c00, c01, c10, c11, k);
  if (chosen) *chosen = d;
  return stage_payoff(spec, phi, k, pair, d, J_z, J_zh);
}

}  // namespace lqgame::test
