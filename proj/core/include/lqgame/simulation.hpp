#pragma once

#include <cstdint>
#include <vector>

#include "lqgame/solve.hpp"

namespace lqgame {

/** Everything observable about one stage of a rollout. */
struct StageRecord {
  int stage = 0;
  VectorXd x;
  VectorXd xhat;  // posterior estimate the stage's controls were based on
  MatrixXd P;
  int i_d = 0, i_a = 0, h = 0;
  VectorXd ud, ua;
  bool has_y = false;
  VectorXd y;
  double stage_cost = 0.0;
};

struct RolloutResult {
  std::vector<StageRecord> trace;  // filled only when requested
  std::vector<VectorXd> errors;    // x_n - xhat_n for n = 0..N-1, always
  double terminal_cost = 0.0;
  double total_cost = 0.0;  // stage costs summed in order, then terminal
};

/**
 * Simulates one play of the solved game.  Noise comes from a CounterRng
 * keyed by `seed`; the draw order is fixed: state_dim normals for x_0 first
 * (consumed even when the initial state is exact), then per stage the
 * observation noise (only when h_n = 1) followed by the process noise.
 * Decisions are read off the tree by following realized delivery outcomes;
 * a missing child for a realized history is a fatal SolverError.
 */
RolloutResult rollout(const GameSpec& spec, const RiccatiSolution& riccati,
                      const StrategyTree& tree, std::uint64_t seed,
                      bool want_trace = false);

struct MonteCarloStats {
  std::int64_t replicates = 0;
  double mean = 0.0;
  double variance = 0.0;   // sample variance of total cost
  double std_error = 0.0;  // sqrt(variance / replicates)
  /** Empirical E[(x_n - xhat_n)(x_n - xhat_n)'] for n = 0..N-1. */
  std::vector<MatrixXd> error_covariance;
};

/**
 * Runs `replicates` independent rollouts with per-replicate streams
 * derive_stream(base_seed, r).  Work is split into fixed chunks merged in
 * chunk order, so the statistics are identical for any thread count
 * (threads = 0 picks the hardware default).  Requires replicates >= 2.
 */
MonteCarloStats monte_carlo(const GameSpec& spec,
                            const RiccatiSolution& riccati,
                            const StrategyTree& tree, std::int64_t replicates,
                            std::uint64_t base_seed, int threads = 0);

}  // namespace lqgame
