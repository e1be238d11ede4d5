#include <benchmark/benchmark.h>

#include "lqgame/simulation.hpp"
#include "lqgame/solve.hpp"

using namespace lqgame;

namespace {

GameSpec scalar_spec(int horizon) {
  GameSpec spec = make_scalar_spec(horizon, 0.9, 1.0, 1.0, 1.0, 1.0, 1.0, 4.0,
                                   1.0, 0.0, 1.0, 1.0, 8.0, 1.0, 1.5, 0.0,
                                   15.0, InfoStructure::DefenderLeads);
  spec.Ra.back() = MatrixXd::Constant(1, 1, 10.0);
  return spec;
}

GameSpec planar_spec(int horizon) {
  GameSpec spec;
  spec.horizon = horizon;
  spec.A = (MatrixXd(2, 2) << 1.05, 0.1, 0.0, 0.9).finished();
  spec.Bd = (MatrixXd(2, 1) << 1.0, 0.0).finished();
  spec.Ba = (MatrixXd(2, 1) << 0.0, 1.0).finished();
  spec.C = MatrixXd::Identity(2, 2);
  spec.D = (MatrixXd(1, 2) << 1.0, 0.0).finished();
  spec.E = MatrixXd::Identity(1, 1);
  spec.sigma_s = 0.5 * MatrixXd::Identity(2, 2);
  spec.sigma_o = MatrixXd::Identity(1, 1);
  spec.x0_mean = VectorXd::Zero(2);
  spec.x0_cov = MatrixXd::Identity(2, 2);
  for (int n = 0; n <= horizon; ++n) spec.Q.push_back(MatrixXd::Identity(2, 2));
  for (int n = 0; n < horizon; ++n) {
    spec.Rd.push_back(MatrixXd::Identity(1, 1));
    spec.Ra.push_back(MatrixXd::Constant(1, 1, 60.0));
    spec.Od.push_back(0.5);
    spec.Oa.push_back(8.0);
  }
  return spec;
}

void bm_riccati_scalar(benchmark::State& state) {
  GameSpec spec = scalar_spec(30);
  for (auto _ : state)
    benchmark::DoNotOptimize(backward_riccati(spec, ConcavityPolicy::Permissive));
}
BENCHMARK(bm_riccati_scalar);

void bm_riccati_planar(benchmark::State& state) {
  GameSpec spec = planar_spec(30);
  for (auto _ : state)
    benchmark::DoNotOptimize(backward_riccati(spec, ConcavityPolicy::Permissive));
}
BENCHMARK(bm_riccati_planar);

void bm_enumerate(benchmark::State& state) {
  GameSpec spec = scalar_spec(static_cast<int>(state.range(0)));
  RiccatiSolution sol = backward_riccati(spec, ConcavityPolicy::Permissive);
  for (auto _ : state)
    benchmark::DoNotOptimize(backward_enumerate(spec, sol));
}
BENCHMARK(bm_enumerate)->Arg(8)->Arg(12);

void bm_policy_iteration(benchmark::State& state) {
  GameSpec spec = scalar_spec(30);
  RiccatiSolution sol = backward_riccati(spec, ConcavityPolicy::Permissive);
  for (auto _ : state)
    benchmark::DoNotOptimize(policy_iteration(spec, sol));
}
BENCHMARK(bm_policy_iteration);

void bm_rollout(benchmark::State& state) {
  GameSpec spec = scalar_spec(30);
  SolveResult r = solve(spec);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(rollout(spec, r.riccati, r.tree, ++seed));
}
BENCHMARK(bm_rollout);

void bm_monte_carlo_1000(benchmark::State& state) {
  GameSpec spec = scalar_spec(30);
  SolveResult r = solve(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(monte_carlo(spec, r.riccati, r.tree, 1000, 7));
}
BENCHMARK(bm_monte_carlo_1000);

}  // namespace

BENCHMARK_MAIN();
