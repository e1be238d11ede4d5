#include "lqgame/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <thread>
#include <utility>

#include "lqgame/errors.hpp"
#include "lqgame/rng.hpp"

namespace lqgame {

namespace {

/** Symmetric square root used to color standard normal draws. */
MatrixXd covariance_sqrt(const MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(symmetrize(cov));
  VectorXd vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * vals.asDiagonal() *
         eig.eigenvectors().transpose();
}

VectorXd draw_normal(CounterRng& rng, const MatrixXd& sqrt_cov) {
  VectorXd z(sqrt_cov.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.next_normal();
  return sqrt_cov * z;
}

}  // namespace

RolloutResult rollout(const GameSpec& spec, const RiccatiSolution& riccati,
                      const StrategyTree& tree, std::uint64_t seed,
                      bool want_trace) {
  const int N = spec.horizon;
  if (tree.horizon != N)
    throw SolverError("strategy tree horizon does not match spec");
  CounterRng rng(seed);
  const MatrixXd sqrt_x0 = covariance_sqrt(spec.x0_cov);
  const MatrixXd sqrt_w = covariance_sqrt(spec.sigma_s);
  const MatrixXd sqrt_v = covariance_sqrt(spec.sigma_o);

  RolloutResult result;
  result.errors.reserve(static_cast<std::size_t>(N));
  if (want_trace) result.trace.reserve(static_cast<std::size_t>(N));

  VectorXd x = spec.x0_mean + draw_normal(rng, sqrt_x0);
  VectorXd xhat, ud_prev, ua_prev;
  MatrixXd P;
  int cur = -1;  // tree node of the stage about to be played, -1 for stage 0

  for (int n = 0; n < N; ++n) {
    const std::size_t i = static_cast<std::size_t>(n);
    StageDecision d =
        n == 0 ? tree.stage0.decision : tree.node(cur).decision;
    int h = delivery(spec, d);

    bool has_y = h == 1;
    VectorXd y;
    if (has_y) y = spec.D * x + spec.E * draw_normal(rng, sqrt_v);

    if (n == 0) {
      if (has_y) {
        ObservationUpdate u0 = initial_update(spec);
        xhat = spec.x0_mean + u0.G * (y - spec.D * spec.x0_mean);
      } else {
        xhat = spec.x0_mean;
      }
      P = initial_covariance(spec, h);
    } else {
      FilterState fs = filter_step(spec, {xhat, P}, ud_prev, ua_prev,
                                   has_y ? &y : nullptr, h);
      xhat = std::move(fs.xhat);
      P = std::move(fs.P);
    }

    Controls u = controls_at(spec, riccati, n, xhat);
    double cost = x.dot(spec.Q[i] * x) + u.ud.dot(spec.Rd[i] * u.ud) -
                  u.ua.dot(spec.Ra[i] * u.ua) + d.id * spec.Od[i] -
                  d.ia * spec.Oa[i];
    result.errors.push_back(x - xhat);
    result.total_cost += cost;
    if (want_trace) {
      StageRecord rec;
      rec.stage = n;
      rec.x = x;
      rec.xhat = xhat;
      rec.P = P;
      rec.i_d = d.id;
      rec.i_a = d.ia;
      rec.h = h;
      rec.ud = u.ud;
      rec.ua = u.ua;
      rec.has_y = has_y;
      if (has_y) rec.y = y;
      rec.stage_cost = cost;
      result.trace.push_back(std::move(rec));
    }

    x = spec.A * x + spec.Bd * u.ud + spec.Ba * u.ua +
        spec.C * draw_normal(rng, sqrt_w);
    ud_prev = std::move(u.ud);
    ua_prev = std::move(u.ua);

    int next = n == 0 ? (h == 0 ? tree.stage0.root0 : tree.stage0.root1)
                      : (h == 0 ? tree.node(cur).child0 : tree.node(cur).child1);
    if (next < 0)
      throw SolverError("strategy tree lacks a node for the realized history");
    cur = next;
  }

  result.terminal_cost = x.dot(spec.Q[static_cast<std::size_t>(N)] * x);
  result.total_cost += result.terminal_cost;
  return result;
}

MonteCarloStats monte_carlo(const GameSpec& spec,
                            const RiccatiSolution& riccati,
                            const StrategyTree& tree, std::int64_t replicates,
                            std::uint64_t base_seed, int threads) {
  if (replicates < 2)
    throw SolverError("monte_carlo needs at least 2 replicates");
  const int N = spec.horizon;
  const int nx = spec.state_dim();

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<MatrixXd> outer;
  };
  const int chunks =
      static_cast<int>(std::min<std::int64_t>(64, replicates));
  std::vector<Partial> partials(static_cast<std::size_t>(chunks));
  for (auto& p : partials)
    p.outer.assign(static_cast<std::size_t>(N), MatrixXd::Zero(nx, nx));

  std::atomic<int> next_chunk{0};
  auto worker = [&]() {
    for (;;) {
      int c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      Partial& p = partials[static_cast<std::size_t>(c)];
      std::int64_t begin = replicates * c / chunks;
      std::int64_t end = replicates * (c + 1) / chunks;
      for (std::int64_t r = begin; r < end; ++r) {
        RolloutResult run = rollout(
            spec, riccati, tree,
            derive_stream(base_seed, static_cast<std::uint64_t>(r)));
        p.sum += run.total_cost;
        p.sum_sq += run.total_cost * run.total_cost;
        for (int n = 0; n < N; ++n) {
          const VectorXd& e = run.errors[static_cast<std::size_t>(n)];
          p.outer[static_cast<std::size_t>(n)] += e * e.transpose();
        }
      }
    }
  };

  int n_threads = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, chunks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  MonteCarloStats stats;
  stats.replicates = replicates;
  double sum = 0.0, sum_sq = 0.0;
  stats.error_covariance.assign(static_cast<std::size_t>(N),
                                MatrixXd::Zero(nx, nx));
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
    for (int n = 0; n < N; ++n)
      stats.error_covariance[static_cast<std::size_t>(n)] +=
          p.outer[static_cast<std::size_t>(n)];
  }
  const double K = static_cast<double>(replicates);
  stats.mean = sum / K;
  stats.variance = std::max(0.0, (sum_sq - sum * sum / K) / (K - 1.0));
  stats.std_error = std::sqrt(stats.variance / K);
  for (auto& m : stats.error_covariance) m /= K;
  return stats;
}

}  // namespace lqgame
