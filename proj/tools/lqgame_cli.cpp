#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "lqgame/config_io.hpp"
#include "lqgame/errors.hpp"
#include "lqgame/rng.hpp"
#include "lqgame/simulation.hpp"
#include "lqgame/tree_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConcavity = 2;
constexpr int kExitNoPureNash = 3;

std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += lqgame::format_number(v[i]);
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lqgame::SolverError("cannot open " + path.string() + " for writing");
  return out;
}

void write_solution(const lqgame::GameSpec& spec,
                    const lqgame::SolveResult& result, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  lqgame::save_tree(result.tree, (out_dir / "strategy_tree.json").string());

  auto value = open_out(out_dir / "value_breakdown.csv");
  value << "term,value\n";
  value << "initial," << lqgame::format_number(result.value.initial) << "\n";
  value << "process_noise," << lqgame::format_number(result.value.process_noise) << "\n";
  value << "estimation," << lqgame::format_number(result.value.estimation) << "\n";
  value << "observation," << lqgame::format_number(result.value.observation) << "\n";
  value << "jamming," << lqgame::format_number(result.value.jamming) << "\n";
  value << "total," << lqgame::format_number(result.value.total()) << "\n";

  auto decisions = open_out(out_dir / "decisions.csv");
  decisions << "stage,i_d,i_a,h,P_trace\n";
  for (int n = 0; n < spec.horizon; ++n) {
    lqgame::StageDecision d = result.tree.decision_at(n);
    const auto& node =
        result.tree.node(result.tree.on_path[static_cast<std::size_t>(n)]);
    decisions << n << "," << d.id << "," << d.ia << ","
              << lqgame::delivery(spec, d) << ","
              << lqgame::format_number(node.P.trace()) << "\n";
  }
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  lqgame::GameSpec spec = lqgame::parse_spec_file(config_path);
  lqgame::SolveResult result = lqgame::solve(spec);
  write_solution(spec, result, out_dir);
  std::cout << "method " << result.tree.method
            << (result.tree.converged ? "" : " (not converged)")
            << ", game value " << lqgame::format_number(result.value.total())
            << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, std::int64_t replicates,
                 std::uint64_t seed, const std::string& out_dir,
                 bool want_trace) {
  lqgame::GameSpec spec = lqgame::parse_spec_file(config_path);
  lqgame::SolveResult solved = lqgame::solve(spec);
  lqgame::MonteCarloStats stats =
      lqgame::monte_carlo(spec, solved.riccati, solved.tree, replicates, seed);

  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  auto mc = open_out(dir / "mc_stats.csv");
  mc << "replicates,mean,std_error,variance,analytic_total\n";
  mc << stats.replicates << "," << lqgame::format_number(stats.mean) << ","
     << lqgame::format_number(stats.std_error) << ","
     << lqgame::format_number(stats.variance) << ","
     << lqgame::format_number(solved.value.total()) << "\n";

  auto cov = open_out(dir / "error_covariance.csv");
  cov << "stage,row,col,value\n";
  for (int n = 0; n < spec.horizon; ++n) {
    const auto& m = stats.error_covariance[static_cast<std::size_t>(n)];
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        cov << n << "," << r << "," << c << ","
            << lqgame::format_number(m(r, c)) << "\n";
  }

  if (want_trace) {
    lqgame::RolloutResult run =
        lqgame::rollout(spec, solved.riccati, solved.tree,
                        lqgame::derive_stream(seed, 0), true);
    auto trace = open_out(dir / "trace.csv");
    trace << "stage,x,xhat,ud,ua,id,ia,h,stage_cost\n";
    for (const auto& rec : run.trace) {
      trace << rec.stage << "," << join(rec.x) << "," << join(rec.xhat) << ","
            << join(rec.ud) << "," << join(rec.ua) << "," << rec.i_d << ","
            << rec.i_a << "," << rec.h << ","
            << lqgame::format_number(rec.stage_cost) << "\n";
    }
  }

  std::cout << "mean total cost " << lqgame::format_number(stats.mean)
            << " (std error " << lqgame::format_number(stats.std_error)
            << ") over " << replicates << " replicates\n";
  return 0;
}

/** Replaces the swept base value in the config; stage overrides survive. */
void apply_param(lqgame::ConfigDoc& doc, const std::string& name, double v) {
  auto set_scalar = [&](Eigen::MatrixXd& m, const char* field) {
    if (m.rows() != 1 || m.cols() != 1)
      throw lqgame::SolverError(std::string("sweep parameter ") + field +
                                " needs a scalar (1x1) base value");
    m(0, 0) = v;
  };
  if (name == "r_a") {
    set_scalar(doc.Ra, "r_a");
  } else if (name == "a") {
    set_scalar(doc.A, "a");
  } else if (name == "sigma_o") {
    set_scalar(doc.sigma_o, "sigma_o");
  } else if (name == "o_d") {
    doc.Od = v;
  } else if (name == "o_a") {
    doc.Oa = v;
  } else {
    throw lqgame::SolverError("unknown sweep parameter '" + name +
                              "' (expected r_a, a, sigma_o, o_d, o_a)");
  }
}

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  bool converged = true;
  int nash_stage = -1;  // stage of the NoPureNash report when !ok
  std::vector<int> Id, Ia;
  double total = 0.0;
};

int cmd_sweep(const std::string& config_path, const std::string& param,
              std::vector<double> values, const std::string& out_dir) {
  if (values.empty()) {
    std::cerr << "sweep: --values must list at least one value\n";
    return kExitUsage;
  }
  lqgame::ConfigDoc base = lqgame::parse_config_file(config_path);
  std::sort(values.begin(), values.end());

  // Validate every point up front so parse/validation problems keep exit
  // code 1 instead of surfacing from a worker thread.
  std::vector<lqgame::GameSpec> specs;
  for (double v : values) {
    lqgame::ConfigDoc doc = base;
    apply_param(doc, param, v);
    specs.push_back(lqgame::build_spec(doc));
  }

  std::vector<SweepPoint> points(values.size());
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> bail{false};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= values.size() || bail.load()) return;
      SweepPoint& pt = points[i];
      pt.value = values[i];
      try {
        lqgame::SolveResult result = lqgame::solve(specs[i]);
        for (int n = 0; n < specs[i].horizon; ++n) {
          lqgame::StageDecision d = result.tree.decision_at(n);
          pt.Id.push_back(d.id);
          pt.Ia.push_back(d.ia);
        }
        pt.total = result.value.total();
        pt.converged = result.tree.converged;
        pt.ok = true;
      } catch (const lqgame::NoPureNashError& e) {
        pt.nash_stage = e.stage();
      } catch (...) {
        if (!bail.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t n_threads =
      std::min<std::size_t>(values.size(), hw ? hw : 1);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  auto long_csv = open_out(dir / "decisions_long.csv");
  long_csv << "value,stage,i_d,i_a\n";
  auto summary = open_out(dir / "summary.csv");
  summary << "value,observations,jammings,total,status\n";
  for (const auto& pt : points) {
    const std::string value = lqgame::format_number(pt.value);
    if (!pt.ok) {
      summary << value << ",,,,no_pure_nash\n";
      std::cerr << "sweep: " << param << "=" << value
                << ": no pure-strategy equilibrium at stage " << pt.nash_stage
                << "\n";
      continue;
    }
    int obs = 0, jams = 0;
    for (std::size_t n = 0; n < pt.Id.size(); ++n) {
      long_csv << value << "," << n << "," << pt.Id[n] << "," << pt.Ia[n]
               << "\n";
      obs += pt.Id[n];
      jams += pt.Ia[n];
    }
    summary << value << "," << obs << "," << jams << ","
            << lqgame::format_number(pt.total)
            << (pt.converged ? ",ok\n" : ",not_converged\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon defender/attacker game solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, sweep_param;
  std::int64_t replicates = 1000;
  std::uint64_t seed = 1;
  bool want_trace = false;
  std::vector<double> sweep_values;

  auto* solve_cmd = app.add_subcommand("solve", "Solve a game config");
  solve_cmd->add_option("--config", config_path, "Game config file")->required();
  solve_cmd->add_option("--out", out_dir, "Output directory")->required();

  auto* sim_cmd =
      app.add_subcommand("simulate", "Solve, then Monte Carlo simulate");
  sim_cmd->add_option("--config", config_path, "Game config file")->required();
  sim_cmd->add_option("--replicates", replicates, "Number of rollouts")
      ->required();
  sim_cmd->add_option("--seed", seed, "Base RNG seed")->required();
  sim_cmd->add_option("--out", out_dir, "Output directory")->required();
  sim_cmd->add_flag("--trace", want_trace, "Also dump replicate 0's trajectory");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Solve once per parameter value");
  sweep_cmd->add_option("--config", config_path, "Game config file")->required();
  sweep_cmd
      ->add_option("--param", sweep_param,
                   "Swept parameter: r_a, a, sigma_o, o_d or o_a")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(config_path, out_dir);
    if (sim_cmd->parsed())
      return cmd_simulate(config_path, replicates, seed, out_dir, want_trace);
    return cmd_sweep(config_path, sweep_param, sweep_values, out_dir);
  } catch (const lqgame::ConcavityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConcavity;
  } catch (const lqgame::NoPureNashError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoPureNash;
  } catch (const lqgame::ParseError& e) {
    std::cerr << "error: " << config_path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
