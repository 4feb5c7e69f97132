// Command-line front end: scenario generation, single solves, the sweep
// families, convergence traces and the tiny-instance oracle comparison.
//
//   mecsim generate --seed 7 --out runs/
//   mecsim solve --algo fihas --seed 1 --out runs/
//   mecsim sweep --param K --out runs/sweepK/
//   mecsim trace --out runs/trace/
//   mecsim oracle --out runs/oracle/

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mecsim/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string profile = "desk";
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string out_dir = ".";
  std::string algo;
  std::vector<std::string> algos;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::string param;
  std::string scenario_path;
  int grid = 3;
  bool eval_rows = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  cmd->add_option("--profile", o.profile, "base profile: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--seed", o.seed, "seed (scenario and solver)")
      ->each([&o](const std::string&) { o.seed_given = true; });
  cmd->add_option("--out", o.out_dir, "output directory");
}

mecsim::KeyValueConfig resolve_config(const CommonOpts& o) {
  mecsim::KeyValueConfig kv = mecsim::profile_config(o.profile);
  if (!o.config_path.empty()) kv.merge(mecsim::KeyValueConfig::from_file(o.config_path));
  return kv;
}

std::vector<std::uint64_t> resolve_seeds(const CommonOpts& o) {
  if (!o.seeds.empty()) return o.seeds;
  if (o.seed_given) return {o.seed};
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-assisted ultra-dense MEC offloading simulator and solver suite"};
  app.require_subcommand(1);

  CommonOpts gen_o, solve_o, sweep_o, trace_o, oracle_o;

  CLI::App* gen = app.add_subcommand("generate", "generate and write a scenario file");
  add_common(gen, gen_o);

  CLI::App* solve = app.add_subcommand("solve", "run one algorithm on one scenario");
  add_common(solve, solve_o);
  solve->add_option("--algo", solve_o.algo, "algorithm id")->required();
  solve->add_option("--scenario", solve_o.scenario_path,
                    "solve a previously generated scenario file instead");
  solve->add_flag("--eval-rows", solve_o.eval_rows, "also write per-task evaluation rows");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over seeds and algorithms");
  add_common(sweep, sweep_o);
  sweep->add_option("--param", sweep_o.param, "sweep parameter: K, f_lmax or mu3")
      ->required()
      ->check(CLI::IsMember({"K", "f_lmax", "mu3"}));
  sweep->add_option("--values", sweep_o.values, "sweep values (default per parameter)");
  sweep->add_option("--seeds", sweep_o.seeds, "seed list (default 1..5)");
  sweep->add_option("--algos", sweep_o.algos, "algorithm ids (default per sweep)");

  CLI::App* trace = app.add_subcommand("trace", "FIHAS/IHAS convergence traces");
  add_common(trace, trace_o);
  trace->add_option("--seeds", trace_o.seeds, "seed list (default 1..5)");
  trace->add_option("--algos", trace_o.algos, "algorithm ids (default fihas ihas)");

  CLI::App* oracle = app.add_subcommand("oracle", "tiny-instance comparison vs exhaustive");
  add_common(oracle, oracle_o);
  oracle->add_option("--seeds", oracle_o.seeds, "seed list (default 1..10)");
  oracle->add_option("--algos", oracle_o.algos, "algorithm ids");
  oracle->add_option("--grid", oracle_o.grid, "grid points per continuous gene");

  CLI11_PARSE(app, argc, argv);

  try {
    namespace fs = std::filesystem;
    if (gen->parsed()) {
      mecsim::ScenarioConfig cfg = mecsim::ScenarioConfig::from_config(resolve_config(gen_o));
      if (gen_o.seed_given) cfg.seed = gen_o.seed;
      mecsim::Scenario sc = mecsim::generate_scenario(cfg);
      fs::create_directories(gen_o.out_dir);
      fs::path path = fs::path(gen_o.out_dir) / ("scenario_s" + std::to_string(cfg.seed) + ".txt");
      mecsim::save_scenario_file(sc, path.string());
      std::cout << path.string() << "\n";
    } else if (solve->parsed()) {
      mecsim::RunResult row;
      if (!solve_o.scenario_path.empty()) {
        mecsim::Scenario sc = mecsim::load_scenario_file(solve_o.scenario_path);
        mecsim::SolverConfig scfg = mecsim::SolverConfig::from_config(resolve_config(solve_o));
        scfg.validate();
        mecsim::SingleRun run = run_single(sc, scfg, solve_o.algo, solve_o.seed);
        fs::create_directories(solve_o.out_dir);
        {
          std::ofstream f(fs::path(solve_o.out_dir) / "results.csv", std::ios::binary);
          if (!run.trace.empty()) {
            std::string name = "trace_" + solve_o.algo + "_s" +
                               std::to_string(solve_o.seed) + ".csv";
            std::ofstream tf(fs::path(solve_o.out_dir) / name, std::ios::binary);
            mecsim::write_trace_csv(tf, run.trace, scfg.t2 > 0 ? scfg.t1 : -1);
            run.row.trace_file = name;
          }
          mecsim::write_results_csv(f, {&run.row, 1});
          if (solve_o.eval_rows) {
            std::ofstream ef(fs::path(solve_o.out_dir) /
                                 ("eval_" + solve_o.algo + "_s" +
                                  std::to_string(solve_o.seed) + ".csv"),
                             std::ios::binary);
            mecsim::write_eval_csv(ef, sc, run.report, solve_o.algo);
          }
        }
        row = run.row;
      } else {
        mecsim::ExperimentSpec spec;
        spec.config = resolve_config(solve_o);
        spec.algorithms = {solve_o.algo};
        spec.seeds = {solve_o.seed};
        spec.out_dir = solve_o.out_dir;
        spec.write_eval_rows = solve_o.eval_rows;
        row = run_experiment(spec)[0];
      }
      std::fprintf(stderr, "%s seed %llu: TEC %.6g J, TD %.6g s, TSR %.3g, CSR %.3g (%.2fs)\n",
                   row.algo.c_str(), static_cast<unsigned long long>(row.seed), row.tec_j,
                   row.td_s, row.tsr, row.csr, row.wall_time_s);
    } else if (sweep->parsed()) {
      mecsim::ExperimentSpec spec;
      spec.config = resolve_config(sweep_o);
      spec.algorithms = sweep_o.algos;
      spec.sweep_values = sweep_o.values;
      spec.seeds = resolve_seeds(sweep_o);
      spec.out_dir = sweep_o.out_dir;
      std::vector<mecsim::RunResult> rows;
      if (sweep_o.param == "K") {
        rows = sweep_imd_density(std::move(spec));
      } else if (sweep_o.param == "f_lmax") {
        rows = sweep_local_capacity(std::move(spec));
      } else {
        rows = sweep_similarity_threshold(std::move(spec));
      }
      std::fprintf(stderr, "wrote %zu result rows to %s/results.csv\n", rows.size(),
                   sweep_o.out_dir.c_str());
    } else if (trace->parsed()) {
      mecsim::ExperimentSpec spec;
      spec.config = resolve_config(trace_o);
      spec.algorithms = trace_o.algos;
      spec.seeds = resolve_seeds(trace_o);
      spec.out_dir = trace_o.out_dir;
      std::vector<mecsim::RunResult> rows = convergence_trace(std::move(spec));
      std::fprintf(stderr, "wrote %zu traces to %s\n", rows.size(), trace_o.out_dir.c_str());
    } else if (oracle->parsed()) {
      mecsim::ExperimentSpec spec;
      // The oracle always runs the pinned tiny instance; only an explicit
      // config file may override it (profiles would trample N/K/M).
      if (!oracle_o.config_path.empty())
        spec.config = mecsim::KeyValueConfig::from_file(oracle_o.config_path);
      spec.algorithms = oracle_o.algos;
      spec.seeds = resolve_seeds(oracle_o);
      spec.out_dir = oracle_o.out_dir;
      std::vector<mecsim::OracleRow> rows = oracle_compare(std::move(spec), oracle_o.grid);
      std::fprintf(stderr, "wrote %zu oracle rows to %s/oracle.csv\n", rows.size(),
                   oracle_o.out_dir.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
