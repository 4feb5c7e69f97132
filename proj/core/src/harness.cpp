#include "mecsim/harness.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mecsim {

namespace {

const std::array<std::string, 8> kAlgorithms = {
    "fihas", "ihas", "iadgga", "adgga", "apso", "clca", "coa", "exhaustive"};

std::string sweep_tag(const std::string& param, double value) {
  if (param.empty()) return "";
  char buf[48];
  std::snprintf(buf, sizeof buf, "_%s%g", param.c_str(), value);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write output file: " + path.string());
  return f;
}

SolverConfig variant_config(SolverConfig cfg, const std::string& algo) {
  if (algo == "fihas" || algo == "iadgga") {
    cfg.adaptive_probs = true;
    cfg.elimination = true;
    cfg.gcpso = true;
  } else if (algo == "ihas" || algo == "adgga") {
    cfg.adaptive_probs = false;
    cfg.elimination = false;
    cfg.gcpso = false;
  }
  return cfg;
}

}  // namespace

KeyValueConfig profile_config(const std::string& name) {
  KeyValueConfig kv;
  if (name == "desk") {
    kv.set("N", "10");
    kv.set("K", "8");
    kv.set("M", "2");
    kv.set("solver.I", "30");
    kv.set("solver.T1", "300");
    kv.set("solver.T2", "200");
  } else if (name == "paper") {
    kv.set("N", "30");
    kv.set("K", "20");
    kv.set("M", "3");
    kv.set("solver.I", "60");
    kv.set("solver.T1", "5000");
    kv.set("solver.T2", "3000");
  } else {
    throw ConfigError("unknown profile: " + name + " (expected desk or paper)");
  }
  return kv;
}

std::span<const std::string> algorithm_ids() { return kAlgorithms; }

bool is_algorithm_id(const std::string& id) {
  for (const std::string& a : kAlgorithms)
    if (a == id) return true;
  return false;
}

void ExperimentSpec::validate() const {
  if (algorithms.empty()) throw ConfigError("experiment: at least one algorithm required");
  for (const std::string& a : algorithms)
    if (!is_algorithm_id(a)) throw ConfigError("unknown algorithm id: " + a);
  if (seeds.empty()) throw ConfigError("experiment: at least one seed required");
  if (!sweep_param.empty() && sweep_param != "K" && sweep_param != "f_lmax" &&
      sweep_param != "mu3")
    throw ConfigError("unknown sweep parameter: " + sweep_param);
  if (!sweep_param.empty() && sweep_values.empty())
    throw ConfigError("experiment: sweep values required for parameter " + sweep_param);
}

KeyValueConfig tiny_instance_config() {
  KeyValueConfig kv;
  kv.set("N", "2");
  kv.set("K", "2");
  kv.set("M", "1");
  kv.set("Q", "1");
  kv.set("W", "2e6");
  kv.set("w", "2e6");  // S = 1
  kv.set("L", "2");
  kv.set("region_side_m", "200");
  kv.set("solver.I", "30");
  kv.set("solver.T1", "300");
  kv.set("solver.T2", "200");
  return kv;
}

SingleRun run_single(const Scenario& sc, const SolverConfig& scfg, const std::string& algo,
                     std::uint64_t seed) {
  SingleRun out;
  SolverConfig cfg = variant_config(scfg, algo);
  auto start = std::chrono::steady_clock::now();

  if (algo == "clca") {
    std::tie(out.assignment, out.report) = run_clca(sc, cfg.penalties);
  } else if (algo == "coa") {
    std::tie(out.assignment, out.report) = run_coa(sc, cfg.penalties);
  } else if (algo == "exhaustive") {
    ExhaustiveResult ex = exhaustive_solve(sc, cfg.penalties, 3);
    out.assignment = ex.best.genes;
    out.report = evaluate(sc, out.assignment, cfg.penalties);
  } else {
    SolveResult res;
    if (algo == "fihas" || algo == "ihas") {
      res = run_fihas(sc, cfg, seed);
    } else if (algo == "iadgga" || algo == "adgga") {
      res = run_iadgga(sc, cfg, seed);
    } else if (algo == "apso") {
      Rng init_rng = Rng::stream(seed, "ga/init");
      res = run_apso(sc, cfg, init_population(sc, cfg, init_rng), seed);
    } else {
      throw ConfigError("unknown algorithm id: " + algo);
    }
    out.assignment = res.best.genes;
    out.trace = std::move(res.trace);
    out.report = evaluate(sc, out.assignment, cfg.penalties);
  }

  out.row.algo = algo;
  out.row.seed = seed;
  out.row.tec_j = out.report.tec_j;
  out.row.td_s = out.report.td_s;
  out.row.tsr = out.report.tsr;
  out.row.csr = out.report.csr;
  out.row.best_fitness = out.report.fitness;
  out.row.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.row.trace_file = "-";
  return out;
}

std::vector<RunResult> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  namespace fs = std::filesystem;
  const bool to_disk = !spec.out_dir.empty();
  if (to_disk) fs::create_directories(spec.out_dir);

  std::vector<std::pair<std::string, double>> cells;
  if (spec.sweep_param.empty()) {
    cells.emplace_back("", 0.0);
  } else {
    for (double v : spec.sweep_values) cells.emplace_back(spec.sweep_param, v);
  }

  std::vector<RunResult> rows;
  for (const auto& [param, value] : cells) {
    KeyValueConfig kv = spec.config;
    if (param == "K") {
      kv.set("K", std::to_string(static_cast<long long>(value)));
    } else if (param == "f_lmax") {
      kv.set_double("f_lmax_min", value);
      kv.set_double("f_lmax_max", value);
    } else if (param == "mu3") {
      kv.set_double("solver.mu3", value);
    }
    ScenarioConfig sc_cfg = ScenarioConfig::from_config(kv);
    SolverConfig sol_cfg = SolverConfig::from_config(kv);
    sol_cfg.validate();
    for (std::uint64_t seed : spec.seeds) {
      sc_cfg.seed = seed;
      Scenario sc = generate_scenario(sc_cfg);
      for (const std::string& algo : spec.algorithms) {
        SingleRun run = run_single(sc, sol_cfg, algo, seed);
        run.row.sweep_param = param;
        run.row.sweep_value = value;
        if (!run.trace.empty() && spec.write_traces && to_disk) {
          std::string name =
              "trace_" + algo + "_s" + std::to_string(seed) + sweep_tag(param, value) + ".csv";
          std::ofstream f = open_out(fs::path(spec.out_dir) / name);
          int boundary = (algo == "fihas" || algo == "ihas") && sol_cfg.t2 > 0 ? sol_cfg.t1 : -1;
          write_trace_csv(f, run.trace, boundary);
          run.row.trace_file = name;
        } else if (!run.trace.empty()) {
          run.row.trace_file = "";
        }
        if (spec.write_eval_rows && to_disk) {
          std::string name =
              "eval_" + algo + "_s" + std::to_string(seed) + sweep_tag(param, value) + ".csv";
          std::ofstream f = open_out(fs::path(spec.out_dir) / name);
          write_eval_csv(f, sc, run.report, algo);
        }
        rows.push_back(std::move(run.row));
      }
    }
  }

  if (to_disk) {
    std::ofstream f = open_out(fs::path(spec.out_dir) / "results.csv");
    write_results_csv(f, rows);
  }
  return rows;
}

std::vector<RunResult> sweep_imd_density(ExperimentSpec spec) {
  spec.sweep_param = "K";
  if (spec.sweep_values.empty()) spec.sweep_values = {10, 15, 20, 25, 30};
  if (spec.algorithms.empty())
    spec.algorithms = {"fihas", "ihas", "iadgga", "adgga", "clca", "coa"};
  if (spec.seeds.empty()) spec.seeds = {1, 2, 3, 4, 5};
  return run_experiment(spec);
}

std::vector<RunResult> sweep_local_capacity(ExperimentSpec spec) {
  spec.sweep_param = "f_lmax";
  if (spec.sweep_values.empty()) spec.sweep_values = {1.0e9, 1.25e9, 1.5e9, 1.75e9, 2.0e9};
  if (spec.algorithms.empty())
    spec.algorithms = {"fihas", "ihas", "iadgga", "adgga", "clca", "coa"};
  if (spec.seeds.empty()) spec.seeds = {1, 2, 3, 4, 5};
  return run_experiment(spec);
}

std::vector<RunResult> sweep_similarity_threshold(ExperimentSpec spec) {
  spec.sweep_param = "mu3";
  if (spec.sweep_values.empty()) spec.sweep_values = {0.3, 0.5, 0.7, 0.9};
  if (spec.algorithms.empty()) spec.algorithms = {"iadgga", "adgga"};
  if (spec.seeds.empty()) spec.seeds = {1, 2, 3, 4, 5};
  return run_experiment(spec);
}

std::vector<RunResult> convergence_trace(ExperimentSpec spec) {
  if (spec.algorithms.empty()) spec.algorithms = {"fihas", "ihas"};
  if (spec.seeds.empty()) spec.seeds = {1, 2, 3, 4, 5};
  spec.write_traces = true;
  return run_experiment(spec);
}

std::vector<OracleRow> oracle_compare(ExperimentSpec spec, int grid_points) {
  KeyValueConfig kv = tiny_instance_config();
  kv.merge(spec.config);
  if (spec.algorithms.empty())
    spec.algorithms = {"fihas", "ihas", "iadgga", "adgga", "clca", "coa"};
  if (spec.seeds.empty()) spec.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  ScenarioConfig sc_cfg = ScenarioConfig::from_config(kv);
  SolverConfig sol_cfg = SolverConfig::from_config(kv);
  sol_cfg.validate();

  std::vector<OracleRow> rows;
  for (std::uint64_t seed : spec.seeds) {
    sc_cfg.seed = seed;
    Scenario sc = generate_scenario(sc_cfg);
    ExhaustiveResult ex = exhaustive_solve(sc, sol_cfg.penalties, grid_points);
    rows.push_back({"exhaustive", seed, ex.best.fitness, ex.best.fitness, 0.0});
    for (const std::string& algo : spec.algorithms) {
      if (algo == "exhaustive") continue;
      SingleRun run = run_single(sc, sol_cfg, algo, seed);
      double gap = 0.0;
      if (run.row.best_fitness < ex.best.fitness)
        gap = (ex.best.fitness - run.row.best_fitness) / std::abs(ex.best.fitness);
      rows.push_back({algo, seed, run.row.best_fitness, ex.best.fitness, gap});
    }
  }

  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    std::ofstream f = open_out(std::filesystem::path(spec.out_dir) / "oracle.csv");
    write_oracle_csv(f, rows);
  }
  return rows;
}

const char* const kResultsCsvHeader =
    "algo,seed,sweep_param,sweep_value,tec_j,td_s,tsr,csr,best_fitness,trace_file";

void write_results_csv(std::ostream& os, std::span<const RunResult> rows) {
  os << kResultsCsvHeader << '\n';
  for (const RunResult& r : rows) {
    os << r.algo << ',' << r.seed << ',' << r.sweep_param << ','
       << format_double(r.sweep_value) << ',' << format_double(r.tec_j) << ','
       << format_double(r.td_s) << ',' << format_double(r.tsr) << ','
       << format_double(r.csr) << ',' << format_double(r.best_fitness) << ','
       << r.trace_file << '\n';
  }
}

const char* const kOracleCsvHeader = "algo,seed,best_fitness,optimum_fitness,rel_gap";

void write_oracle_csv(std::ostream& os, std::span<const OracleRow> rows) {
  os << kOracleCsvHeader << '\n';
  for (const OracleRow& r : rows) {
    os << r.algo << ',' << r.seed << ',' << format_double(r.best_fitness) << ','
       << format_double(r.optimum_fitness) << ',' << format_double(r.rel_gap) << '\n';
  }
}

void write_trace_csv(std::ostream& os, std::span<const double> trace, int phase_boundary) {
  if (phase_boundary >= 0) os << "# phase_boundary = " << phase_boundary << '\n';
  os << "iteration,best_fitness\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    os << (i + 1) << ',' << format_double(trace[i]) << '\n';
}

}  // namespace mecsim
