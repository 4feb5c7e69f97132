#ifndef MECSIM_HARNESS_HPP
#define MECSIM_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mecsim/solvers.hpp"

namespace mecsim {

// Base configurations: "desk" runs the full pipeline in minutes, "paper" uses
// the published scale (N=30, K=20, M=3, T1=5000, T2=3000).
KeyValueConfig profile_config(const std::string& name);

// Known algorithm ids, in canonical order.
std::span<const std::string> algorithm_ids();
bool is_algorithm_id(const std::string& id);

struct ExperimentSpec {
  KeyValueConfig config;                 // profile + file + CLI overrides
  std::vector<std::string> algorithms;   // subset of algorithm_ids()
  std::string sweep_param;               // "", "K", "f_lmax" or "mu3"
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;                   // empty: nothing written to disk
  bool write_traces = true;
  bool write_eval_rows = false;

  void validate() const;  // throws ConfigError
};

struct RunResult {
  std::string algo;
  std::uint64_t seed = 0;
  std::string sweep_param;
  double sweep_value = 0.0;
  double tec_j = 0.0;
  double td_s = 0.0;
  double tsr = 0.0;
  double csr = 0.0;
  double best_fitness = 0.0;
  double wall_time_s = 0.0;  // informational only; never serialized
  std::string trace_file;    // "-" when the algorithm has no trace
};

// Runs every (sweep value x seed x algorithm) cell deterministically and, if
// out_dir is set, writes results.csv plus per-run trace files.
std::vector<RunResult> run_experiment(const ExperimentSpec& spec);

// Canned reproductions of the experiment families. Each fills in defaults for
// whatever the spec leaves empty, then delegates to run_experiment.
std::vector<RunResult> sweep_imd_density(ExperimentSpec spec);
std::vector<RunResult> sweep_local_capacity(ExperimentSpec spec);
std::vector<RunResult> sweep_similarity_threshold(ExperimentSpec spec);
std::vector<RunResult> convergence_trace(ExperimentSpec spec);

struct OracleRow {
  std::string algo;
  std::uint64_t seed = 0;
  double best_fitness = 0.0;
  double optimum_fitness = 0.0;
  double rel_gap = 0.0;  // max(0, (opt - best) / |opt|)
};

// Tiny-instance comparison against the exhaustive optimum.
std::vector<OracleRow> oracle_compare(ExperimentSpec spec, int grid_points = 3);

// Pinned tiny instance used by the oracle runs (N=2, K=2, M=1, S=1, L=2).
KeyValueConfig tiny_instance_config();

extern const char* const kResultsCsvHeader;
void write_results_csv(std::ostream& os, std::span<const RunResult> rows);
extern const char* const kOracleCsvHeader;
void write_oracle_csv(std::ostream& os, std::span<const OracleRow> rows);
void write_trace_csv(std::ostream& os, std::span<const double> trace, int phase_boundary = -1);

// Single solve dispatch: runs `algo` on the scenario and returns the result
// row (without sweep bookkeeping) plus the trace and final report.
struct SingleRun {
  RunResult row;
  std::vector<double> trace;
  EvalReport report;
  Assignment assignment;
};
SingleRun run_single(const Scenario& sc, const SolverConfig& scfg,
                     const std::string& algo, std::uint64_t seed);

}  // namespace mecsim

#endif
