#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mecsim/harness.hpp"

using namespace mecsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentSpec quick_spec() {
  ExperimentSpec spec;
  spec.config = tiny_instance_config();
  spec.config.set("solver.T1", "30");
  spec.config.set("solver.T2", "20");
  spec.config.set("solver.I", "8");
  return spec;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "mecsim_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("profiles pin the documented scales") {
  KeyValueConfig desk = profile_config("desk");
  CHECK(desk.get_int("K", 0) == 8);
  CHECK(desk.get_int("solver.T1", 0) == 300);
  KeyValueConfig paper = profile_config("paper");
  CHECK(paper.get_int("N", 0) == 30);
  CHECK(paper.get_int("solver.T2", 0) == 3000);
  CHECK_THROWS_AS(profile_config("pocket"), ConfigError);
}

TEST_CASE("the pinned tiny instance has one subchannel") {
  ScenarioConfig cfg = ScenarioConfig::from_config(tiny_instance_config());
  cfg.seed = 1;
  Scenario sc = generate_scenario(cfg);
  CHECK(sc.N() == 2);
  CHECK(sc.K() == 2);
  CHECK(sc.M() == 1);
  CHECK(sc.S() == 1);
  CHECK(sc.L() == 2);
}

TEST_CASE("a single CLCA cell produces one feasible row") {
  ExperimentSpec spec = quick_spec();
  spec.algorithms = {"clca"};
  spec.seeds = {4};
  std::vector<RunResult> rows = run_experiment(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].algo == "clca");
  CHECK(rows[0].tsr == 1.0);
  CHECK(rows[0].csr == 1.0);
  CHECK(rows[0].trace_file == "-");
}

TEST_CASE("sweep cells multiply out to value x seed x algorithm rows") {
  ExperimentSpec spec = quick_spec();
  spec.algorithms = {"clca", "coa"};
  spec.seeds = {1, 2};
  spec.sweep_param = "mu3";
  spec.sweep_values = {0.3, 0.5, 0.7};
  std::vector<RunResult> rows = run_experiment(spec);
  CHECK(rows.size() == 12);
  CHECK(rows[0].sweep_param == "mu3");
}

TEST_CASE("rerunning a spec writes byte-identical outputs") {
  ExperimentSpec spec = quick_spec();
  spec.algorithms = {"fihas", "clca"};
  spec.seeds = {1};
  fs::path d1 = fresh_dir("rerun_a");
  fs::path d2 = fresh_dir("rerun_b");
  spec.out_dir = d1.string();
  run_experiment(spec);
  spec.out_dir = d2.string();
  run_experiment(spec);
  CHECK(slurp(d1 / "results.csv") == slurp(d2 / "results.csv"));
  CHECK(slurp(d1 / "trace_fihas_s1.csv") == slurp(d2 / "trace_fihas_s1.csv"));
}

TEST_CASE("unknown algorithms and empty seed lists are rejected") {
  ExperimentSpec spec = quick_spec();
  spec.algorithms = {"simulated_annealing"};
  spec.seeds = {1};
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
  spec.algorithms = {"clca"};
  spec.seeds = {};
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
  spec.seeds = {1};
  spec.sweep_param = "alpha";
  spec.sweep_values = {1.0};
  CHECK_THROWS_AS(run_experiment(spec), ConfigError);
}

TEST_CASE("reported TEC matches an independent re-evaluation of the assignment") {
  ScenarioConfig cfg = ScenarioConfig::from_config(tiny_instance_config());
  cfg.seed = 5;
  Scenario sc = generate_scenario(cfg);
  SolverConfig scfg = SolverConfig::from_config(quick_spec().config);
  for (const std::string algo : {"fihas", "coa"}) {
    SingleRun run = run_single(sc, scfg, algo, 5);
    EvalReport again = evaluate(sc, run.assignment, scfg.penalties);
    CHECK(run.row.tec_j == again.tec_j);
    CHECK(run.row.best_fitness == again.fitness);
  }
  // CLCA's per-task capacity rule re-derives from the scenario alone
  SingleRun clca = run_single(sc, scfg, "clca", 5);
  auto [a2, rep2] = run_clca(sc, scfg.penalties);
  CHECK(clca.row.tec_j == rep2.tec_j);
}

TEST_CASE("convergence traces cover both phases with a marked boundary") {
  ExperimentSpec spec = quick_spec();
  spec.seeds = {3};
  fs::path d = fresh_dir("trace");
  spec.out_dir = d.string();
  std::vector<RunResult> rows = convergence_trace(std::move(spec));
  CHECK(rows.size() == 2);  // fihas + ihas
  std::string text = slurp(d / "trace_fihas_s3.csv");
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  CHECK(line == "# phase_boundary = 30");
  std::getline(is, line);
  CHECK(line == "iteration,best_fitness");
  int data_rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++data_rows;
  CHECK(data_rows == 50);  // T1 + T2
}

TEST_CASE("oracle comparison reports a zero gap for the exhaustive rows") {
  ExperimentSpec spec;
  spec.config.set("solver.T1", "30");
  spec.config.set("solver.T2", "20");
  spec.config.set("solver.I", "8");
  spec.algorithms = {"fihas", "clca"};
  spec.seeds = {1, 2};
  std::vector<OracleRow> rows = oracle_compare(std::move(spec), 3);
  REQUIRE(rows.size() == 6);
  for (const OracleRow& r : rows) {
    if (r.algo == "exhaustive") CHECK(r.rel_gap == 0.0);
    CHECK(r.rel_gap >= 0.0);
    CHECK(r.optimum_fitness < 0.0);
  }
}

TEST_CASE("results CSV header is pinned") {
  CHECK(std::string(kResultsCsvHeader) ==
        "algo,seed,sweep_param,sweep_value,tec_j,td_s,tsr,csr,best_fitness,trace_file");
  CHECK(std::string(kOracleCsvHeader) == "algo,seed,best_fitness,optimum_fitness,rel_gap");
}

TEST_CASE("golden results file for the pinned tiny spec") {
  ExperimentSpec spec;
  spec.config = tiny_instance_config();
  spec.algorithms = {"clca", "coa"};
  spec.seeds = {1, 2};
  fs::path d = fresh_dir("golden");
  spec.out_dir = d.string();
  run_experiment(spec);
  fs::path golden = fs::path(MECSIM_GOLDEN_DIR) / "tiny_results.csv";
  if (!fs::exists(golden)) {
    // first run on a fresh checkout: freeze the bytes
    fs::copy_file(d / "results.csv", golden);
  }
  CHECK(slurp(d / "results.csv") == slurp(golden));
}
