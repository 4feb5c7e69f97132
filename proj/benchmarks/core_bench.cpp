#include <benchmark/benchmark.h>

#include "mecsim/harness.hpp"

namespace {

using namespace mecsim;

Scenario make_scenario(const std::string& profile, std::uint64_t seed) {
  ScenarioConfig cfg = ScenarioConfig::from_config(profile_config(profile));
  cfg.seed = seed;
  return generate_scenario(cfg);
}

void BM_GenerateScenario(benchmark::State& state) {
  ScenarioConfig cfg = ScenarioConfig::from_config(profile_config("paper"));
  cfg.seed = 1;
  for (auto _ : state) {
    cfg.seed++;
    benchmark::DoNotOptimize(generate_scenario(cfg));
  }
}
BENCHMARK(BM_GenerateScenario);

void BM_EvaluateFitness_Desk(benchmark::State& state) {
  Scenario sc = make_scenario("desk", 3);
  Evaluator eval(sc, PenaltyConfig{});
  Rng rng(5);
  Assignment a = random_assignment(GeneBounds::of(sc), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval.fitness(a));
}
BENCHMARK(BM_EvaluateFitness_Desk);

void BM_EvaluateFitness_Paper(benchmark::State& state) {
  Scenario sc = make_scenario("paper", 3);
  Evaluator eval(sc, PenaltyConfig{});
  Rng rng(5);
  Assignment a = random_assignment(GeneBounds::of(sc), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval.fitness(a));
}
BENCHMARK(BM_EvaluateFitness_Paper);

void BM_EvaluateReport_Paper(benchmark::State& state) {
  Scenario sc = make_scenario("paper", 3);
  Evaluator eval(sc, PenaltyConfig{});
  Rng rng(5);
  Assignment a = random_assignment(GeneBounds::of(sc), rng);
  for (auto _ : state) benchmark::DoNotOptimize(eval.report(a));
}
BENCHMARK(BM_EvaluateReport_Paper);

void BM_Iadgga10Gens(benchmark::State& state) {
  Scenario sc = make_scenario("desk", 3);
  SolverConfig cfg = SolverConfig::from_config(profile_config("desk"));
  cfg.t1 = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run_iadgga(sc, cfg, 7));
}
BENCHMARK(BM_Iadgga10Gens)->Unit(benchmark::kMillisecond);

void BM_Apso50Iters(benchmark::State& state) {
  Scenario sc = make_scenario("desk", 3);
  SolverConfig cfg = SolverConfig::from_config(profile_config("desk"));
  cfg.t1 = 1;
  cfg.t2 = 50;
  for (auto _ : state) benchmark::DoNotOptimize(run_fihas(sc, cfg, 7));
}
BENCHMARK(BM_Apso50Iters)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  Rng rng(11);
  std::vector<Point> pts(static_cast<std::size_t>(state.range(0)));
  for (Point& p : pts) p = {rng.uniform(0, 500), rng.uniform(0, 500)};
  for (auto _ : state) benchmark::DoNotOptimize(cluster_bs_kmeans(pts, 5, 3));
}
BENCHMARK(BM_KMeans)->Arg(30)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
