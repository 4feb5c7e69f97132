#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "mecsim/scenario.hpp"
#include "test_helpers.hpp"

using namespace mecsim;

namespace {

ScenarioConfig small_config(std::uint64_t seed = 7) {
  ScenarioConfig cfg;
  cfg.num_bs = 6;
  cfg.num_imds = 5;
  cfg.tasks_per_imd = 2;
  cfg.num_clusters = 3;
  cfg.cache_capacity_per_bs = 2;
  cfg.seed = seed;
  return cfg;
}

double labeling_wcss(std::span<const Point> pts, const std::vector<int>& labels, int q) {
  std::vector<Point> sum(q);
  std::vector<int> cnt(q, 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sum[labels[i]].x += pts[i].x;
    sum[labels[i]].y += pts[i].y;
    ++cnt[labels[i]];
  }
  double wcss = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int c = labels[i];
    Point center{sum[c].x / cnt[c], sum[c].y / cnt[c]};
    wcss += sq_dist(pts[i], center);
  }
  return wcss;
}

}  // namespace

TEST_CASE("same config and seed give bit-identical scenarios") {
  ScenarioConfig cfg = small_config(7);
  Scenario a = generate_scenario(cfg);
  Scenario b = generate_scenario(cfg);
  CHECK(a == b);
  std::ostringstream sa, sb;
  save_scenario(a, sa);
  save_scenario(b, sb);
  CHECK(sa.str() == sb.str());
  cfg.seed = 8;
  CHECK_FALSE(generate_scenario(cfg) == a);
}

TEST_CASE("task matrix has K*M entries") {
  ScenarioConfig cfg;
  cfg.num_imds = 20;
  cfg.tasks_per_imd = 3;
  Scenario sc = generate_scenario(cfg);
  CHECK(sc.tasks.size() == 60);
}

TEST_CASE("data sizes follow the MB = 2^20 bytes convention") {
  Scenario sc = generate_scenario(small_config(3));
  for (const Task& t : sc.tasks) {
    CHECK(t.d_bits >= 8e4 * 1.048576);
    CHECK(t.d_bits <= 4e5 * 1.048576);
  }
}

TEST_CASE("generated fields respect their configured ranges") {
  ScenarioConfig cfg = small_config(21);
  Scenario sc = generate_scenario(cfg);
  for (const Task& t : sc.tasks) {
    CHECK(t.ell_cycles >= cfg.ell_cycles.lo);
    CHECK(t.ell_cycles <= cfg.ell_cycles.hi);
    CHECK(t.tau_max_s >= cfg.tau_max_s.lo);
    CHECK(t.tau_max_s <= cfg.tau_max_s.hi);
    CHECK(t.rho >= 3);
    CHECK(t.rho <= 6);
    CHECK(t.theta >= 1.0);
    CHECK(t.theta <= 3.0);
    CHECK(t.lambda_usd >= 5e3);
    CHECK(t.lambda_usd <= 1e4);
  }
  for (double f : sc.imd_f_lmax) {
    CHECK(f >= cfg.imd_max_cycles_lo);
    CHECK(f <= cfg.imd_max_cycles_hi);
  }
  for (const LinkState& l : sc.links) CHECK(l.gain > 0);
}

TEST_CASE("k-means separates well-separated points") {
  std::vector<Point> pts{{0, 0}, {100, 0}};
  std::vector<int> got = cluster_bs_kmeans(pts, 2, 1);
  CHECK(got[0] != got[1]);
}

TEST_CASE("k-means with Q=1 puts everything in one cluster") {
  std::vector<Point> pts{{0, 0}, {10, 3}, {50, 20}};
  std::vector<int> got = cluster_bs_kmeans(pts, 1, 1);
  CHECK(got == std::vector<int>{0, 0, 0});
}

TEST_CASE("k-means beats random labelings and decreases WCSS monotonically") {
  Rng rng(42);
  std::vector<Point> pts(30);
  for (Point& p : pts) p = {rng.uniform(0, 500), rng.uniform(0, 500)};
  const int q = 5;
  std::vector<double> trace;
  std::vector<int> labels = cluster_bs_kmeans(pts, q, 11, &trace);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);

  double kmeans_wcss = labeling_wcss(pts, labels, q);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> random_labels(pts.size());
    // force every cluster nonempty so centroids are defined
    for (int c = 0; c < q; ++c) random_labels[c] = c;
    for (std::size_t i = q; i < pts.size(); ++i)
      random_labels[i] = static_cast<int>(rng.index(q));
    CHECK(kmeans_wcss <= labeling_wcss(pts, random_labels, q) + 1e-9);
  }
}

TEST_CASE("k-means rejects Q larger than the point count") {
  std::vector<Point> pts{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(cluster_bs_kmeans(pts, 3, 1), ConfigError);
}

TEST_CASE("subchannel count derives from round-half-up") {
  CHECK(subchannel_count(20e6, 2e6, 5) == 2);
  CHECK(subchannel_count(20e6, 1e6, 4) == 5);
  CHECK(subchannel_count(20e6, 3e6, 4) == 2);  // 20/12 = 1.667
}

TEST_CASE("cache placement honors capacity") {
  Scenario sc = generate_scenario(small_config(5));
  SUBCASE("capacity 0 leaves everything uncached") {
    std::vector<std::uint8_t> c = place_cache(sc.tasks, sc.bs_positions, sc.imd_positions,
                                              sc.M(), 0, 0.8, 9);
    CHECK(std::count(c.begin(), c.end(), 1) == 0);
  }
  SUBCASE("a single BS with enough capacity caches every task") {
    std::vector<Point> one_bs{{250, 250}};
    std::vector<std::uint8_t> c = place_cache(sc.tasks, one_bs, sc.imd_positions, sc.M(),
                                              static_cast<int>(sc.tasks.size()), 0.8, 9);
    CHECK(std::count(c.begin(), c.end(), 1) == static_cast<long>(sc.tasks.size()));
  }
  SUBCASE("two unit-capacity BSs keep exactly the two most popular tasks") {
    std::vector<Point> bs{{0, 0}, {500, 500}};
    std::vector<Point> imds{{0, 10}, {0, 20}, {490, 500}, {500, 490}};
    std::vector<Task> tasks(4, Task{1e5, 1e7, 1.0, 3, 1.0, 1e4});
    const std::uint64_t seed = 13;
    std::vector<std::uint8_t> c = place_cache(tasks, bs, imds, 1, 1, 0.8, seed);
    CHECK(std::count(c.begin(), c.end(), 1) == 2);
    // reproduce the seeded popularity draw independently
    Rng rng(seed);
    std::vector<std::size_t> order = zipf_popularity_order(4, 0.8, rng);
    std::set<std::size_t> cached;
    for (int n = 0; n < 2; ++n)
      for (int k = 0; k < 4; ++k)
        if (c[n * 4 + k]) cached.insert(k);
    // the top task always fits; the next-ranked tasks fill the remaining slot
    CHECK(cached.count(order[0]) == 1);
    CHECK(cached.size() == 2);
  }
}

TEST_CASE("cache feasibility invariants hold on generated scenarios") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    ScenarioConfig cfg = small_config(seed);
    cfg.cache_capacity_per_bs = 1;
    Scenario sc = generate_scenario(cfg);
    for (int k = 0; k < sc.K(); ++k) {
      for (int m = 0; m < sc.M(); ++m) {
        int copies = 0;
        for (int n = 0; n < sc.N(); ++n) copies += sc.cached(n, k, m);
        CHECK(copies <= 1);
      }
    }
    for (int n = 0; n < sc.N(); ++n) {
      int used = 0;
      for (int k = 0; k < sc.K(); ++k)
        for (int m = 0; m < sc.M(); ++m) used += sc.cached(n, k, m);
      CHECK(used <= cfg.cache_capacity_per_bs);
    }
  }
}

TEST_CASE("cluster labels partition the BS set") {
  ScenarioConfig cfg;  // defaults: N=30, Q=5
  cfg.seed = 31;
  Scenario sc = generate_scenario(cfg);
  std::set<int> used;
  for (int n = 0; n < sc.N(); ++n) {
    CHECK(sc.cluster(n) >= 0);
    CHECK(sc.cluster(n) < sc.Q());
    used.insert(sc.cluster(n));
  }
  CHECK(static_cast<int>(used.size()) == sc.Q());
}

TEST_CASE("config validation names the offending field") {
  ScenarioConfig cfg = small_config();
  cfg.num_clusters = 10;  // > N
  CHECK_THROWS_WITH_AS(generate_scenario(cfg), doctest::Contains("'Q'"), ConfigError);
  cfg = small_config();
  cfg.system_bandwidth_hz = 1e6;  // < w*Q
  CHECK_THROWS_WITH_AS(generate_scenario(cfg), doctest::Contains("'W'"), ConfigError);
  cfg = small_config();
  cfg.d_mb = {0.05, 0.01};
  CHECK_THROWS_WITH_AS(generate_scenario(cfg), doctest::Contains("'d_min_mb'"), ConfigError);
  cfg = small_config();
  cfg.num_crypto_algos = 9;
  CHECK_THROWS_WITH_AS(generate_scenario(cfg), doctest::Contains("'L'"), ConfigError);
}

TEST_CASE("scenario serialization round-trips exactly") {
  Scenario sc = generate_scenario(small_config(17));
  std::ostringstream os;
  save_scenario(sc, os);
  std::istringstream is(os.str());
  Scenario back = load_scenario(is);
  CHECK(back == sc);
  std::ostringstream os2;
  save_scenario(back, os2);
  CHECK(os2.str() == os.str());
}

TEST_CASE("scenario config emit/parse round-trips") {
  ScenarioConfig cfg = small_config(23);
  cfg.zipf_exponent = 1.1;
  cfg.psi_max_usd = 73.5;
  std::ostringstream os;
  cfg.emit(os);
  ScenarioConfig back = ScenarioConfig::from_config(KeyValueConfig::from_string(os.str()));
  CHECK(back == cfg);
}

TEST_CASE("config file parsing handles comments, lists and errors") {
  KeyValueConfig kv = KeyValueConfig::from_string(
      "# comment\nN = 4\nzipf_exponent = 0.9  # trailing\nslope_thresholds_m = 300 600\n");
  CHECK(kv.get_int("N", 0) == 4);
  CHECK(kv.get_double("zipf_exponent") == doctest::Approx(0.9));
  CHECK(kv.get_list("slope_thresholds_m") == std::vector<double>{300, 600});
  CHECK_THROWS_AS(KeyValueConfig::from_string("oops\n"), ConfigError);
  CHECK_THROWS_AS(kv.get_double("missing"), ConfigError);
}
