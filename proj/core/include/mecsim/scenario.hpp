#ifndef MECSIM_SCENARIO_HPP
#define MECSIM_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mecsim/channel.hpp"
#include "mecsim/config.hpp"
#include "mecsim/rng.hpp"
#include "mecsim/util.hpp"

namespace mecsim {

struct ValueRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const ValueRange&) const = default;
};

// Everything needed to generate a network instance. Config file keys use the
// same names as the fields listed in the comments (N, K, M, ...).
struct ScenarioConfig {
  double region_side_m = 500.0;          // key: region_side_m
  int num_bs = 30;                       // key: N
  int num_imds = 20;                     // key: K
  int tasks_per_imd = 3;                 // key: M
  int num_clusters = 5;                  // key: Q
  double system_bandwidth_hz = 20e6;     // key: W
  double subchannel_bandwidth_hz = 2e6;  // key: w
  int num_crypto_algos = 6;              // key: L
  double backhaul_rate_bps = 100e6;      // key: r_bh
  double bs_max_cycles = 20e9;           // key: f_mmax
  double imd_max_cycles_lo = 1e9;        // key: f_lmax_min
  double imd_max_cycles_hi = 2e9;        // key: f_lmax_max
  double max_power_dbm = 23.0;           // key: p_max_dbm
  double noise_psd_dbm_hz = -174.0;      // key: noise_psd_dbm_hz
  double chip_energy_coeff = 1e-24;      // key: alpha

  std::vector<SlopeParams> slopes;       // keys: slope_* lists; default built in ctor

  ValueRange d_mb{0.01, 0.05};           // keys: d_min_mb / d_max_mb
  ValueRange ell_cycles{1e7, 5e7};       // keys: ell_min / ell_max
  ValueRange tau_max_s{1.0, 3.0};        // keys: tau_max_min / tau_max_max
  ValueRange rho{3, 6};                  // keys: rho_min / rho_max (integer draw)
  ValueRange theta{1.0, 3.0};            // keys: theta_min / theta_max
  ValueRange lambda_usd{5e3, 10e3};      // keys: lambda_min / lambda_max

  int cache_capacity_per_bs = 10;        // key: cache_capacity_per_bs
  double zipf_exponent = 0.8;            // key: zipf_exponent
  double psi_max_usd = 100.0;            // key: psi_max
  // Variance-free channel mode: links carry P*h_LoS + (1-P)*h_NLoS instead of
  // a drawn branch. Meant for regression tests.
  bool expected_gains = false;           // key: expected_gains
  std::uint64_t seed = 1;                // key: seed

  // Optional override of the built-in crypto table (all three, length L).
  std::vector<double> crypto_enc_cycles;   // key: crypto_enc_cycles
  std::vector<double> crypto_dec_cycles;   // key: crypto_dec_cycles
  std::vector<double> crypto_energy_j;     // key: crypto_energy_j

  ScenarioConfig();

  // Throws ConfigError naming the offending field.
  void validate() const;

  double max_power_w() const { return dbm_to_watt(max_power_dbm); }
  double noise_psd_w_hz() const { return dbm_to_watt(noise_psd_dbm_hz); }

  static ScenarioConfig from_config(const KeyValueConfig& kv);
  void emit(std::ostream& os) const;  // canonical key = value form

  bool operator==(const ScenarioConfig&) const = default;
};

struct Task {
  double d_bits = 0.0;       // data size
  double ell_cycles = 0.0;   // workload
  double tau_max_s = 0.0;    // deadline
  int rho = 1;               // required security level
  double theta = 0.0;        // security risk coefficient
  double lambda_usd = 0.0;   // financial loss on breach
  bool operator==(const Task&) const = default;
};

struct CryptoProfile {
  std::vector<int> rho_dot;                  // protection level of algorithm l (= l)
  std::vector<double> enc_cycles_per_bit;    // epsilon_l
  std::vector<double> dec_cycles_per_bit;    // epsilon_dot_l
  std::vector<double> energy_per_bit_j;      // epsilon_ddot_l
  int size() const { return static_cast<int>(rho_dot.size()); }
  bool operator==(const CryptoProfile&) const = default;
};

// Immutable network instance; safe to share read-only across solver threads.
struct Scenario {
  ScenarioConfig config;
  std::vector<Point> bs_positions;       // size N
  std::vector<Point> imd_positions;      // size K
  std::vector<int> cluster_of_bs;        // size N, values 0..Q-1
  int num_subchannels = 1;               // S = R(W/(w*Q))
  std::vector<Task> tasks;               // K*M, index k*M+m
  std::vector<std::uint8_t> cache;       // N*K*M, index (n*K+k)*M+m
  CryptoProfile crypto;
  std::vector<LinkState> links;          // N*K, index n*K+k
  std::vector<double> imd_f_lmax;        // size K
  double p_max_w = 0.0;
  double noise_power_w = 0.0;            // sigma^2 = noise_psd * w

  int N() const { return config.num_bs; }
  int K() const { return config.num_imds; }
  int M() const { return config.tasks_per_imd; }
  int S() const { return num_subchannels; }
  int Q() const { return config.num_clusters; }
  int L() const { return crypto.size(); }

  const Task& task(int k, int m) const { return tasks[k * M() + m]; }
  const LinkState& link(int n, int k) const { return links[n * K() + k]; }
  double gain(int n, int k) const { return links[n * K() + k].gain; }
  bool cached(int n, int k, int m) const { return cache[(n * K() + k) * M() + m] != 0; }
  int cluster(int n) const { return cluster_of_bs[n]; }

  bool operator==(const Scenario&) const = default;
};

// First `l` rows of the built-in crypto algorithm table (l <= 6).
CryptoProfile default_crypto_profile(int l);

// Deterministic instance generation; bit-identical for identical configs.
Scenario generate_scenario(const ScenarioConfig& config);

// Lloyd's algorithm with k-means++ seeding; empty clusters are re-seeded to
// the farthest point. Deterministic given the seed. Optionally records the
// within-cluster sum of squares after each iteration.
std::vector<int> cluster_bs_kmeans(std::span<const Point> points, int q,
                                   std::uint64_t seed,
                                   std::vector<double>* wcss_trace = nullptr);

// S = R(W/(w*Q)), at least 1.
int subchannel_count(double system_bandwidth_hz, double subchannel_bandwidth_hz, int q);

// Popularity order of `count` items: a seeded weighted shuffle where item i
// carries Zipf weight (i+1)^-exponent. Returned vector lists item indices from
// most to least popular; exponent 0 degenerates to a uniform shuffle.
std::vector<std::size_t> zipf_popularity_order(std::size_t count, double exponent, Rng& rng);

// Greedy popularity-first placement: tasks in descending popularity, each
// cached at the BS nearest its owner IMD that still has capacity.
std::vector<std::uint8_t> place_cache(const std::vector<Task>& tasks,
                                      std::span<const Point> bs_positions,
                                      std::span<const Point> imd_positions,
                                      int tasks_per_imd, int capacity_per_bs,
                                      double zipf_exponent, std::uint64_t seed);

// Versioned plain-text serialization; round-trips bit-exactly.
void save_scenario(const Scenario& sc, std::ostream& os);
Scenario load_scenario(std::istream& is);
void save_scenario_file(const Scenario& sc, const std::string& path);
Scenario load_scenario_file(const std::string& path);

}  // namespace mecsim

#endif
