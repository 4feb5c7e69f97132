#include "mecsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mecsim {

namespace {

constexpr double kBitsPerMb = 8.0 * 1024.0 * 1024.0;  // 1 MB = 2^20 bytes

// Crypto algorithm table: encryption/decryption cycles per bit and energy per
// bit for the six reference algorithms, protection level l.
constexpr double kEncCycles[6] = {100, 200, 250, 300, 350, 1050};
constexpr double kDecCycles[6] = {90, 280, 350, 300, 400, 1700};
constexpr double kEnergyJ[6] = {2.5296e-7, 5.0425e-7, 6.837e-7,
                                7.8528e-7, 8.7073e-7, 26.3643e-7};

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("scenario config field '" + field + "': " + why);
}

void emit_list(std::ostream& os, const std::string& key, const std::vector<double>& v) {
  os << key << " =";
  for (double x : v) os << ' ' << format_double(x);
  os << '\n';
}

}  // namespace

ScenarioConfig::ScenarioConfig() {
  // Two slopes sharing the reference constants: below 300 m the LoS/NLoS mix,
  // beyond it the NLoS branch with certainty (P(LoS) is 0 past the threshold).
  SlopeParams s;
  s.h_los_ref = std::pow(10.0, -10.38);
  s.h_nlos_ref = std::pow(10.0, -14.54);
  s.gamma_los = 2.09;
  s.gamma_nlos = 3.75;
  s.dist_threshold_m = 300.0;
  slopes = {s, s};
}

void ScenarioConfig::validate() const {
  require(region_side_m > 0, "region_side_m", "must be positive");
  require(num_bs >= 1, "N", "must be >= 1");
  require(num_imds >= 1, "K", "must be >= 1");
  require(tasks_per_imd >= 1, "M", "must be >= 1");
  require(num_clusters >= 1, "Q", "must be >= 1");
  require(num_bs >= num_clusters, "Q", "requires N >= Q");
  require(system_bandwidth_hz > 0, "W", "must be positive");
  require(subchannel_bandwidth_hz > 0, "w", "must be positive");
  require(system_bandwidth_hz >= subchannel_bandwidth_hz * num_clusters, "W",
          "requires W >= w*Q");
  require(num_crypto_algos >= 1, "L", "must be >= 1");
  require(backhaul_rate_bps > 0, "r_bh", "must be positive");
  require(bs_max_cycles > 0, "f_mmax", "must be positive");
  require(imd_max_cycles_lo > 0 && imd_max_cycles_lo <= imd_max_cycles_hi,
          "f_lmax_min", "requires 0 < f_lmax_min <= f_lmax_max");
  require(chip_energy_coeff > 0, "alpha", "must be positive");
  require(!slopes.empty(), "slope_thresholds_m", "at least one slope required");
  for (std::size_t j = 0; j < slopes.size(); ++j) {
    const SlopeParams& s = slopes[j];
    require(s.h_los_ref > 0 && s.h_nlos_ref > 0, "slope_h_ls", "references must be positive");
    require(s.gamma_los >= 2.0 && s.gamma_nlos >= 2.0, "slope_gamma_ls",
            "pathloss exponents must be >= 2");
    require(s.dist_threshold_m > 0, "slope_thresholds_m", "thresholds must be positive");
    if (j + 1 < slopes.size()) {
      // Ladder boundaries strictly increase; the last threshold only feeds the
      // LoS probability and may repeat the previous one.
      bool ok = (j + 2 == slopes.size())
                    ? slopes[j + 1].dist_threshold_m >= s.dist_threshold_m
                    : slopes[j + 1].dist_threshold_m > s.dist_threshold_m;
      require(ok, "slope_thresholds_m", "ladder thresholds must increase");
    }
  }
  auto check_range = [](const ValueRange& r, const char* field) {
    require(r.lo > 0 && r.lo <= r.hi, field, "requires 0 < min <= max");
  };
  check_range(d_mb, "d_min_mb");
  check_range(ell_cycles, "ell_min");
  check_range(tau_max_s, "tau_max_min");
  check_range(rho, "rho_min");
  require(rho.lo >= 1, "rho_min", "must be >= 1");
  check_range(theta, "theta_min");
  check_range(lambda_usd, "lambda_min");
  require(cache_capacity_per_bs >= 0, "cache_capacity_per_bs", "must be >= 0");
  require(zipf_exponent >= 0, "zipf_exponent", "must be >= 0");
  require(psi_max_usd >= 0, "psi_max", "must be >= 0");
  bool any_crypto = !crypto_enc_cycles.empty() || !crypto_dec_cycles.empty() ||
                    !crypto_energy_j.empty();
  if (any_crypto) {
    std::size_t l = static_cast<std::size_t>(num_crypto_algos);
    require(crypto_enc_cycles.size() == l && crypto_dec_cycles.size() == l &&
                crypto_energy_j.size() == l,
            "crypto_enc_cycles", "override lists must all have length L");
    for (std::size_t i = 0; i < l; ++i)
      require(crypto_enc_cycles[i] > 0 && crypto_dec_cycles[i] > 0 && crypto_energy_j[i] > 0,
              "crypto_enc_cycles", "entries must be positive");
  } else {
    require(num_crypto_algos <= 6, "L",
            "only 6 built-in crypto algorithms; pass crypto_* lists for more");
  }
}

ScenarioConfig ScenarioConfig::from_config(const KeyValueConfig& kv) {
  ScenarioConfig c;
  c.region_side_m = kv.get_double("region_side_m", c.region_side_m);
  c.num_bs = kv.get_int("N", c.num_bs);
  c.num_imds = kv.get_int("K", c.num_imds);
  c.tasks_per_imd = kv.get_int("M", c.tasks_per_imd);
  c.num_clusters = kv.get_int("Q", c.num_clusters);
  c.system_bandwidth_hz = kv.get_double("W", c.system_bandwidth_hz);
  c.subchannel_bandwidth_hz = kv.get_double("w", c.subchannel_bandwidth_hz);
  c.num_crypto_algos = kv.get_int("L", c.num_crypto_algos);
  c.backhaul_rate_bps = kv.get_double("r_bh", c.backhaul_rate_bps);
  c.bs_max_cycles = kv.get_double("f_mmax", c.bs_max_cycles);
  c.imd_max_cycles_lo = kv.get_double("f_lmax_min", c.imd_max_cycles_lo);
  c.imd_max_cycles_hi = kv.get_double("f_lmax_max", c.imd_max_cycles_hi);
  c.max_power_dbm = kv.get_double("p_max_dbm", c.max_power_dbm);
  c.noise_psd_dbm_hz = kv.get_double("noise_psd_dbm_hz", c.noise_psd_dbm_hz);
  c.chip_energy_coeff = kv.get_double("alpha", c.chip_energy_coeff);
  if (kv.has("slope_thresholds_m")) {
    std::vector<double> thr = kv.get_list("slope_thresholds_m");
    std::vector<double> hls = kv.get_list("slope_h_ls");
    std::vector<double> hnls = kv.get_list("slope_h_nls");
    std::vector<double> gls = kv.get_list("slope_gamma_ls");
    std::vector<double> gnls = kv.get_list("slope_gamma_nls");
    if (hls.size() != thr.size() || hnls.size() != thr.size() ||
        gls.size() != thr.size() || gnls.size() != thr.size())
      throw ConfigError("scenario config field 'slope_thresholds_m': slope lists differ in length");
    c.slopes.clear();
    for (std::size_t j = 0; j < thr.size(); ++j)
      c.slopes.push_back({hls[j], hnls[j], gls[j], gnls[j], thr[j]});
  }
  auto range = [&kv](const char* lo_key, const char* hi_key, ValueRange r) {
    return ValueRange{kv.get_double(lo_key, r.lo), kv.get_double(hi_key, r.hi)};
  };
  c.d_mb = range("d_min_mb", "d_max_mb", c.d_mb);
  c.ell_cycles = range("ell_min", "ell_max", c.ell_cycles);
  c.tau_max_s = range("tau_max_min", "tau_max_max", c.tau_max_s);
  c.rho = range("rho_min", "rho_max", c.rho);
  c.theta = range("theta_min", "theta_max", c.theta);
  c.lambda_usd = range("lambda_min", "lambda_max", c.lambda_usd);
  c.cache_capacity_per_bs = kv.get_int("cache_capacity_per_bs", c.cache_capacity_per_bs);
  c.zipf_exponent = kv.get_double("zipf_exponent", c.zipf_exponent);
  c.psi_max_usd = kv.get_double("psi_max", c.psi_max_usd);
  c.expected_gains = kv.get_bool("expected_gains", c.expected_gains);
  c.seed = kv.get_u64("seed", c.seed);
  if (kv.has("crypto_enc_cycles")) c.crypto_enc_cycles = kv.get_list("crypto_enc_cycles");
  if (kv.has("crypto_dec_cycles")) c.crypto_dec_cycles = kv.get_list("crypto_dec_cycles");
  if (kv.has("crypto_energy_j")) c.crypto_energy_j = kv.get_list("crypto_energy_j");
  return c;
}

void ScenarioConfig::emit(std::ostream& os) const {
  auto d = [&os](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
  auto i = [&os](const char* key, long long v) { os << key << " = " << v << '\n'; };
  d("region_side_m", region_side_m);
  i("N", num_bs);
  i("K", num_imds);
  i("M", tasks_per_imd);
  i("Q", num_clusters);
  d("W", system_bandwidth_hz);
  d("w", subchannel_bandwidth_hz);
  i("L", num_crypto_algos);
  d("r_bh", backhaul_rate_bps);
  d("f_mmax", bs_max_cycles);
  d("f_lmax_min", imd_max_cycles_lo);
  d("f_lmax_max", imd_max_cycles_hi);
  d("p_max_dbm", max_power_dbm);
  d("noise_psd_dbm_hz", noise_psd_dbm_hz);
  d("alpha", chip_energy_coeff);
  std::vector<double> thr, hls, hnls, gls, gnls;
  for (const SlopeParams& s : slopes) {
    thr.push_back(s.dist_threshold_m);
    hls.push_back(s.h_los_ref);
    hnls.push_back(s.h_nlos_ref);
    gls.push_back(s.gamma_los);
    gnls.push_back(s.gamma_nlos);
  }
  emit_list(os, "slope_thresholds_m", thr);
  emit_list(os, "slope_h_ls", hls);
  emit_list(os, "slope_h_nls", hnls);
  emit_list(os, "slope_gamma_ls", gls);
  emit_list(os, "slope_gamma_nls", gnls);
  d("d_min_mb", d_mb.lo);
  d("d_max_mb", d_mb.hi);
  d("ell_min", ell_cycles.lo);
  d("ell_max", ell_cycles.hi);
  d("tau_max_min", tau_max_s.lo);
  d("tau_max_max", tau_max_s.hi);
  d("rho_min", rho.lo);
  d("rho_max", rho.hi);
  d("theta_min", theta.lo);
  d("theta_max", theta.hi);
  d("lambda_min", lambda_usd.lo);
  d("lambda_max", lambda_usd.hi);
  i("cache_capacity_per_bs", cache_capacity_per_bs);
  d("zipf_exponent", zipf_exponent);
  d("psi_max", psi_max_usd);
  os << "expected_gains = " << (expected_gains ? "true" : "false") << '\n';
  os << "seed = " << seed << '\n';
  if (!crypto_enc_cycles.empty()) {
    emit_list(os, "crypto_enc_cycles", crypto_enc_cycles);
    emit_list(os, "crypto_dec_cycles", crypto_dec_cycles);
    emit_list(os, "crypto_energy_j", crypto_energy_j);
  }
}

CryptoProfile default_crypto_profile(int l) {
  if (l < 1 || l > 6)
    throw ConfigError("default_crypto_profile: 1 <= L <= 6 required");
  CryptoProfile c;
  c.enc_cycles_per_bit.assign(kEncCycles, kEncCycles + l);
  c.dec_cycles_per_bit.assign(kDecCycles, kDecCycles + l);
  c.energy_per_bit_j.assign(kEnergyJ, kEnergyJ + l);
  c.rho_dot.resize(l);
  std::iota(c.rho_dot.begin(), c.rho_dot.end(), 1);
  return c;
}

int subchannel_count(double system_bandwidth_hz, double subchannel_bandwidth_hz, int q) {
  long long s = round_half_up(system_bandwidth_hz / (subchannel_bandwidth_hz * q));
  return static_cast<int>(std::max(1ll, s));
}

std::vector<int> cluster_bs_kmeans(std::span<const Point> points, int q,
                                   std::uint64_t seed,
                                   std::vector<double>* wcss_trace) {
  const int n = static_cast<int>(points.size());
  if (q > n) throw ConfigError("cluster_bs_kmeans: Q exceeds the number of points");
  Rng rng(seed);
  if (wcss_trace) wcss_trace->clear();

  // k-means++ seeding.
  std::vector<Point> centers;
  centers.reserve(q);
  centers.push_back(points[rng.index(n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < q) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const Point& c : centers) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      centers.push_back(points[rng.index(n)]);
      continue;
    }
    double r = rng.uniform01() * total;
    int pick = n - 1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += d2[i];
      if (r < acc) {
        pick = i;
        break;
      }
    }
    centers.push_back(points[pick]);
  }

  std::vector<int> assign(n, 0), prev(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    double wcss = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bestd = sq_dist(points[i], centers[0]);
      for (int c = 1; c < q; ++c) {
        double d = sq_dist(points[i], centers[c]);
        if (d < bestd) {
          bestd = d;
          best = c;
        }
      }
      assign[i] = best;
      wcss += bestd;
    }
    if (wcss_trace) wcss_trace->push_back(wcss);
    if (assign == prev) break;
    prev = assign;

    std::vector<Point> sum(q);
    std::vector<int> count(q, 0);
    for (int i = 0; i < n; ++i) {
      sum[assign[i]].x += points[i].x;
      sum[assign[i]].y += points[i].y;
      ++count[assign[i]];
    }
    for (int c = 0; c < q; ++c) {
      if (count[c] > 0) {
        centers[c] = {sum[c].x / count[c], sum[c].y / count[c]};
      } else {
        // Re-seed an empty cluster to the point farthest from its center.
        int far = 0;
        double fard = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = sq_dist(points[i], centers[assign[i]]);
          if (d > fard) {
            fard = d;
            far = i;
          }
        }
        centers[c] = points[far];
      }
    }
  }
  return assign;
}

std::vector<std::size_t> zipf_popularity_order(std::size_t count, double exponent, Rng& rng) {
  // Weighted shuffle (Efraimidis-Spirakis): item i keeps key u^(1/w_i) with
  // w_i = (i+1)^-exponent; sorting by key descending realizes the draw.
  std::vector<double> key(count);
  for (std::size_t i = 0; i < count; ++i) {
    double u = rng.uniform01();
    key[i] = std::pow(u, std::pow(static_cast<double>(i + 1), exponent));
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&key](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return order;
}

std::vector<std::uint8_t> place_cache(const std::vector<Task>& tasks,
                                      std::span<const Point> bs_positions,
                                      std::span<const Point> imd_positions,
                                      int tasks_per_imd, int capacity_per_bs,
                                      double zipf_exponent, std::uint64_t seed) {
  const int n_bs = static_cast<int>(bs_positions.size());
  const int n_imd = static_cast<int>(imd_positions.size());
  const int m = tasks_per_imd;
  std::vector<std::uint8_t> cache(static_cast<std::size_t>(n_bs) * n_imd * m, 0);
  if (capacity_per_bs <= 0) return cache;

  Rng rng(seed);
  std::vector<std::size_t> order = zipf_popularity_order(tasks.size(), zipf_exponent, rng);
  std::vector<int> used(n_bs, 0);

  // BS indices sorted by distance, per IMD.
  std::vector<std::vector<int>> nearest(n_imd);
  for (int k = 0; k < n_imd; ++k) {
    nearest[k].resize(n_bs);
    std::iota(nearest[k].begin(), nearest[k].end(), 0);
    std::stable_sort(nearest[k].begin(), nearest[k].end(), [&](int a, int b) {
      return sq_dist(bs_positions[a], imd_positions[k]) <
             sq_dist(bs_positions[b], imd_positions[k]);
    });
  }

  for (std::size_t idx : order) {
    int k = static_cast<int>(idx) / m;
    int mm = static_cast<int>(idx) % m;
    for (int bs : nearest[k]) {
      if (used[bs] < capacity_per_bs) {
        cache[(static_cast<std::size_t>(bs) * n_imd + k) * m + mm] = 1;
        ++used[bs];
        break;
      }
    }
  }
  return cache;
}

Scenario generate_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario sc;
  sc.config = config;
  const int n = config.num_bs, k = config.num_imds, m = config.tasks_per_imd;

  Rng bs_rng = Rng::stream(config.seed, "scenario/bs");
  sc.bs_positions.resize(n);
  for (Point& p : sc.bs_positions)
    p = {bs_rng.uniform(0, config.region_side_m), bs_rng.uniform(0, config.region_side_m)};

  Rng imd_rng = Rng::stream(config.seed, "scenario/imd");
  sc.imd_positions.resize(k);
  for (Point& p : sc.imd_positions)
    p = {imd_rng.uniform(0, config.region_side_m), imd_rng.uniform(0, config.region_side_m)};

  sc.cluster_of_bs = cluster_bs_kmeans(sc.bs_positions, config.num_clusters,
                                       Rng::derive_seed(config.seed, "scenario/kmeans"));
  sc.num_subchannels = subchannel_count(config.system_bandwidth_hz,
                                        config.subchannel_bandwidth_hz, config.num_clusters);

  Rng task_rng = Rng::stream(config.seed, "scenario/tasks");
  sc.tasks.resize(static_cast<std::size_t>(k) * m);
  for (Task& t : sc.tasks) {
    t.d_bits = task_rng.uniform(config.d_mb.lo, config.d_mb.hi) * kBitsPerMb;
    t.ell_cycles = task_rng.uniform(config.ell_cycles.lo, config.ell_cycles.hi);
    t.tau_max_s = task_rng.uniform(config.tau_max_s.lo, config.tau_max_s.hi);
    t.rho = task_rng.uniform_int(static_cast<int>(config.rho.lo),
                                 static_cast<int>(config.rho.hi));
    t.theta = task_rng.uniform(config.theta.lo, config.theta.hi);
    t.lambda_usd = task_rng.uniform(config.lambda_usd.lo, config.lambda_usd.hi);
  }

  Rng flmax_rng = Rng::stream(config.seed, "scenario/flmax");
  sc.imd_f_lmax.resize(k);
  for (double& f : sc.imd_f_lmax)
    f = flmax_rng.uniform(config.imd_max_cycles_lo, config.imd_max_cycles_hi);

  sc.cache = place_cache(sc.tasks, sc.bs_positions, sc.imd_positions, m,
                         config.cache_capacity_per_bs, config.zipf_exponent,
                         Rng::derive_seed(config.seed, "scenario/cache"));

  if (!config.crypto_enc_cycles.empty()) {
    sc.crypto.enc_cycles_per_bit = config.crypto_enc_cycles;
    sc.crypto.dec_cycles_per_bit = config.crypto_dec_cycles;
    sc.crypto.energy_per_bit_j = config.crypto_energy_j;
    sc.crypto.rho_dot.resize(config.num_crypto_algos);
    std::iota(sc.crypto.rho_dot.begin(), sc.crypto.rho_dot.end(), 1);
  } else {
    sc.crypto = default_crypto_profile(config.num_crypto_algos);
  }

  Rng ch_rng = Rng::stream(config.seed, "scenario/channel");
  sc.links.resize(static_cast<std::size_t>(n) * k);
  for (int nn = 0; nn < n; ++nn) {
    for (int kk = 0; kk < k; ++kk) {
      double d_m = dist(sc.bs_positions[nn], sc.imd_positions[kk]);
      LinkState& link = sc.links[nn * k + kk];
      if (config.expected_gains) {
        link.distance_m = d_m;
        link.slope = active_slope(d_m, config.slopes);
        link.gain = expected_gain(d_m, config.slopes);
      } else {
        link = draw_link(d_m, config.slopes, ch_rng);
      }
    }
  }

  sc.p_max_w = config.max_power_w();
  sc.noise_power_w = config.noise_psd_w_hz() * config.subchannel_bandwidth_hz;
  return sc;
}

void save_scenario(const Scenario& sc, std::ostream& os) {
  os << "mecsim_scenario_v1\n";
  os << "config_begin\n";
  sc.config.emit(os);
  os << "config_end\n";
  os << "S " << sc.num_subchannels << '\n';
  for (int n = 0; n < sc.N(); ++n)
    os << "bs " << format_double(sc.bs_positions[n].x) << ' '
       << format_double(sc.bs_positions[n].y) << ' ' << sc.cluster_of_bs[n] << '\n';
  for (int k = 0; k < sc.K(); ++k)
    os << "imd " << format_double(sc.imd_positions[k].x) << ' '
       << format_double(sc.imd_positions[k].y) << ' '
       << format_double(sc.imd_f_lmax[k]) << '\n';
  for (const Task& t : sc.tasks)
    os << "task " << format_double(t.d_bits) << ' ' << format_double(t.ell_cycles) << ' '
       << format_double(t.tau_max_s) << ' ' << t.rho << ' ' << format_double(t.theta)
       << ' ' << format_double(t.lambda_usd) << '\n';
  for (int l = 0; l < sc.L(); ++l)
    os << "crypto " << sc.crypto.rho_dot[l] << ' '
       << format_double(sc.crypto.enc_cycles_per_bit[l]) << ' '
       << format_double(sc.crypto.dec_cycles_per_bit[l]) << ' '
       << format_double(sc.crypto.energy_per_bit_j[l]) << '\n';
  for (int n = 0; n < sc.N(); ++n)
    for (int k = 0; k < sc.K(); ++k)
      for (int m = 0; m < sc.M(); ++m)
        if (sc.cached(n, k, m)) os << "cache " << n << ' ' << k << ' ' << m << '\n';
  for (const LinkState& l : sc.links)
    os << "link " << format_double(l.distance_m) << ' ' << l.slope << ' ' << l.los_mask
       << ' ' << format_double(l.gain) << '\n';
  os << "end\n";
}

Scenario load_scenario(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "mecsim_scenario_v1")
    throw ConfigError("scenario file: bad or missing version header");
  if (!std::getline(is, line) || line != "config_begin")
    throw ConfigError("scenario file: expected config_begin");
  std::ostringstream cfg_text;
  while (std::getline(is, line) && line != "config_end") cfg_text << line << '\n';
  if (line != "config_end") throw ConfigError("scenario file: missing config_end");

  Scenario sc;
  sc.config = ScenarioConfig::from_config(KeyValueConfig::from_string(cfg_text.str()));
  sc.config.validate();
  const int n = sc.N(), k = sc.K(), m = sc.M();
  sc.cache.assign(static_cast<std::size_t>(n) * k * m, 0);

  while (std::getline(is, line)) {
    if (line == "end") break;
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;
    auto num = [&tok](std::size_t i) { return std::strtod(tok.at(i).c_str(), nullptr); };
    if (tok[0] == "S") {
      sc.num_subchannels = static_cast<int>(num(1));
    } else if (tok[0] == "bs") {
      sc.bs_positions.push_back({num(1), num(2)});
      sc.cluster_of_bs.push_back(static_cast<int>(num(3)));
    } else if (tok[0] == "imd") {
      sc.imd_positions.push_back({num(1), num(2)});
      sc.imd_f_lmax.push_back(num(3));
    } else if (tok[0] == "task") {
      sc.tasks.push_back({num(1), num(2), num(3), static_cast<int>(num(4)), num(5), num(6)});
    } else if (tok[0] == "crypto") {
      sc.crypto.rho_dot.push_back(static_cast<int>(num(1)));
      sc.crypto.enc_cycles_per_bit.push_back(num(2));
      sc.crypto.dec_cycles_per_bit.push_back(num(3));
      sc.crypto.energy_per_bit_j.push_back(num(4));
    } else if (tok[0] == "cache") {
      int cn = static_cast<int>(num(1)), ck = static_cast<int>(num(2)),
          cm = static_cast<int>(num(3));
      sc.cache.at((static_cast<std::size_t>(cn) * k + ck) * m + cm) = 1;
    } else if (tok[0] == "link") {
      LinkState l;
      l.distance_m = num(1);
      l.slope = static_cast<int>(num(2));
      l.los_mask = static_cast<std::uint32_t>(num(3));
      l.gain = num(4);
      sc.links.push_back(l);
    } else {
      throw ConfigError("scenario file: unknown record '" + tok[0] + "'");
    }
  }
  if (static_cast<int>(sc.bs_positions.size()) != n ||
      static_cast<int>(sc.imd_positions.size()) != k ||
      static_cast<int>(sc.tasks.size()) != k * m ||
      static_cast<int>(sc.links.size()) != n * k || sc.crypto.size() != sc.config.num_crypto_algos)
    throw ConfigError("scenario file: record counts do not match the config");
  sc.p_max_w = sc.config.max_power_w();
  sc.noise_power_w = sc.config.noise_psd_w_hz() * sc.config.subchannel_bandwidth_hz;
  return sc;
}

void save_scenario_file(const Scenario& sc, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write scenario file: " + path);
  save_scenario(sc, f);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read scenario file: " + path);
  return load_scenario(f);
}

}  // namespace mecsim
