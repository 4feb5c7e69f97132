#include "mecsim/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mecsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("solver config field '" + field + "': " + why);
}

int argmax_fitness(std::span<const Individual> pop) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(pop.size()); ++i)
    if (pop[i].fitness > pop[best].fitness) best = i;
  return best;
}

int argmin_fitness(std::span<const Individual> pop) {
  int worst = 0;
  for (int i = 1; i < static_cast<int>(pop.size()); ++i)
    if (pop[i].fitness < pop[worst].fitness) worst = i;
  return worst;
}

// Evaluates every individual; one Evaluator per worker keeps scratch separate.
void evaluate_population(std::vector<Individual>& pop, std::vector<Evaluator>& evals,
                         SolverStats& stats) {
  ++stats.eval_passes;
  stats.evaluations += static_cast<long long>(pop.size());
  const int n = static_cast<int>(pop.size());
  const int workers = std::min<int>(static_cast<int>(evals.size()), n);
  if (workers <= 1) {
    for (Individual& ind : pop) ind.fitness = evals[0].fitness(ind.genes);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&pop, &evals, w, workers, n]() {
      for (int i = w; i < n; i += workers) pop[i].fitness = evals[w].fitness(pop[i].genes);
    });
  }
  for (std::thread& t : threads) t.join();
}

std::vector<Evaluator> make_evaluators(const Scenario& sc, const PenaltyConfig& pen,
                                       int threads) {
  std::vector<Evaluator> evals;
  evals.reserve(std::max(1, threads));
  for (int i = 0; i < std::max(1, threads); ++i) evals.emplace_back(sc, pen);
  return evals;
}

// Replaces the worst individual with `best` unless an identical genome is
// already present. Returns the index holding it.
int ensure_member(std::vector<Individual>& pop, const Individual& best) {
  for (int i = 0; i < static_cast<int>(pop.size()); ++i)
    if (pop[i].genes == best.genes) return i;
  int worst = argmin_fitness(pop);
  pop[worst] = best;
  return worst;
}

double segment_distance(std::span<const int> a, std::span<const int> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return s;
}

double segment_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

void SolverConfig::validate() const {
  require(population >= 2, "solver.I", "must be >= 2");
  require(population % 2 == 0, "solver.I", "must be even for pairwise crossover");
  require(t1 >= 1, "solver.T1", "must be >= 1");
  require(t2 >= 0, "solver.T2", "must be >= 0");
  require(hbar6 > 0, "solver.hbar6", "must be positive");
  require(mu1 <= mu2, "solver.mu1", "requires mu1 <= mu2");
  require(mu4 >= 1 && mu5 >= 1, "solver.mu4", "thresholds must be >= 1");
  require(omega_max >= omega_min, "solver.omega_max", "requires omega_max >= omega_min");
  require(elimination_start_fraction >= 0 && elimination_start_fraction <= 1,
          "solver.elimination_start_fraction", "must lie in [0,1]");
  require(threads >= 1, "solver.threads", "must be >= 1");
  require(penalties.eta > 0 && penalties.eta_tilde > 0, "solver.eta", "penalties must be positive");
}

SolverConfig SolverConfig::from_config(const KeyValueConfig& kv) {
  SolverConfig c;
  c.population = kv.get_int("solver.I", c.population);
  c.t1 = kv.get_int("solver.T1", c.t1);
  c.t2 = kv.get_int("solver.T2", c.t2);
  c.hbar1 = kv.get_double("solver.hbar1", c.hbar1);
  c.hbar2 = kv.get_double("solver.hbar2", c.hbar2);
  c.hbar3 = kv.get_double("solver.hbar3", c.hbar3);
  c.hbar4 = kv.get_double("solver.hbar4", c.hbar4);
  c.hbar5 = kv.get_double("solver.hbar5", c.hbar5);
  c.hbar6 = kv.get_double("solver.hbar6", c.hbar6);
  c.hbar7 = kv.get_double("solver.hbar7", c.hbar7);
  c.hbar8 = kv.get_double("solver.hbar8", c.hbar8);
  c.hbar9 = kv.get_double("solver.hbar9", c.hbar9);
  c.mu1 = kv.get_double("solver.mu1", c.mu1);
  c.mu2 = kv.get_double("solver.mu2", c.mu2);
  c.mu3 = kv.get_double("solver.mu3", c.mu3);
  c.mu4 = kv.get_int("solver.mu4", c.mu4);
  c.mu5 = kv.get_int("solver.mu5", c.mu5);
  c.kappa3 = kv.get_double("solver.kappa3", c.kappa3);
  c.kappa4 = kv.get_double("solver.kappa4", c.kappa4);
  c.kappa5 = kv.get_double("solver.kappa5", c.kappa5);
  c.omega_max = kv.get_double("solver.omega_max", c.omega_max);
  c.omega_min = kv.get_double("solver.omega_min", c.omega_min);
  c.omega_dot0 = kv.get_double("solver.omega_dot0", c.omega_dot0);
  c.elimination_start_fraction =
      kv.get_double("solver.elimination_start_fraction", c.elimination_start_fraction);
  c.adaptive_probs = kv.get_bool("solver.adaptive_probs", c.adaptive_probs);
  c.elimination = kv.get_bool("solver.elimination", c.elimination);
  c.gcpso = kv.get_bool("solver.gcpso", c.gcpso);
  c.mirrored_crossover = kv.get_bool("solver.mirrored_crossover", c.mirrored_crossover);
  c.literal_inertia_recurrence =
      kv.get_bool("solver.literal_eq39", c.literal_inertia_recurrence);
  c.linear_hbar4 = kv.get_double("solver.linear_hbar4", c.linear_hbar4);
  c.linear_hbar5 = kv.get_double("solver.linear_hbar5", c.linear_hbar5);
  c.threads = kv.get_int("solver.threads", c.threads);
  c.penalties.eta = kv.get_double("solver.eta", c.penalties.eta);
  c.penalties.eta_tilde = kv.get_double("solver.eta_tilde", c.penalties.eta_tilde);
  return c;
}

GeneBounds GeneBounds::of(const Scenario& sc) {
  GeneBounds b;
  b.num_bs = sc.N();
  b.num_subchannels = sc.S();
  b.num_algos = sc.L();
  b.num_imds = sc.K();
  b.tasks_per_imd = sc.M();
  b.f_max = sc.imd_f_lmax;
  b.p_max = sc.p_max_w;
  return b;
}

Assignment random_assignment(const GeneBounds& b, Rng& rng) {
  Assignment a;
  a.tasks_per_imd = b.tasks_per_imd;
  const int k = b.num_imds, km = b.genes_per_virtual();
  a.x.resize(k);
  a.z.resize(k);
  a.u.resize(km);
  a.v.resize(km);
  a.f_loc.resize(k);
  a.p.resize(k);
  for (int i = 0; i < k; ++i) a.x[i] = rng.uniform_int(1, b.num_bs);
  for (int i = 0; i < k; ++i) a.z[i] = rng.uniform_int(1, b.num_subchannels);
  for (int i = 0; i < km; ++i) a.u[i] = rng.uniform_int(0, b.num_bs);
  for (int i = 0; i < km; ++i) a.v[i] = rng.uniform_int(1, b.num_algos);
  for (int i = 0; i < k; ++i) a.f_loc[i] = std::max(kVarTheta, rng.uniform(0.0, b.f_max[i]));
  for (int i = 0; i < k; ++i) a.p[i] = std::max(kVarTheta, rng.uniform(0.0, b.p_max));
  return a;
}

std::vector<Individual> init_population(const Scenario& sc, const SolverConfig& cfg,
                                        Rng& rng) {
  const GeneBounds b = GeneBounds::of(sc);
  Evaluator eval(sc, cfg.penalties);
  std::vector<Individual> pop(cfg.population);
  for (Individual& ind : pop) ind.genes = random_assignment(b, rng);
  for (Individual& ind : pop) ind.fitness = eval.fitness(ind.genes);
  return pop;
}

std::vector<Individual> tournament_select_elitist(std::span<const Individual> pop,
                                                  const Individual& hist_best,
                                                  Rng& rng, int* protected_idx) {
  const int n = static_cast<int>(pop.size());
  std::vector<Individual> next;
  next.reserve(n);
  for (int i = 0; i < n; ++i) {
    int a = static_cast<int>(rng.index(n));
    int b = static_cast<int>(rng.index(n));
    next.push_back(pop[a].fitness >= pop[b].fitness ? pop[a] : pop[b]);
  }
  int where = ensure_member(next, hist_best);
  if (protected_idx) *protected_idx = where;
  return next;
}

double crossover_probability(double g_pair_max, double g_ave, double g_max,
                             const SolverConfig& cfg) {
  if (!(g_pair_max >= g_ave)) return clamp01(cfg.hbar1);
  double ratio = 1.0;  // degenerate population: G_max == G_ave
  if (g_max > g_ave) {
    ratio = (g_pair_max - g_ave) / (g_max - g_ave);
    if (!std::isfinite(ratio)) ratio = 1.0;
  }
  double base = cfg.mirrored_crossover ? cfg.hbar2 : cfg.hbar1;
  return clamp01(base + (cfg.hbar1 - cfg.hbar2) / (1.0 + std::exp(cfg.hbar3 * ratio)));
}

double linear_crossover_probability(double g_pair_max, double g_ave, double g_max,
                                    const SolverConfig& cfg) {
  if (!(g_pair_max >= g_ave)) return clamp01(cfg.hbar1);
  if (!(g_max > g_ave)) return clamp01(cfg.hbar1);
  double frac = (g_max - g_pair_max) / (g_max - g_ave);
  if (!std::isfinite(frac)) return clamp01(cfg.hbar1);
  return clamp01(cfg.hbar2 + (cfg.hbar1 - cfg.hbar2) * frac);
}

void crossover_pair(Assignment& a, Assignment& b, const std::array<int, 6>& cuts) {
  auto swap_tail = [](auto& va, auto& vb, int cut) {
    for (std::size_t i = cut; i < va.size(); ++i) std::swap(va[i], vb[i]);
  };
  swap_tail(a.x, b.x, cuts[0]);
  swap_tail(a.z, b.z, cuts[1]);
  swap_tail(a.u, b.u, cuts[2]);
  swap_tail(a.v, b.v, cuts[3]);
  swap_tail(a.f_loc, b.f_loc, cuts[4]);
  swap_tail(a.p, b.p, cuts[5]);
}

void crossover(Individual& a, Individual& b, double probability, Rng& rng) {
  if (!(rng.uniform01() < probability)) return;
  std::array<int, 6> cuts;
  cuts[0] = static_cast<int>(rng.index(a.genes.x.size()));
  cuts[1] = static_cast<int>(rng.index(a.genes.z.size()));
  cuts[2] = static_cast<int>(rng.index(a.genes.u.size()));
  cuts[3] = static_cast<int>(rng.index(a.genes.v.size()));
  cuts[4] = static_cast<int>(rng.index(a.genes.f_loc.size()));
  cuts[5] = static_cast<int>(rng.index(a.genes.p.size()));
  crossover_pair(a.genes, b.genes, cuts);
}

double mutation_probability(int t, int t1, const SolverConfig& cfg) {
  double raw = cfg.hbar4 + cfg.hbar5 / (1.0 + std::log(cfg.hbar6 * (t1 - t + 1)));
  return clamp01(raw);
}

double linear_mutation_probability(int t, int t1, const SolverConfig& cfg) {
  return clamp01(cfg.linear_hbar4 + (static_cast<double>(t) / t1) * cfg.linear_hbar5);
}

int mutate_toward_upper(int value, int domain_hi, double k1) {
  return static_cast<int>(round_half_up(k1 * domain_hi + (1.0 - k1) * value));
}

int mutate_toward_lower(int value, int domain_lo, double k1) {
  return static_cast<int>(round_half_up(k1 * domain_lo + (1.0 - k1) * value));
}

int mutate_toward_zero(int value, double k1) {
  return static_cast<int>(round_half_up((1.0 - k1) * value));
}

void mutate_assignment(Assignment& a, double probability, const GeneBounds& b, Rng& rng) {
  auto maybe = [&rng, probability](auto&& apply) {
    if (rng.uniform01() < probability) {
      double k1 = rng.uniform01();
      double k2 = rng.uniform01();
      apply(k1, k2 > 0.5);
    }
  };
  for (int i = 0; i < b.num_imds; ++i)
    maybe([&](double k1, bool up) {
      a.x[i] = std::clamp(up ? mutate_toward_upper(a.x[i], b.num_bs, k1)
                             : mutate_toward_lower(a.x[i], 1, k1),
                          1, b.num_bs);
    });
  for (int i = 0; i < b.num_imds; ++i)
    maybe([&](double k1, bool up) {
      a.z[i] = std::clamp(up ? mutate_toward_upper(a.z[i], b.num_subchannels, k1)
                             : mutate_toward_lower(a.z[i], 1, k1),
                          1, b.num_subchannels);
    });
  for (int i = 0; i < b.genes_per_virtual(); ++i)
    maybe([&](double k1, bool up) {
      a.u[i] = std::clamp(up ? mutate_toward_upper(a.u[i], b.num_bs, k1)
                             : mutate_toward_zero(a.u[i], k1),
                          0, b.num_bs);
    });
  for (int i = 0; i < b.genes_per_virtual(); ++i)
    maybe([&](double k1, bool up) {
      a.v[i] = std::clamp(up ? mutate_toward_upper(a.v[i], b.num_algos, k1)
                             : mutate_toward_lower(a.v[i], 1, k1),
                          1, b.num_algos);
    });
  for (int i = 0; i < b.num_imds; ++i)
    maybe([&](double k1, bool up) {
      double target = up ? b.f_max[i] : kVarTheta;
      a.f_loc[i] = std::clamp(k1 * target + (1.0 - k1) * a.f_loc[i], kVarTheta, b.f_max[i]);
    });
  for (int i = 0; i < b.num_imds; ++i)
    maybe([&](double k1, bool up) {
      double target = up ? b.p_max : kVarTheta;
      a.p[i] = std::clamp(k1 * target + (1.0 - k1) * a.p[i], kVarTheta, b.p_max);
    });
}

DiversityState diversity_state(std::span<const Individual> pop, const GeneBounds& b) {
  DiversityState st;
  const int n = static_cast<int>(pop.size());
  const int k = b.num_imds, km = b.genes_per_virtual();
  st.centroid_x.assign(k, 0);
  st.centroid_z.assign(k, 0);
  st.centroid_u.assign(km, 0);
  st.centroid_v.assign(km, 0);
  st.centroid_f.assign(k, 0);
  st.centroid_p.assign(k, 0);
  if (n == 0) return st;
  for (const Individual& ind : pop) {
    for (int i = 0; i < k; ++i) {
      st.centroid_x[i] += ind.genes.x[i];
      st.centroid_z[i] += ind.genes.z[i];
      st.centroid_f[i] += ind.genes.f_loc[i];
      st.centroid_p[i] += ind.genes.p[i];
    }
    for (int i = 0; i < km; ++i) {
      st.centroid_u[i] += ind.genes.u[i];
      st.centroid_v[i] += ind.genes.v[i];
    }
  }
  for (double* v : {&st.centroid_x[0], &st.centroid_z[0], &st.centroid_f[0], &st.centroid_p[0]})
    for (int i = 0; i < k; ++i) v[i] /= n;
  for (double* v : {&st.centroid_u[0], &st.centroid_v[0]})
    for (int i = 0; i < km; ++i) v[i] /= n;

  double f_diag = 0.0;
  for (double fm : b.f_max) f_diag += (fm - kVarTheta) * (fm - kVarTheta);
  st.diagonals = {
      (b.num_bs - 1) * std::sqrt(static_cast<double>(k)),
      (b.num_subchannels - 1) * std::sqrt(static_cast<double>(k)),
      static_cast<double>(b.num_bs) * std::sqrt(static_cast<double>(km)),
      (b.num_algos - 1) * std::sqrt(static_cast<double>(km)),
      std::sqrt(f_diag),
      (b.p_max - kVarTheta) * std::sqrt(static_cast<double>(k)),
  };

  auto mean_dist = [n](auto&& dist_of) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += dist_of(i);
    return s / n;
  };
  std::array<double, 6> spread{};
  spread[0] = mean_dist([&](int i) {
    double s = 0;
    for (int g = 0; g < k; ++g) {
      double d = pop[i].genes.x[g] - st.centroid_x[g];
      s += d * d;
    }
    return std::sqrt(s);
  });
  spread[1] = mean_dist([&](int i) {
    double s = 0;
    for (int g = 0; g < k; ++g) {
      double d = pop[i].genes.z[g] - st.centroid_z[g];
      s += d * d;
    }
    return std::sqrt(s);
  });
  spread[2] = mean_dist([&](int i) {
    double s = 0;
    for (int g = 0; g < km; ++g) {
      double d = pop[i].genes.u[g] - st.centroid_u[g];
      s += d * d;
    }
    return std::sqrt(s);
  });
  spread[3] = mean_dist([&](int i) {
    double s = 0;
    for (int g = 0; g < km; ++g) {
      double d = pop[i].genes.v[g] - st.centroid_v[g];
      s += d * d;
    }
    return std::sqrt(s);
  });
  spread[4] = mean_dist([&](int i) {
    double s = 0;
    for (int g = 0; g < k; ++g) {
      double d = pop[i].genes.f_loc[g] - st.centroid_f[g];
      s += d * d;
    }
    return std::sqrt(s);
  });
  spread[5] = mean_dist([&](int i) {
    double s = 0;
    for (int g = 0; g < k; ++g) {
      double d = pop[i].genes.p[g] - st.centroid_p[g];
      s += d * d;
    }
    return std::sqrt(s);
  });

  double total = 0.0;
  for (int seg = 0; seg < 6; ++seg)
    if (st.diagonals[seg] > 0) total += spread[seg] / st.diagonals[seg];
  st.varsigma = total / 6.0;
  return st;
}

double diversity(std::span<const Individual> pop, const GeneBounds& b) {
  return diversity_state(pop, b).varsigma;
}

double diversity_mutation_probability(double varsigma, const SolverConfig& cfg) {
  if (varsigma < cfg.mu1) return clamp01(cfg.hbar7);
  if (varsigma < cfg.mu2) return clamp01(cfg.hbar8);
  return clamp01(cfg.hbar9);
}

double similarity(const Assignment& a, const Assignment& b) {
  double s = segment_distance(std::span<const int>(a.x), std::span<const int>(b.x)) +
             segment_distance(std::span<const int>(a.z), std::span<const int>(b.z)) +
             segment_distance(std::span<const int>(a.u), std::span<const int>(b.u)) +
             segment_distance(std::span<const int>(a.v), std::span<const int>(b.v)) +
             segment_distance(std::span<const double>(a.f_loc), std::span<const double>(b.f_loc)) +
             segment_distance(std::span<const double>(a.p), std::span<const double>(b.p));
  return 1.0 / (1.0 + std::sqrt(s));
}

int eliminate_similar(std::vector<Individual>& pop, double mu3, int protected_idx,
                      const GeneBounds& b, Rng& rng, SolverStats& stats) {
  const int n = static_cast<int>(pop.size());
  std::vector<char> replaced(n, 0);
  for (int i = 0; i < n; ++i) {
    if (replaced[i]) continue;
    for (int j = i + 1; j < n; ++j) {
      if (replaced[i]) break;
      if (replaced[j]) continue;
      ++stats.similarity_checks;
      if (similarity(pop[i].genes, pop[j].genes) > mu3) {
        int target = pop[i].fitness < pop[j].fitness ? i : j;
        if (target == protected_idx) continue;
        replaced[target] = 1;
      }
    }
  }
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (!replaced[i]) continue;
    pop[i].genes = random_assignment(b, rng);
    pop[i].fitness = -kInf;  // stale until the next evaluation sweep
    ++count;
  }
  return count;
}

double update_inertia(int t, int t2, const SolverConfig& cfg) {
  if (t2 <= 0) return cfg.omega_max;
  double w = cfg.omega_max - t * (cfg.omega_max - cfg.omega_min) / t2;
  return std::max(w, cfg.omega_min);
}

void update_common_particle(Assignment& pos, Velocity& vel, const Assignment& pbest,
                            const Assignment& gbest, double omega,
                            const SolverConfig& cfg, const GeneBounds& b, Rng& rng) {
  const int k = b.num_imds, km = b.genes_per_virtual();
  // One (xi, zeta) pair per IMD is shared by the x/z/f/p segments; the
  // virtual-IMD segments u/v share their own pair.
  std::vector<double> xi(k), zeta(k), xi_bar(km), zeta_bar(km);
  for (int i = 0; i < k; ++i) {
    xi[i] = rng.uniform01();
    zeta[i] = rng.uniform01();
  }
  for (int i = 0; i < km; ++i) {
    xi_bar[i] = rng.uniform01();
    zeta_bar[i] = rng.uniform01();
  }
  auto step = [&](double& v, double cur, double pb, double gb, double xi_i, double zeta_i) {
    v = omega * v + cfg.kappa3 * xi_i * (pb - cur) + cfg.kappa4 * zeta_i * (gb - cur);
    return cur + v;
  };
  for (int i = 0; i < k; ++i) {
    pos.x[i] = std::clamp(static_cast<int>(round_half_up(
                              step(vel.x[i], pos.x[i], pbest.x[i], gbest.x[i], xi[i], zeta[i]))),
                          1, b.num_bs);
    pos.z[i] = std::clamp(static_cast<int>(round_half_up(
                              step(vel.z[i], pos.z[i], pbest.z[i], gbest.z[i], xi[i], zeta[i]))),
                          1, b.num_subchannels);
    pos.f_loc[i] = std::clamp(
        step(vel.f[i], pos.f_loc[i], pbest.f_loc[i], gbest.f_loc[i], xi[i], zeta[i]),
        kVarTheta, b.f_max[i]);
    pos.p[i] = std::clamp(step(vel.p[i], pos.p[i], pbest.p[i], gbest.p[i], xi[i], zeta[i]),
                          kVarTheta, b.p_max);
  }
  for (int i = 0; i < km; ++i) {
    pos.u[i] = std::clamp(
        static_cast<int>(round_half_up(
            step(vel.u[i], pos.u[i], pbest.u[i], gbest.u[i], xi_bar[i], zeta_bar[i]))),
        0, b.num_bs);
    pos.v[i] = std::clamp(
        static_cast<int>(round_half_up(
            step(vel.v[i], pos.v[i], pbest.v[i], gbest.v[i], xi_bar[i], zeta_bar[i]))),
        1, b.num_algos);
  }
}

void update_global_best_particle(Assignment& pos, Velocity& vel, const Assignment& gbest,
                                 double omega_dot, const SolverConfig& cfg,
                                 const GeneBounds& b, Rng& rng) {
  const int k = b.num_imds, km = b.genes_per_virtual();
  std::vector<double> a(k), a_bar(km);
  for (int i = 0; i < k; ++i) a[i] = rng.uniform01();
  for (int i = 0; i < km; ++i) a_bar[i] = rng.uniform01();
  // The new position is the perturbed global best itself; the velocity is the
  // displacement that lands there from the current position.
  auto step = [&](double& v, double cur, double gb, double a_i) {
    double term = gb + cfg.kappa5 * v + omega_dot * (1.0 - 2.0 * a_i);
    v = term - cur;
    return term;
  };
  for (int i = 0; i < k; ++i) {
    pos.x[i] = std::clamp(
        static_cast<int>(round_half_up(step(vel.x[i], pos.x[i], gbest.x[i], a[i]))), 1,
        b.num_bs);
    pos.z[i] = std::clamp(
        static_cast<int>(round_half_up(step(vel.z[i], pos.z[i], gbest.z[i], a[i]))), 1,
        b.num_subchannels);
    pos.f_loc[i] =
        std::clamp(step(vel.f[i], pos.f_loc[i], gbest.f_loc[i], a[i]), kVarTheta, b.f_max[i]);
    pos.p[i] = std::clamp(step(vel.p[i], pos.p[i], gbest.p[i], a[i]), kVarTheta, b.p_max);
  }
  for (int i = 0; i < km; ++i) {
    pos.u[i] = std::clamp(
        static_cast<int>(round_half_up(step(vel.u[i], pos.u[i], gbest.u[i], a_bar[i]))), 0,
        b.num_bs);
    pos.v[i] = std::clamp(
        static_cast<int>(round_half_up(step(vel.v[i], pos.v[i], gbest.v[i], a_bar[i]))), 1,
        b.num_algos);
  }
}

double update_scaling(double omega_dot, int success_run, int failure_run,
                      const SolverConfig& cfg) {
  if (success_run > cfg.mu4) return 2.0 * omega_dot;
  if (failure_run > cfg.mu5) return 0.5 * omega_dot;
  return omega_dot;
}

SolveResult run_iadgga(const Scenario& sc, const SolverConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const GeneBounds b = GeneBounds::of(sc);
  Rng init_rng = Rng::stream(seed, "ga/init");
  Rng select_rng = Rng::stream(seed, "ga/select");
  Rng divmut_rng = Rng::stream(seed, "ga/divmut");
  Rng xover_rng = Rng::stream(seed, "ga/crossover");
  Rng mut_rng = Rng::stream(seed, "ga/mutation");
  Rng elim_rng = Rng::stream(seed, "ga/elimination");

  SolveResult res;
  std::vector<Evaluator> evals = make_evaluators(sc, cfg.penalties, cfg.threads);

  std::vector<Individual> pop(cfg.population);
  for (Individual& ind : pop) ind.genes = random_assignment(b, init_rng);
  evaluate_population(pop, evals, res.stats);
  Individual hist = pop[argmax_fitness(pop)];

  res.trace.reserve(cfg.t1);
  for (int t = 1; t <= cfg.t1; ++t) {
    int protected_idx = -1;
    pop = tournament_select_elitist(pop, hist, select_rng, &protected_idx);

    double pdiv = diversity_mutation_probability(diversity(pop, b), cfg);
    for (Individual& ind : pop) mutate_assignment(ind.genes, pdiv, b, divmut_rng);
    evaluate_population(pop, evals, res.stats);

    double g_ave = 0.0, g_max = -kInf;
    for (const Individual& ind : pop) {
      g_ave += ind.fitness;
      g_max = std::max(g_max, ind.fitness);
    }
    g_ave /= pop.size();
    for (int i = 0; i + 1 < cfg.population; i += 2) {
      double pair_max = std::max(pop[i].fitness, pop[i + 1].fitness);
      double pc = cfg.adaptive_probs
                      ? crossover_probability(pair_max, g_ave, g_max, cfg)
                      : linear_crossover_probability(pair_max, g_ave, g_max, cfg);
      crossover(pop[i], pop[i + 1], pc, xover_rng);
    }

    double pm = cfg.adaptive_probs ? mutation_probability(t, cfg.t1, cfg)
                                   : linear_mutation_probability(t, cfg.t1, cfg);
    for (Individual& ind : pop) mutate_assignment(ind.genes, pm, b, mut_rng);

    if (cfg.elimination &&
        static_cast<double>(t) >= cfg.elimination_start_fraction * cfg.t1) {
      evaluate_population(pop, evals, res.stats);
      eliminate_similar(pop, cfg.mu3, protected_idx, b, elim_rng, res.stats);
    }

    evaluate_population(pop, evals, res.stats);
    const Individual& cur = pop[argmax_fitness(pop)];
    if (cur.fitness > hist.fitness) hist = cur;
    res.trace.push_back(hist.fitness);
  }

  // Keep the elitist contract on the handoff population as well.
  ensure_member(pop, hist);
  res.best = hist;
  res.population = std::move(pop);
  return res;
}

SolveResult run_apso(const Scenario& sc, const SolverConfig& cfg,
                     std::vector<Individual> initial, std::uint64_t seed) {
  const GeneBounds b = GeneBounds::of(sc);
  Rng rng = Rng::stream(seed, "pso/main");

  SolveResult res;
  const int n = static_cast<int>(initial.size());
  if (n == 0) throw std::invalid_argument("run_apso: empty initial population");
  if (cfg.t2 <= 0) {
    res.best = initial[argmax_fitness(initial)];
    res.population = std::move(initial);
    return res;
  }

  std::vector<Evaluator> evals = make_evaluators(sc, cfg.penalties, cfg.threads);
  const int k = b.num_imds, km = b.genes_per_virtual();
  std::vector<Velocity> vel(n);
  for (Velocity& v : vel) {
    v.x.resize(k);
    v.z.resize(k);
    v.u.resize(km);
    v.v.resize(km);
    v.f.resize(k);
    v.p.resize(k);
    for (double* seg : {v.x.data(), v.z.data()})
      for (int i = 0; i < k; ++i) seg[i] = rng.uniform01();
    for (double* seg : {v.u.data(), v.v.data()})
      for (int i = 0; i < km; ++i) seg[i] = rng.uniform01();
    for (double* seg : {v.f.data(), v.p.data()})
      for (int i = 0; i < k; ++i) seg[i] = rng.uniform01();
  }

  std::vector<Individual> pos = std::move(initial);
  std::vector<Individual> pbest = pos;
  int gbest_idx = argmax_fitness(pbest);
  Individual gbest = pbest[gbest_idx];
  double omega_dot = cfg.omega_dot0;
  double omega_literal = cfg.omega_max;
  int success_run = 0, failure_run = 0;
  double prev_gbest_fitness = gbest.fitness;

  res.trace.reserve(cfg.t2);
  for (int t = 1; t <= cfg.t2; ++t) {
    double omega = cfg.literal_inertia_recurrence ? omega_literal
                                                  : update_inertia(t, cfg.t2, cfg);
    for (int i = 0; i < n; ++i) {
      if (cfg.gcpso && i == gbest_idx) continue;
      update_common_particle(pos[i].genes, vel[i], pbest[i].genes, gbest.genes, omega, cfg,
                             b, rng);
    }
    if (cfg.gcpso)
      update_global_best_particle(pos[gbest_idx].genes, vel[gbest_idx], gbest.genes,
                                  omega_dot, cfg, b, rng);

    evaluate_population(pos, evals, res.stats);
    for (int i = 0; i < n; ++i)
      if (pos[i].fitness > pbest[i].fitness) pbest[i] = pos[i];
    gbest_idx = argmax_fitness(pbest);
    gbest = pbest[gbest_idx];

    if (cfg.gcpso) {
      if (gbest.fitness == prev_gbest_fitness) {
        ++failure_run;
        success_run = 0;
      } else {
        ++success_run;
        failure_run = 0;
      }
      omega_dot = update_scaling(omega_dot, success_run, failure_run, cfg);
    }
    prev_gbest_fitness = gbest.fitness;
    if (cfg.literal_inertia_recurrence)
      omega_literal -= t * (cfg.omega_max - cfg.omega_min) / cfg.t2;
    res.trace.push_back(gbest.fitness);
  }

  res.best = gbest;
  res.population = std::move(pos);
  return res;
}

SolveResult run_fihas(const Scenario& sc, const SolverConfig& cfg, std::uint64_t seed) {
  SolveResult ga = run_iadgga(sc, cfg, seed);
  if (cfg.t2 <= 0) return ga;
  SolveResult pso = run_apso(sc, cfg, std::move(ga.population), seed);
  SolveResult res;
  res.best = pso.best.fitness >= ga.best.fitness ? pso.best : ga.best;
  res.trace = std::move(ga.trace);
  res.trace.insert(res.trace.end(), pso.trace.begin(), pso.trace.end());
  res.population = std::move(pso.population);
  res.stats.evaluations = ga.stats.evaluations + pso.stats.evaluations;
  res.stats.eval_passes = ga.stats.eval_passes + pso.stats.eval_passes;
  res.stats.similarity_checks = ga.stats.similarity_checks + pso.stats.similarity_checks;
  return res;
}

std::pair<Assignment, EvalReport> run_clca(const Scenario& sc, const PenaltyConfig& pen) {
  const int k_count = sc.K(), m_count = sc.M();
  Assignment a;
  a.tasks_per_imd = m_count;
  a.x.resize(k_count);
  a.z.assign(k_count, 1);
  a.u.assign(k_count * m_count, 0);
  a.v.assign(k_count * m_count, sc.L());
  a.f_loc.resize(k_count);
  a.p.assign(k_count, kVarTheta);

  std::vector<TaskEval> rows(static_cast<std::size_t>(k_count) * m_count);
  for (int k = 0; k < k_count; ++k) {
    int nearest = 0;
    double best = kInf;
    for (int n = 0; n < sc.N(); ++n) {
      double d = sq_dist(sc.bs_positions[n], sc.imd_positions[k]);
      if (d < best) {
        best = d;
        nearest = n;
      }
    }
    a.x[k] = nearest + 1;

    double f_needed = kVarTheta;
    for (int m = 0; m < m_count; ++m) {
      const Task& t = sc.task(k, m);
      // Just-in-time capacity: finish exactly at the deadline unless f_lmax
      // binds. The deadline branch pins tau to tau_max directly so that the
      // guarantee is not lost to rounding in ell/(ell/tau).
      double demand = t.ell_cycles / t.tau_max_s;
      bool capped = demand > sc.imd_f_lmax[k];
      double f_eff = capped ? sc.imd_f_lmax[k] : demand;
      TaskEval& te = rows[k * m_count + m];
      te.route = Route::kLocal;
      te.exec_bs = -1;
      te.tau_locc = capped ? t.ell_cycles / f_eff : t.tau_max_s;
      te.tau = te.tau_locc;
      te.eps_locc = sc.config.chip_energy_coeff * t.ell_cycles * f_eff * f_eff;
      te.delay_violation_s = std::max(te.tau - t.tau_max_s, 0.0);
      f_needed = std::max(f_needed, f_eff);
    }
    a.f_loc[k] = std::clamp(f_needed, kVarTheta, sc.imd_f_lmax[k]);
  }
  return {std::move(a), aggregate_report(sc, std::move(rows), pen)};
}

std::pair<Assignment, EvalReport> run_coa(const Scenario& sc, const PenaltyConfig& pen) {
  const int k_count = sc.K(), m_count = sc.M();
  Assignment a;
  a.tasks_per_imd = m_count;
  a.x.resize(k_count);
  a.z.resize(k_count);
  a.u.resize(k_count * m_count);
  a.v.resize(k_count * m_count);
  a.f_loc = sc.imd_f_lmax;
  a.p.assign(k_count, sc.p_max_w);

  for (int k = 0; k < k_count; ++k) {
    int best_bs = 0;
    for (int n = 1; n < sc.N(); ++n)
      if (sc.gain(n, k) > sc.gain(best_bs, k)) best_bs = n;
    a.x[k] = best_bs + 1;
    for (int m = 0; m < m_count; ++m) {
      a.u[a.vi(k, m)] = best_bs + 1;
      const Task& t = sc.task(k, m);
      int chosen = 1;
      double best_phi = kInf;
      for (int l = 1; l <= sc.L(); ++l) {
        double phi = t.lambda_usd * failure_probability(t, l, sc.crypto);
        if (phi <= best_phi) {  // ties resolved toward the stronger algorithm
          best_phi = phi;
          chosen = l;
        }
      }
      a.v[a.vi(k, m)] = chosen;
    }
  }

  // Least-loaded subchannel within each cluster, IMDs in index order.
  std::vector<int> load(static_cast<std::size_t>(sc.Q()) * sc.S(), 0);
  for (int k = 0; k < k_count; ++k) {
    int cluster = sc.cluster(a.selected_bs(k));
    int pick = 0;
    for (int s = 1; s < sc.S(); ++s)
      if (load[cluster * sc.S() + s] < load[cluster * sc.S() + pick]) pick = s;
    ++load[cluster * sc.S() + pick];
    a.z[k] = pick + 1;
  }
  EvalReport rep = evaluate(sc, a, pen);
  return {std::move(a), std::move(rep)};
}

ExhaustiveResult exhaustive_solve(const Scenario& sc, const PenaltyConfig& pen,
                                  int grid_points, double guard_limit) {
  const int k_count = sc.K(), m_count = sc.M();
  const int n_bs = sc.N(), s_count = sc.S(), l_count = sc.L();
  const int g = std::max(1, grid_points);

  long double total = 1.0L;
  for (int k = 0; k < k_count; ++k) total *= static_cast<long double>(n_bs) * s_count * g * g;
  for (int i = 0; i < k_count * m_count; ++i)
    total *= static_cast<long double>(n_bs + 1) * l_count;
  if (total > static_cast<long double>(guard_limit)) {
    std::ostringstream msg;
    msg << "exhaustive_solve: search space of about " << static_cast<double>(total)
        << " assignments exceeds the guard of " << guard_limit;
    throw std::runtime_error(msg.str());
  }

  auto grid_value = [g](double lo, double hi, int idx) {
    if (g == 1) return hi;
    return lo + idx * (hi - lo) / (g - 1);
  };

  // Mixed-radix odometer over the six gene segments, last digit fastest.
  std::vector<int> radix;
  for (int i = 0; i < k_count; ++i) radix.push_back(n_bs);
  for (int i = 0; i < k_count; ++i) radix.push_back(s_count);
  for (int i = 0; i < k_count * m_count; ++i) radix.push_back(n_bs + 1);
  for (int i = 0; i < k_count * m_count; ++i) radix.push_back(l_count);
  for (int i = 0; i < k_count; ++i) radix.push_back(g);
  for (int i = 0; i < k_count; ++i) radix.push_back(g);
  std::vector<int> digit(radix.size(), 0);

  Assignment a;
  a.tasks_per_imd = m_count;
  a.x.resize(k_count);
  a.z.resize(k_count);
  a.u.resize(k_count * m_count);
  a.v.resize(k_count * m_count);
  a.f_loc.resize(k_count);
  a.p.resize(k_count);

  Evaluator eval(sc, pen);
  ExhaustiveResult res;
  res.best.fitness = -kInf;
  bool first = true;
  while (true) {
    std::size_t at = 0;
    for (int i = 0; i < k_count; ++i) a.x[i] = digit[at++] + 1;
    for (int i = 0; i < k_count; ++i) a.z[i] = digit[at++] + 1;
    for (int i = 0; i < k_count * m_count; ++i) a.u[i] = digit[at++];
    for (int i = 0; i < k_count * m_count; ++i) a.v[i] = digit[at++] + 1;
    for (int i = 0; i < k_count; ++i)
      a.f_loc[i] = std::max(kVarTheta, grid_value(kVarTheta, sc.imd_f_lmax[i], digit[at++]));
    for (int i = 0; i < k_count; ++i)
      a.p[i] = std::max(kVarTheta, grid_value(kVarTheta, sc.p_max_w, digit[at++]));

    double fit = eval.fitness(a);
    ++res.enumerated;
    if (first || fit > res.best.fitness) {
      res.best = {a, fit};
      first = false;
    }

    int pos = static_cast<int>(digit.size()) - 1;
    while (pos >= 0) {
      if (++digit[pos] < radix[pos]) break;
      digit[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return res;
}

}  // namespace mecsim
