#ifndef MECSIM_SOLVERS_HPP
#define MECSIM_SOLVERS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mecsim/sysmodel.hpp"

namespace mecsim {

// All metaheuristic hyperparameters. Variant flags select between IADGGA and
// the plain ADGGA schedules, and between GCPSO and plain PSO.
struct SolverConfig {
  int population = 60;  // I, must be even
  int t1 = 5000;
  int t2 = 3000;
  double hbar1 = 0.8, hbar2 = 0.3, hbar3 = 0.1;   // crossover curve
  double hbar4 = 0.025, hbar5 = 0.01, hbar6 = 0.993;  // mutation curve
  double hbar7 = 0.6, hbar8 = 0.03, hbar9 = 1e-5;  // diversity-guided mutation
  double mu1 = 0.01, mu2 = 0.25;  // diversity thresholds
  double mu3 = 0.5;               // similarity threshold
  int mu4 = 15, mu5 = 5;          // GCPSO success/failure thresholds
  double kappa3 = 2.0, kappa4 = 2.0, kappa5 = 2.0;
  double omega_max = 0.9, omega_min = 0.4;
  double omega_dot0 = 1.0;        // initial GCPSO scaling factor
  double elimination_start_fraction = 0.2;
  bool adaptive_probs = true;     // false: linear ADGGA schedules
  bool elimination = true;
  bool gcpso = true;              // false: plain PSO global-best handling
  bool mirrored_crossover = false;  // hbar2-based variant of the crossover curve
  bool literal_inertia_recurrence = false;  // raw recurrence instead of linear decay
  double linear_hbar4 = 0.01, linear_hbar5 = 0.09;  // ADGGA mutation schedule
  int threads = 1;
  PenaltyConfig penalties;

  void validate() const;  // throws ConfigError
  static SolverConfig from_config(const KeyValueConfig& kv);  // solver.* keys
};

// Feasible boxes of every gene segment, taken from a scenario.
struct GeneBounds {
  int num_bs = 1;
  int num_subchannels = 1;
  int num_algos = 1;
  int num_imds = 1;
  int tasks_per_imd = 1;
  std::vector<double> f_max;  // per IMD
  double p_max = 0.0;

  static GeneBounds of(const Scenario& sc);
  int genes_per_virtual() const { return num_imds * tasks_per_imd; }
};

struct Individual {
  Assignment genes;
  double fitness = 0.0;
};

// Per-gene velocities for the PSO phase.
struct Velocity {
  std::vector<double> x, z, u, v, f, p;
};

struct SolverStats {
  long long evaluations = 0;        // fitness computations
  long long eval_passes = 0;        // population-wide evaluation sweeps
  long long similarity_checks = 0;  // pairwise comparisons in elimination
};

struct SolveResult {
  Individual best;
  std::vector<double> trace;            // historical-best fitness per iteration
  std::vector<Individual> population;   // final population
  SolverStats stats;
};

// --- GA building blocks -----------------------------------------------------

Assignment random_assignment(const GeneBounds& b, Rng& rng);

// I structurally feasible individuals with evaluated fitness.
std::vector<Individual> init_population(const Scenario& sc, const SolverConfig& cfg,
                                        Rng& rng);

std::vector<Individual> tournament_select_elitist(std::span<const Individual> pop,
                                                  const Individual& hist_best,
                                                  Rng& rng, int* protected_idx);

// Sigmoid crossover schedule, clamped; `g_pair_max` is the fitter parent.
double crossover_probability(double g_pair_max, double g_ave, double g_max,
                             const SolverConfig& cfg);
// Linear ADGGA stand-in schedule.
double linear_crossover_probability(double g_pair_max, double g_ave, double g_max,
                                    const SolverConfig& cfg);

// Swaps the tail [cut, end) of each of the six segments; cuts are per-segment.
void crossover_pair(Assignment& a, Assignment& b, const std::array<int, 6>& cuts);
void crossover(Individual& a, Individual& b, double probability, Rng& rng);

double mutation_probability(int t, int t1, const SolverConfig& cfg);  // log schedule
double linear_mutation_probability(int t, int t1, const SolverConfig& cfg);

// Deterministic cores of the blend-toward-an-edge mutation rules.
int mutate_toward_upper(int value, int domain_hi, double k1);   // R(k1*hi+(1-k1)*v)
int mutate_toward_lower(int value, int domain_lo, double k1);   // R(k1*lo+(1-k1)*v)
int mutate_toward_zero(int value, double k1);                   // R((1-k1)*v)

// Applies the blend rules gene-wise, each with the given probability.
void mutate_assignment(Assignment& a, double probability, const GeneBounds& b, Rng& rng);

// Population spread: gene-wise centroids plus the normalized mean distance.
struct DiversityState {
  double varsigma = 0.0;
  std::vector<double> centroid_x, centroid_z, centroid_u, centroid_v, centroid_f, centroid_p;
  std::array<double, 6> diagonals{};  // feasible-domain diagonal per segment
};

DiversityState diversity_state(std::span<const Individual> pop, const GeneBounds& b);
double diversity(std::span<const Individual> pop, const GeneBounds& b);
double diversity_mutation_probability(double varsigma, const SolverConfig& cfg);

double similarity(const Assignment& a, const Assignment& b);  // 1/(1 + distance)

// Replaces the lower-fitness member of every too-similar pair with a fresh
// random individual (fitness left stale; callers re-evaluate). Scans pairs in
// index order, replaces each individual at most once, never touches
// `protected_idx`. Returns the number of replacements.
int eliminate_similar(std::vector<Individual>& pop, double mu3, int protected_idx,
                      const GeneBounds& b, Rng& rng, SolverStats& stats);

// --- PSO building blocks ----------------------------------------------------

double update_inertia(int t, int t2, const SolverConfig& cfg);  // linear decay, floored

void update_common_particle(Assignment& pos, Velocity& vel, const Assignment& pbest,
                            const Assignment& gbest, double omega,
                            const SolverConfig& cfg, const GeneBounds& b, Rng& rng);

void update_global_best_particle(Assignment& pos, Velocity& vel, const Assignment& gbest,
                                 double omega_dot, const SolverConfig& cfg,
                                 const GeneBounds& b, Rng& rng);

double update_scaling(double omega_dot, int success_run, int failure_run,
                      const SolverConfig& cfg);  // streak doubling/halving

// --- full algorithms --------------------------------------------------------

SolveResult run_iadgga(const Scenario& sc, const SolverConfig& cfg, std::uint64_t seed);
SolveResult run_apso(const Scenario& sc, const SolverConfig& cfg,
                     std::vector<Individual> initial, std::uint64_t seed);
SolveResult run_fihas(const Scenario& sc, const SolverConfig& cfg, std::uint64_t seed);

std::pair<Assignment, EvalReport> run_clca(const Scenario& sc, const PenaltyConfig& pen);
std::pair<Assignment, EvalReport> run_coa(const Scenario& sc, const PenaltyConfig& pen);

struct ExhaustiveResult {
  Individual best;
  long long enumerated = 0;
};

// Enumerates every assignment with f/p on per-IMD grids of `grid_points`
// evenly spaced values spanning [vartheta, max]. Refuses (with the size
// estimate in the message) when the space exceeds `guard_limit`.
ExhaustiveResult exhaustive_solve(const Scenario& sc, const PenaltyConfig& pen,
                                  int grid_points, double guard_limit = 1e7);

}  // namespace mecsim

#endif
