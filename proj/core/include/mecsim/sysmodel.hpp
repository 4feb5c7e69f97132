#ifndef MECSIM_SYSMODEL_HPP
#define MECSIM_SYSMODEL_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "mecsim/scenario.hpp"

namespace mecsim {

// Lower bound for continuous decision variables (the paper's vartheta).
inline constexpr double kVarTheta = 1e-20;

// One candidate solution in the flattened gene encoding. Gene values follow
// the paper's 1-based convention: x in 1..N, z in 1..S, v in 1..L and
// u in 0..N with 0 meaning local execution. Accessors convert to the 0-based
// indices used everywhere else.
struct Assignment {
  std::vector<int> x;        // size K: selected BS
  std::vector<int> z;        // size K: selected subchannel
  std::vector<int> u;        // size K*M: execution site (0 = local)
  std::vector<int> v;        // size K*M: crypto algorithm
  std::vector<double> f_loc; // size K: local capacity, cycles/s
  std::vector<double> p;     // size K: transmit power, watts
  int tasks_per_imd = 0;

  int vi(int k, int m) const { return k * tasks_per_imd + m; }
  int selected_bs(int k) const { return x[k] - 1; }
  int subchannel(int k) const { return z[k] - 1; }
  bool is_local(int k, int m) const { return u[vi(k, m)] == 0; }
  int exec_bs(int k, int m) const { return u[vi(k, m)] - 1; }  // -1 if local
  int algo(int k, int m) const { return v[vi(k, m)] - 1; }

  bool operator==(const Assignment&) const = default;
};

// Throws std::invalid_argument if any gene is out of its box.
void validate_assignment(const Scenario& sc, const Assignment& a);

enum class Route {
  kLocal,             // executed on the IMD
  kCachedAtSelected,  // cached at the selected BS, executed there
  kWiredToAux,        // cached at the selected BS, wired to an auxiliary executor
  kCachedAtAux,       // executed at an auxiliary BS that caches the task
  kUploadToSelected,  // uncached anywhere, uploaded and executed at the selected BS
  kWiredFromAux,      // executed at the selected BS on a copy wired in from a caching BS
  kUploadThenWired,   // uploaded to the selected BS, wired on to the executor
};

const char* route_name(Route r);

struct RouteInfo {
  Route route = Route::kLocal;
  int exec_bs = -1;      // 0-based, -1 for local
  bool upload = false;   // radio upload leg present
  bool backhaul = false; // wired transfer leg present
};

RouteInfo offload_route(const Scenario& sc, const Assignment& a, int k, int m);

struct PenaltyConfig {
  double eta = 1e3;        // per-IMD cost penalty (1/USD)
  double eta_tilde = 1e3;  // per-task delay penalty (1/s)
};

struct TaskEval {
  Route route = Route::kLocal;
  int exec_bs = -1;
  double tau_locc = 0, tau_loce = 0, tau_up = 0, tau_bh = 0, tau_mecd = 0, tau_mecc = 0;
  double tau = 0;  // sum of the six components
  double eps_locc = 0, eps_loce = 0, eps_up = 0;
  double phi_usd = 0;
  double delay_violation_s = 0;  // max(tau - tau_max, 0)
};

struct ImdEval {
  double energy_j = 0;              // device-side energy over the IMD's tasks
  double psi_usd = 0;               // sum of phi over the IMD's tasks
  double cost_violation_usd = 0;    // max(psi - psi_max, 0)
  double uplink_rate_bps = 0;       // rate on (x_k, z_k); 0 if never needed
  bool meets_deadlines = true;
  bool meets_cost = true;
};

struct EvalReport {
  std::vector<TaskEval> per_task;  // K*M, index k*M+m
  std::vector<ImdEval> per_imd;    // K
  double objective_j = 0;          // E (== TEC)
  double fitness = 0;              // penalized score; -inf when a route is infeasible
  double tec_j = 0;
  double td_s = 0;
  double tsr = 0;
  double csr = 0;
  std::array<bool, 12> constraints{};  // C1..C12
};

// --- per-component operations ----------------------------------------------

double local_compute_time(const Task& t, bool offloaded, double f_loc);
double local_compute_energy(const Task& t, bool offloaded, double f_loc, double alpha);

// Failure probability of protecting the task with algorithm value l (1-based).
double failure_probability(const Task& t, int algo_value, const CryptoProfile& crypto);
double breach_cost(const Task& t, bool offloaded, int algo_value, const CryptoProfile& crypto);
// psi_k: breach cost summed over the IMD's tasks.
double device_breach_cost(const Scenario& sc, const Assignment& a, int k);

// Encryption is charged for every edge-executed task, including cache hits;
// only fully local tasks skip it.
double encrypt_time(const Task& t, bool offloaded, int algo_value, double f_loc,
                    const CryptoProfile& crypto);
double encrypt_energy(const Task& t, bool offloaded, int algo_value,
                      const CryptoProfile& crypto);
double decrypt_time(const Task& t, bool offloaded, int algo_value, double f_mec,
                    const CryptoProfile& crypto);

// Proportional-allocation load term: ell + dec_cycles_per_bit(l) * d.
double task_load_cycles(const Task& t, int algo_value, const CryptoProfile& crypto);

// Proportional share of BS n's capacity for task (k, m); scans the assignment.
double edge_capacity(const Scenario& sc, const Assignment& a, int n, int k, int m);

// --- composed operations -----------------------------------------------------

double upload_time(const Scenario& sc, const Assignment& a, int k, int m);
double upload_energy(const Scenario& sc, const Assignment& a, int k, int m);
double backhaul_time(const Scenario& sc, const Assignment& a, int k, int m);
double edge_compute_time(const Scenario& sc, const Assignment& a, int k, int m);
double task_delay(const Scenario& sc, const Assignment& a, int k, int m);
double device_energy(const Scenario& sc, const Assignment& a, int k);
double objective(const Scenario& sc, const Assignment& a);
double fitness(const Scenario& sc, const Assignment& a, const PenaltyConfig& pen);

struct ConstraintReport {
  std::array<bool, 12> constraints{};
  double tsr = 0;
  double csr = 0;
};
ConstraintReport constraint_report(const Scenario& sc, const Assignment& a);

EvalReport evaluate(const Scenario& sc, const Assignment& a, const PenaltyConfig& pen);

// Builds the aggregate report (per-IMD sums, violations, metrics, fitness)
// from fully populated per-task rows. Callers fill uplink_rate_bps themselves.
EvalReport aggregate_report(const Scenario& sc, std::vector<TaskEval> per_task,
                            const PenaltyConfig& pen);

// Reusable evaluation context for solver hot loops: precomputes uplink rates
// and per-BS loads once per call and avoids reallocations across calls.
class Evaluator {
 public:
  explicit Evaluator(const Scenario& sc, const PenaltyConfig& pen);
  double fitness(const Assignment& a);       // G only
  EvalReport report(const Assignment& a);    // full report
  long long evaluations() const { return evaluations_; }

 private:
  void compute_context(const Assignment& a);

  const Scenario& sc_;
  PenaltyConfig pen_;
  std::vector<double> rate_;       // per IMD
  std::vector<double> bs_load_;    // per BS: sum of task loads executed there
  std::vector<int> members_;       // scratch for interference grouping
  long long evaluations_ = 0;
};

// Fixed CSV schema for per-task evaluation rows.
extern const char* const kEvalCsvHeader;
void write_eval_csv(std::ostream& os, const Scenario& sc, const EvalReport& rep,
                    const std::string& algo);

}  // namespace mecsim

#endif
