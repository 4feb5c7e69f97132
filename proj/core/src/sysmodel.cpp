#include "mecsim/sysmodel.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mecsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void validate_assignment(const Scenario& sc, const Assignment& a) {
  const int k = sc.K(), m = sc.M();
  auto fail = [](const std::string& what) { throw std::invalid_argument("assignment: " + what); };
  if (static_cast<int>(a.x.size()) != k || static_cast<int>(a.z.size()) != k ||
      static_cast<int>(a.f_loc.size()) != k || static_cast<int>(a.p.size()) != k ||
      static_cast<int>(a.u.size()) != k * m || static_cast<int>(a.v.size()) != k * m ||
      a.tasks_per_imd != m)
    fail("segment sizes do not match the scenario");
  for (int i = 0; i < k; ++i) {
    if (a.x[i] < 1 || a.x[i] > sc.N()) fail("x out of range");
    if (a.z[i] < 1 || a.z[i] > sc.S()) fail("z out of range");
    if (!(a.f_loc[i] >= kVarTheta && a.f_loc[i] <= sc.imd_f_lmax[i])) fail("f_loc out of range");
    if (!(a.p[i] >= kVarTheta && a.p[i] <= sc.p_max_w)) fail("p out of range");
  }
  for (int i = 0; i < k * m; ++i) {
    if (a.u[i] < 0 || a.u[i] > sc.N()) fail("u out of range");
    if (a.v[i] < 1 || a.v[i] > sc.L()) fail("v out of range");
  }
}

const char* route_name(Route r) {
  switch (r) {
    case Route::kLocal: return "local";
    case Route::kCachedAtSelected: return "cached_at_selected";
    case Route::kWiredToAux: return "wired_to_aux";
    case Route::kCachedAtAux: return "cached_at_aux";
    case Route::kUploadToSelected: return "upload_to_selected";
    case Route::kWiredFromAux: return "wired_from_aux";
    case Route::kUploadThenWired: return "upload_then_wired";
  }
  return "?";
}

RouteInfo offload_route(const Scenario& sc, const Assignment& a, int k, int m) {
  RouteInfo r;
  if (a.is_local(k, m)) return r;
  r.exec_bs = a.exec_bs(k, m);
  const int sel = a.selected_bs(k);
  const bool c_sel = sc.cached(sel, k, m);
  const bool c_exec = sc.cached(r.exec_bs, k, m);
  bool c_any = false;
  for (int n = 0; n < sc.N() && !c_any; ++n) c_any = sc.cached(n, k, m);

  if (r.exec_bs == sel) {
    if (c_sel) {
      r.route = Route::kCachedAtSelected;
    } else if (c_any) {
      // Cached copy at an auxiliary BS is wired in; no radio upload.
      r.route = Route::kWiredFromAux;
      r.backhaul = true;
    } else {
      r.route = Route::kUploadToSelected;
      r.upload = true;
    }
  } else {
    if (c_exec) {
      r.route = Route::kCachedAtAux;
    } else if (c_sel) {
      r.route = Route::kWiredToAux;
      r.backhaul = true;
    } else {
      r.route = Route::kUploadThenWired;
      r.upload = true;
      r.backhaul = true;
    }
  }
  return r;
}

double local_compute_time(const Task& t, bool offloaded, double f_loc) {
  return offloaded ? 0.0 : t.ell_cycles / f_loc;
}

double local_compute_energy(const Task& t, bool offloaded, double f_loc, double alpha) {
  return offloaded ? 0.0 : alpha * t.ell_cycles * f_loc * f_loc;
}

double failure_probability(const Task& t, int algo_value, const CryptoProfile& crypto) {
  int rho_dot = crypto.rho_dot[algo_value - 1];
  if (rho_dot >= t.rho) return 0.0;
  return 1.0 - std::exp(-t.theta * (t.rho - rho_dot));
}

double breach_cost(const Task& t, bool offloaded, int algo_value, const CryptoProfile& crypto) {
  if (!offloaded) return 0.0;
  return t.lambda_usd * failure_probability(t, algo_value, crypto);
}

double encrypt_time(const Task& t, bool offloaded, int algo_value, double f_loc,
                    const CryptoProfile& crypto) {
  if (!offloaded) return 0.0;
  return crypto.enc_cycles_per_bit[algo_value - 1] * t.d_bits / f_loc;
}

double encrypt_energy(const Task& t, bool offloaded, int algo_value,
                      const CryptoProfile& crypto) {
  if (!offloaded) return 0.0;
  return crypto.energy_per_bit_j[algo_value - 1] * t.d_bits;
}

double decrypt_time(const Task& t, bool offloaded, int algo_value, double f_mec,
                    const CryptoProfile& crypto) {
  if (!offloaded) return 0.0;
  return crypto.dec_cycles_per_bit[algo_value - 1] * t.d_bits / f_mec;
}

double task_load_cycles(const Task& t, int algo_value, const CryptoProfile& crypto) {
  return t.ell_cycles + crypto.dec_cycles_per_bit[algo_value - 1] * t.d_bits;
}

double edge_capacity(const Scenario& sc, const Assignment& a, int n, int k, int m) {
  double denom = 0.0;
  for (int kp = 0; kp < sc.K(); ++kp)
    for (int mp = 0; mp < sc.M(); ++mp)
      if (a.exec_bs(kp, mp) == n)
        denom += task_load_cycles(sc.task(kp, mp), a.v[a.vi(kp, mp)], sc.crypto);
  return sc.config.bs_max_cycles * task_load_cycles(sc.task(k, m), a.v[a.vi(k, m)], sc.crypto) / denom;
}

double upload_time(const Scenario& sc, const Assignment& a, int k, int m) {
  RouteInfo r = offload_route(sc, a, k, m);
  if (!r.upload) return 0.0;
  double rate = uplink_rate(sc, a, a.selected_bs(k), a.subchannel(k), k);
  if (rate <= 0.0) return kInf;
  return sc.task(k, m).d_bits / rate;
}

double upload_energy(const Scenario& sc, const Assignment& a, int k, int m) {
  double t = upload_time(sc, a, k, m);
  return t == 0.0 ? 0.0 : a.p[k] * t;
}

double backhaul_time(const Scenario& sc, const Assignment& a, int k, int m) {
  RouteInfo r = offload_route(sc, a, k, m);
  return r.backhaul ? sc.task(k, m).d_bits / sc.config.backhaul_rate_bps : 0.0;
}

double edge_compute_time(const Scenario& sc, const Assignment& a, int k, int m) {
  if (a.is_local(k, m)) return 0.0;
  return sc.task(k, m).ell_cycles / edge_capacity(sc, a, a.exec_bs(k, m), k, m);
}

double task_delay(const Scenario& sc, const Assignment& a, int k, int m) {
  const Task& t = sc.task(k, m);
  RouteInfo r = offload_route(sc, a, k, m);
  bool off = r.exec_bs >= 0;
  double tau = local_compute_time(t, off, a.f_loc[k]);
  if (off) {
    double f_mec = edge_capacity(sc, a, r.exec_bs, k, m);
    tau += encrypt_time(t, off, a.v[a.vi(k, m)], a.f_loc[k], sc.crypto);
    tau += upload_time(sc, a, k, m);
    tau += backhaul_time(sc, a, k, m);
    tau += decrypt_time(t, off, a.v[a.vi(k, m)], f_mec, sc.crypto);
    tau += t.ell_cycles / f_mec;
  }
  return tau;
}

double device_energy(const Scenario& sc, const Assignment& a, int k) {
  double e = 0.0;
  for (int m = 0; m < sc.M(); ++m) {
    const Task& t = sc.task(k, m);
    RouteInfo r = offload_route(sc, a, k, m);
    e += local_compute_energy(t, r.exec_bs >= 0, a.f_loc[k], sc.config.chip_energy_coeff);
    e += encrypt_energy(t, r.exec_bs >= 0, a.v[a.vi(k, m)], sc.crypto);
    e += upload_energy(sc, a, k, m);
  }
  return e;
}

double objective(const Scenario& sc, const Assignment& a) {
  double e = 0.0;
  for (int k = 0; k < sc.K(); ++k) e += device_energy(sc, a, k);
  return e;
}

double device_breach_cost(const Scenario& sc, const Assignment& a, int k) {
  double psi = 0.0;
  for (int m = 0; m < sc.M(); ++m)
    psi += breach_cost(sc.task(k, m), !a.is_local(k, m), a.v[a.vi(k, m)], sc.crypto);
  return psi;
}

double fitness(const Scenario& sc, const Assignment& a, const PenaltyConfig& pen) {
  Evaluator ev(sc, pen);
  return ev.fitness(a);
}

ConstraintReport constraint_report(const Scenario& sc, const Assignment& a) {
  EvalReport rep = evaluate(sc, a, PenaltyConfig{});
  return {rep.constraints, rep.tsr, rep.csr};
}

EvalReport evaluate(const Scenario& sc, const Assignment& a, const PenaltyConfig& pen) {
  Evaluator ev(sc, pen);
  return ev.report(a);
}

EvalReport aggregate_report(const Scenario& sc, std::vector<TaskEval> per_task,
                            const PenaltyConfig& pen) {
  EvalReport rep;
  rep.per_task = std::move(per_task);
  rep.per_imd.assign(sc.K(), {});
  const int m = sc.M();
  double energy = 0.0, td = 0.0, delay_pen = 0.0, cost_pen = 0.0;
  int deadline_ok = 0, cost_ok = 0;

  for (int k = 0; k < sc.K(); ++k) {
    ImdEval& imd = rep.per_imd[k];
    for (int mm = 0; mm < m; ++mm) {
      const TaskEval& te = rep.per_task[k * m + mm];
      imd.energy_j += te.eps_locc + te.eps_loce + te.eps_up;
      imd.psi_usd += te.phi_usd;
      td += te.tau;
      delay_pen += pen.eta_tilde * te.delay_violation_s;
      if (te.delay_violation_s > 0) imd.meets_deadlines = false;
    }
    imd.cost_violation_usd = std::max(imd.psi_usd - sc.config.psi_max_usd, 0.0);
    imd.meets_cost = imd.cost_violation_usd <= 0.0;
    cost_pen += pen.eta * imd.cost_violation_usd;
    energy += imd.energy_j;
    if (imd.meets_deadlines) ++deadline_ok;
    if (imd.meets_cost) ++cost_ok;
  }

  rep.objective_j = energy;
  rep.tec_j = energy;
  rep.td_s = td;
  rep.tsr = static_cast<double>(deadline_ok) / sc.K();
  rep.csr = static_cast<double>(cost_ok) / sc.K();
  rep.fitness = -energy - cost_pen - delay_pen;
  if (std::isnan(rep.fitness)) rep.fitness = -kInf;

  rep.constraints[0] = deadline_ok == sc.K();                       // C1
  rep.constraints[5] = cost_ok == sc.K();                           // C6
  // C2-C5 and C9-C12 are structural for a well-formed Assignment; C7/C8 are
  // rechecked against the gene boxes where the assignment is available.
  for (int c : {1, 2, 3, 4, 6, 7, 8, 9, 10, 11}) rep.constraints[c] = true;
  return rep;
}

Evaluator::Evaluator(const Scenario& sc, const PenaltyConfig& pen) : sc_(sc), pen_(pen) {
  rate_.assign(sc.K(), 0.0);
  bs_load_.assign(sc.N(), 0.0);
}

void Evaluator::compute_context(const Assignment& a) {
  const int k_count = sc_.K(), m_count = sc_.M();

  // Uplink rates: group IMDs by (cluster of the selected BS, subchannel) and
  // sum interference from weaker-or-equal-gain members of the same group.
  // Members are visited in ascending IMD order to keep sums reproducible.
  members_.assign(k_count, 0);
  for (int k = 0; k < k_count; ++k)
    members_[k] = sc_.cluster(a.selected_bs(k)) * sc_.S() + a.subchannel(k);
  for (int k = 0; k < k_count; ++k) {
    const int n = a.selected_bs(k);
    const double own_gain = sc_.gain(n, k);
    double interference = 0.0;
    for (int kp = 0; kp < k_count; ++kp) {
      if (kp == k || members_[kp] != members_[k]) continue;
      double g = sc_.gain(n, kp);
      if (g <= own_gain) interference += a.p[kp] * g;
    }
    double pk = a.p[k];
    rate_[k] = pk <= 0.0 ? 0.0
                         : sc_.config.subchannel_bandwidth_hz *
                               std::log2(1.0 + pk * own_gain / (interference + sc_.noise_power_w));
  }

  // Per-BS decryption-inclusive load sums (proportional-allocation denominators).
  bs_load_.assign(sc_.N(), 0.0);
  for (int k = 0; k < k_count; ++k)
    for (int m = 0; m < m_count; ++m)
      if (!a.is_local(k, m))
        bs_load_[a.exec_bs(k, m)] += task_load_cycles(sc_.task(k, m), a.v[a.vi(k, m)], sc_.crypto);
}

double Evaluator::fitness(const Assignment& a) {
  ++evaluations_;
  compute_context(a);
  double energy = 0.0, delay_pen = 0.0, cost_pen = 0.0;
  for (int k = 0; k < sc_.K(); ++k) {
    double psi = 0.0;
    for (int m = 0; m < sc_.M(); ++m) {
      const Task& t = sc_.task(k, m);
      const bool off = !a.is_local(k, m);
      double tau = local_compute_time(t, off, a.f_loc[k]);
      energy += local_compute_energy(t, off, a.f_loc[k], sc_.config.chip_energy_coeff);
      if (off) {
        RouteInfo r = offload_route(sc_, a, k, m);
        const int algo = a.v[a.vi(k, m)];
        double f_mec = sc_.config.bs_max_cycles * task_load_cycles(t, algo, sc_.crypto) /
                       bs_load_[r.exec_bs];
        tau += encrypt_time(t, off, algo, a.f_loc[k], sc_.crypto);
        energy += encrypt_energy(t, off, algo, sc_.crypto);
        if (r.upload) {
          double up = rate_[k] <= 0.0 ? kInf : t.d_bits / rate_[k];
          tau += up;
          energy += a.p[k] * up;
        }
        if (r.backhaul) tau += t.d_bits / sc_.config.backhaul_rate_bps;
        tau += decrypt_time(t, off, algo, f_mec, sc_.crypto);
        tau += t.ell_cycles / f_mec;
        psi += breach_cost(t, off, algo, sc_.crypto);
      }
      delay_pen += pen_.eta_tilde * std::max(tau - t.tau_max_s, 0.0);
    }
    cost_pen += pen_.eta * std::max(psi - sc_.config.psi_max_usd, 0.0);
  }
  double g = -energy - cost_pen - delay_pen;
  return std::isnan(g) ? -kInf : g;
}

EvalReport Evaluator::report(const Assignment& a) {
  ++evaluations_;
  compute_context(a);
  std::vector<TaskEval> rows(static_cast<std::size_t>(sc_.K()) * sc_.M());
  for (int k = 0; k < sc_.K(); ++k) {
    for (int m = 0; m < sc_.M(); ++m) {
      TaskEval& te = rows[k * sc_.M() + m];
      const Task& t = sc_.task(k, m);
      const bool off = !a.is_local(k, m);
      RouteInfo r = offload_route(sc_, a, k, m);
      te.route = r.route;
      te.exec_bs = r.exec_bs;
      te.tau_locc = local_compute_time(t, off, a.f_loc[k]);
      te.eps_locc = local_compute_energy(t, off, a.f_loc[k], sc_.config.chip_energy_coeff);
      if (off) {
        const int algo = a.v[a.vi(k, m)];
        double f_mec = sc_.config.bs_max_cycles * task_load_cycles(t, algo, sc_.crypto) /
                       bs_load_[r.exec_bs];
        te.tau_loce = encrypt_time(t, off, algo, a.f_loc[k], sc_.crypto);
        te.eps_loce = encrypt_energy(t, off, algo, sc_.crypto);
        if (r.upload) {
          te.tau_up = rate_[k] <= 0.0 ? kInf : t.d_bits / rate_[k];
          te.eps_up = a.p[k] * te.tau_up;
        }
        if (r.backhaul) te.tau_bh = t.d_bits / sc_.config.backhaul_rate_bps;
        te.tau_mecd = decrypt_time(t, off, algo, f_mec, sc_.crypto);
        te.tau_mecc = t.ell_cycles / f_mec;
        te.phi_usd = breach_cost(t, off, algo, sc_.crypto);
      }
      te.tau = te.tau_locc + te.tau_loce + te.tau_up + te.tau_bh + te.tau_mecd + te.tau_mecc;
      te.delay_violation_s = std::max(te.tau - t.tau_max_s, 0.0);
    }
  }
  EvalReport rep = aggregate_report(sc_, std::move(rows), pen_);
  for (int k = 0; k < sc_.K(); ++k) {
    rep.per_imd[k].uplink_rate_bps = rate_[k];
    if (!(a.f_loc[k] >= kVarTheta && a.f_loc[k] <= sc_.imd_f_lmax[k]))
      rep.constraints[6] = false;  // C7
    if (!(a.p[k] >= kVarTheta && a.p[k] <= sc_.p_max_w)) rep.constraints[7] = false;  // C8
  }
  return rep;
}

const char* const kEvalCsvHeader =
    "scenario_seed,algo,k,m,route,tau_locc_s,tau_loce_s,tau_up_s,tau_bh_s,tau_mecd_s,"
    "tau_mecc_s,tau_s,eps_locc_j,eps_loce_j,eps_up_j,phi_usd,delay_violation_s,"
    "cost_violation_usd";

void write_eval_csv(std::ostream& os, const Scenario& sc, const EvalReport& rep,
                    const std::string& algo) {
  os << kEvalCsvHeader << '\n';
  for (int k = 0; k < sc.K(); ++k) {
    for (int m = 0; m < sc.M(); ++m) {
      const TaskEval& te = rep.per_task[k * sc.M() + m];
      os << sc.config.seed << ',' << algo << ',' << k << ',' << m << ','
         << route_name(te.route) << ',' << format_double(te.tau_locc) << ','
         << format_double(te.tau_loce) << ',' << format_double(te.tau_up) << ','
         << format_double(te.tau_bh) << ',' << format_double(te.tau_mecd) << ','
         << format_double(te.tau_mecc) << ',' << format_double(te.tau) << ','
         << format_double(te.eps_locc) << ',' << format_double(te.eps_loce) << ','
         << format_double(te.eps_up) << ',' << format_double(te.phi_usd) << ','
         << format_double(te.delay_violation_s) << ','
         << format_double(rep.per_imd[k].cost_violation_usd) << '\n';
    }
  }
}

}  // namespace mecsim
