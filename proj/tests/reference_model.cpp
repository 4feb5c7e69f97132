#include "reference_model.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace refmodel {

using mecsim::Assignment;
using mecsim::Scenario;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Indicators {
  // x[n], z[s] for the queried IMD; u[n], v[l] for the queried task.
  std::vector<int> x, z, u, v;
  std::vector<int> c;  // cache row c[n] for the task
};

Indicators indicators(const Scenario& sc, const Assignment& a, int k, int m) {
  Indicators id;
  id.x.assign(sc.N(), 0);
  id.x[a.x[k] - 1] = 1;
  id.z.assign(sc.S(), 0);
  id.z[a.z[k] - 1] = 1;
  id.u.assign(sc.N(), 0);
  if (a.u[a.vi(k, m)] > 0) id.u[a.u[a.vi(k, m)] - 1] = 1;
  id.v.assign(sc.L(), 0);
  id.v[a.v[a.vi(k, m)] - 1] = 1;
  id.c.assign(sc.N(), 0);
  for (int n = 0; n < sc.N(); ++n) id.c[n] = sc.cached(n, k, m) ? 1 : 0;
  return id;
}

// Proportional capacity share of BS n for task (k, m), written from scratch.
double f_mec(const Scenario& sc, const Assignment& a, int n, int k, int m) {
  auto load = [&sc, &a](int kk, int mm) {
    double dec = 0;
    for (int l = 0; l < sc.L(); ++l)
      if (a.v[a.vi(kk, mm)] == l + 1) dec += sc.crypto.dec_cycles_per_bit[l];
    return sc.task(kk, mm).ell_cycles + dec * sc.task(kk, mm).d_bits;
  };
  double denom = 0;
  for (int kk = 0; kk < sc.K(); ++kk)
    for (int mm = 0; mm < sc.M(); ++mm)
      if (a.u[a.vi(kk, mm)] == n + 1) denom += load(kk, mm);
  return sc.config.bs_max_cycles * load(k, m) / denom;
}

// Radio upload happens when the selected BS holds no cached copy and the task
// is executed either there (with no cached copy anywhere else) or at an
// auxiliary BS that has no cached copy itself.
int upload_indicator(const Scenario& sc, const Indicators& id) {
  int total = 0;
  for (int n = 0; n < sc.N(); ++n) {
    int prod = 1, relay = 0;
    for (int np = 0; np < sc.N(); ++np) {
      if (np == n) continue;
      prod *= 1 - id.c[np];
      relay += (1 - id.c[np]) * id.u[np];
    }
    total += id.x[n] * (1 - id.c[n]) * (id.u[n] * prod + relay);
  }
  return total;
}

}  // namespace

double rate(const Scenario& sc, const Assignment& a, int n, int s, int k) {
  double interference = 0;
  for (int kp = 0; kp < sc.K(); ++kp) {
    if (kp == k) continue;
    bool same_subchannel = a.z[kp] - 1 == s && a.z[k] - 1 == s;
    bool same_cluster = sc.cluster(a.x[kp] - 1) == sc.cluster(n) &&
                        sc.cluster(a.x[k] - 1) == sc.cluster(n);
    if (same_subchannel && same_cluster && sc.gain(n, kp) <= sc.gain(n, k))
      interference += a.p[kp] * sc.gain(n, kp);
  }
  double sigma2 = sc.config.noise_psd_w_hz() * sc.config.subchannel_bandwidth_hz;
  if (a.p[k] <= 0) return 0;
  return sc.config.subchannel_bandwidth_hz *
         std::log2(1.0 + a.p[k] * sc.gain(n, k) / (interference + sigma2));
}

double expanded_backhaul_time(const Scenario& sc, const Assignment& a, int k, int m) {
  Indicators id = indicators(sc, a, k, m);
  const double per_hop = sc.task(k, m).d_bits / sc.config.backhaul_rate_bps;
  double total = 0;
  for (int n = 0; n < sc.N(); ++n) {
    int t1 = 0, t2 = 0, t3 = 0;
    for (int np = 0; np < sc.N(); ++np) {
      if (np == n) continue;
      t1 += (1 - id.c[np]) * id.u[np];
      t2 += id.c[np];
      t3 += (1 - id.c[np]) * id.u[np];
    }
    total += per_hop * (id.x[n] * id.c[n] * t1 + id.x[n] * (1 - id.c[n]) * id.u[n] * t2 +
                        id.x[n] * (1 - id.c[n]) * t3);
  }
  return total;
}

double expanded_edge_compute_time(const Scenario& sc, const Assignment& a, int k, int m) {
  Indicators id = indicators(sc, a, k, m);
  double total = 0;
  for (int n = 0; n < sc.N(); ++n) {
    if (id.x[n] == 0) continue;
    double own = id.u[n] ? sc.task(k, m).ell_cycles / f_mec(sc, a, n, k, m) : 0.0;
    total += id.x[n] * (1 - id.c[n]) * id.u[n] * own;
    total += id.x[n] * id.c[n] * id.u[n] * own;
    for (int np = 0; np < sc.N(); ++np) {
      if (np == n || id.u[np] == 0) continue;
      double aux = sc.task(k, m).ell_cycles / f_mec(sc, a, np, k, m);
      total += id.x[n] * (1 - id.c[n]) * id.c[np] * aux;
      total += id.x[n] * (1 - id.c[n]) * (1 - id.c[np]) * aux;
      total += id.x[n] * id.c[n] * id.c[np] * aux;
      total += id.x[n] * id.c[n] * (1 - id.c[np]) * aux;
    }
  }
  return total;
}

TaskBreakdown task_breakdown(const Scenario& sc, const Assignment& a, int k, int m) {
  const mecsim::Task& t = sc.task(k, m);
  Indicators id = indicators(sc, a, k, m);
  TaskBreakdown b;

  int offloaded = 0;
  for (int n = 0; n < sc.N(); ++n) offloaded += id.u[n];

  b.locc = t.ell_cycles * (1 - offloaded) / a.f_loc[k];
  b.eps_locc = sc.config.chip_energy_coeff * t.ell_cycles * (1 - offloaded) * a.f_loc[k] *
               a.f_loc[k];

  if (upload_indicator(sc, id) > 0) {
    double r = 0;
    for (int n = 0; n < sc.N(); ++n)
      for (int s = 0; s < sc.S(); ++s)
        if (id.x[n] && id.z[s]) r = rate(sc, a, n, s, k);
    b.up = r > 0 ? t.d_bits / r : kInf;
    b.eps_up = a.p[k] * b.up;
  }
  for (int n = 0; n < sc.N(); ++n) {
    for (int l = 0; l < sc.L(); ++l) {
      b.loce += id.u[n] * id.v[l] * sc.crypto.enc_cycles_per_bit[l] * t.d_bits / a.f_loc[k];
      b.eps_loce += id.u[n] * id.v[l] * sc.crypto.energy_per_bit_j[l] * t.d_bits;
    }
  }

  b.bh = expanded_backhaul_time(sc, a, k, m);

  if (offloaded > 0) {
    for (int n = 0; n < sc.N(); ++n) {
      if (id.u[n] == 0) continue;
      double share = f_mec(sc, a, n, k, m);
      for (int l = 0; l < sc.L(); ++l)
        b.mecd += id.v[l] * sc.crypto.dec_cycles_per_bit[l] * t.d_bits / share;
      b.mecc += t.ell_cycles / share;
      for (int l = 0; l < sc.L(); ++l) {
        double rho_gap = t.rho - sc.crypto.rho_dot[l];
        double p_fail = rho_gap > 0 ? 1.0 - std::exp(-t.theta * rho_gap) : 0.0;
        b.phi += t.lambda_usd * id.v[l] * p_fail;
      }
    }
  }
  return b;
}

double task_delay(const Scenario& sc, const Assignment& a, int k, int m) {
  return task_breakdown(sc, a, k, m).delay();
}

double device_energy(const Scenario& sc, const Assignment& a, int k) {
  double e = 0;
  for (int m = 0; m < sc.M(); ++m) {
    TaskBreakdown b = task_breakdown(sc, a, k, m);
    e += b.eps_locc + b.eps_loce + b.eps_up;
  }
  return e;
}

}  // namespace refmodel
