#include "mecsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "mecsim/scenario.hpp"
#include "mecsim/sysmodel.hpp"

namespace mecsim {

double los_probability(double distance_m, double threshold_m) {
  if (distance_m < 0.0) throw std::domain_error("los_probability: negative distance");
  if (distance_m > threshold_m) return 0.0;
  return 1.0 - distance_m / threshold_m;
}

int active_slope(double distance_m, std::span<const SlopeParams> slopes) {
  int j = 0;
  // The last slope catches everything beyond the J-1 ladder boundaries.
  while (j + 1 < static_cast<int>(slopes.size()) &&
         distance_m > slopes[j].dist_threshold_m)
    ++j;
  return j;
}

double slope_gain(double distance_m, const SlopeParams& slope, bool los) {
  if (distance_m <= 0.0) throw std::domain_error("slope_gain: distance must be positive");
  if (los) return slope.h_los_ref * std::pow(distance_m, -slope.gamma_los);
  return slope.h_nlos_ref * std::pow(distance_m, -slope.gamma_nlos);
}

LinkState draw_link(double distance_m, std::span<const SlopeParams> slopes, Rng& rng) {
  LinkState link;
  link.distance_m = distance_m;
  link.slope = active_slope(distance_m, slopes);
  for (int j = 0; j < static_cast<int>(slopes.size()); ++j) {
    double p = los_probability(distance_m, slopes[j].dist_threshold_m);
    if (rng.bernoulli(p)) link.los_mask |= (1u << j);
  }
  link.gain = slope_gain(distance_m, slopes[link.slope], link.los(link.slope));
  return link;
}

double expected_gain(double distance_m, std::span<const SlopeParams> slopes) {
  int j = active_slope(distance_m, slopes);
  double p = los_probability(distance_m, slopes[j].dist_threshold_m);
  return p * slope_gain(distance_m, slopes[j], true) +
         (1.0 - p) * slope_gain(distance_m, slopes[j], false);
}

std::vector<int> interference_set(const Scenario& sc, const Assignment& a,
                                  int n, int s, int k) {
  std::vector<int> out;
  int cluster = sc.cluster(n);
  double own = sc.gain(n, k);
  for (int kp = 0; kp < sc.K(); ++kp) {
    if (kp == k) continue;
    if (a.subchannel(kp) != s) continue;
    if (sc.cluster(a.selected_bs(kp)) != cluster) continue;
    if (sc.gain(n, kp) <= own) out.push_back(kp);
  }
  return out;
}

double uplink_rate(const Scenario& sc, const Assignment& a, int n, int s, int k) {
  double pk = a.p[k];
  if (pk <= 0.0) return 0.0;
  double interference = 0.0;
  for (int kp : interference_set(sc, a, n, s, k))
    interference += a.p[kp] * sc.gain(n, kp);
  double sinr = pk * sc.gain(n, k) / (interference + sc.noise_power_w);
  return sc.config.subchannel_bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace mecsim
