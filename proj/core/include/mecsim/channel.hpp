#ifndef MECSIM_CHANNEL_HPP
#define MECSIM_CHANNEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mecsim/rng.hpp"

namespace mecsim {

struct Scenario;
struct Assignment;

// One band of the multi-slope pathloss ladder. `dist_threshold_m` plays two
// roles: for the first J-1 slopes it is the ladder boundary (slope j covers
// distances up to it), and for every slope it is the LoS-probability threshold.
// The last slope is unbounded above; its threshold only feeds the LoS draw.
struct SlopeParams {
  double h_los_ref = 0.0;    // pathloss at the 1 m reference, LoS branch (linear)
  double h_nlos_ref = 0.0;   // same, NLoS branch
  double gamma_los = 2.0;    // pathloss exponent, LoS
  double gamma_nlos = 2.0;   // pathloss exponent, NLoS
  double dist_threshold_m = 300.0;
  bool operator==(const SlopeParams&) const = default;
};

// Channel state of one (BS, IMD) link, frozen at scenario generation so that
// re-evaluating an assignment never re-samples fading.
struct LinkState {
  double distance_m = 0.0;
  int slope = 0;                  // active slope index
  std::uint32_t los_mask = 0;     // bit j: LoS drawn for slope j
  double gain = 0.0;              // linear channel gain h_{n,k}
  bool operator==(const LinkState&) const = default;

  bool los(int slope_idx) const { return (los_mask >> slope_idx) & 1u; }
};

// P(LoS at `distance`): 1 at 0, linear down to 0 at the threshold, 0 beyond.
// Throws std::domain_error for negative distances.
double los_probability(double distance_m, double threshold_m);

// Index of the slope whose distance band contains `distance`.
int active_slope(double distance_m, std::span<const SlopeParams> slopes);

// Pathloss of one slope with the branch fixed. Distance 0 is a domain error.
double slope_gain(double distance_m, const SlopeParams& slope, bool los);

// Draws the per-slope LoS flags and returns the fully resolved link state.
LinkState draw_link(double distance_m, std::span<const SlopeParams> slopes, Rng& rng);

// Variance-free alternative: P*h_LoS + (1-P)*h_NLoS for the active slope.
double expected_gain(double distance_m, std::span<const SlopeParams> slopes);

// IMDs k' != k transmitting on subchannel `s` to a BS in the cluster of BS `n`
// with gain h_{n,k'} <= h_{n,k}. All indices 0-based; `s` is 0-based.
std::vector<int> interference_set(const Scenario& sc, const Assignment& a,
                                  int n, int s, int k);

// NOMA uplink rate of IMD k towards BS n on subchannel s (bit/s).
double uplink_rate(const Scenario& sc, const Assignment& a, int n, int s, int k);

}  // namespace mecsim

#endif
