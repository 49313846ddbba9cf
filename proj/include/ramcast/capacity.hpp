#pragma once

#include <array>
#include <vector>

#include "ramcast/channel.hpp"
#include "ramcast/regions.hpp"

namespace ramcast {

// Per-slot probability that a packet from n is delivered to m when both
// sources are backlogged: p_n (1 - p_o) q_solo + p_n p_o q_joint.
double link_throughput(const ChannelModel& channel, const AccessProbabilities& access, Source n,
                       Destination m);

/// Largest achievable rates at fixed access probabilities, in packets/slot.
struct RateBounds {
  double r1_max = 0.0;
  double r2_max = 0.0;

  double of(Source n) const { return n == Source::one ? r1_max : r2_max; }
};

RateBounds rate_bounds(const ChannelModel& channel, const AccessProbabilities& access);

// h_b(p) in bits, with h_b(0) = h_b(1) = 0.
double binary_entropy(double p);

/// Mutual-information terms of the random access channel with u-bit packets,
/// in bits per transmission. `protocol_info[n]` is the h_b(p_n) idle-symbol
/// contribution carried inside the conditional terms.
struct MutualInfoReport {
  double u = 0.0;
  std::array<double, 2> i_x1_given_x2{};  // I(X1; Y_m | X2), per destination m
  std::array<double, 2> i_x2_given_x1{};  // I(X2; Y_m | X1)
  std::array<double, 2> i_joint{};        // I(X1, X2; Y_m)
  std::array<double, 2> protocol_info{};  // h_b(p_n), per source n
};

// Throws std::invalid_argument unless u >= 1.
MutualInfoReport mutual_info(const ChannelModel& channel, const AccessProbabilities& access,
                             double u);

std::vector<SweepSample> capacity_sweep(const ChannelModel& channel, double grid_step,
                                        unsigned jobs = 0);

/// Pareto frontier of the capacity region: closure over a (p1, p2) grid with
/// spacing `grid_step` in (0, 0.1].
RegionFrontier capacity_frontier(const ChannelModel& channel, double grid_step = 0.01,
                                 unsigned jobs = 0);

}  // namespace ramcast
