#pragma once

#include <array>

#include "ramcast/capacity.hpp"
#include "ramcast/channel.hpp"
#include "ramcast/service.hpp"

namespace ramcast {

/// Per-transmission success probabilities for each source while the other
/// source is backlogged: `phi` at destination 1, `sigma` at destination 2,
/// `tau` at both in the same slot.
struct SuccessParams {
  std::array<double, 2> phi{};
  std::array<double, 2> sigma{};
  std::array<double, 2> tau{};
};

SuccessParams success_params(const ChannelModel& channel, const AccessProbabilities& access);

/// 1 / E[max(T1, T2)] for the two correlated geometric delivery times of a
/// packet that is transmitted with probability p in each slot.
double retransmission_rate(double p, double phi, double sigma, double tau);

ServiceRates retrans_service_rates(const ChannelModel& channel, const AccessProbabilities& access);

// Upper bound on the backlogged service rate of either policy; identical to
// rate_bounds.
RateBounds jensen_bound(const ChannelModel& channel, const AccessProbabilities& access);

}  // namespace ramcast
