#include "ramcast/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace ramcast {

double link_throughput(const ChannelModel& channel, const AccessProbabilities& access, Source n,
                       Destination m) {
  const double p = access.of(n);
  const double p_other = access.of(other(n));
  return p * (1.0 - p_other) * channel.solo(n, m) + p * p_other * channel.joint(n, m);
}

RateBounds rate_bounds(const ChannelModel& channel, const AccessProbabilities& access) {
  auto bound = [&](Source n) {
    return std::min(link_throughput(channel, access, n, Destination::one),
                    link_throughput(channel, access, n, Destination::two));
  };
  return {bound(Source::one), bound(Source::two)};
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

MutualInfoReport mutual_info(const ChannelModel& channel, const AccessProbabilities& access,
                             double u) {
  if (!(u >= 1.0)) throw std::invalid_argument(fmt::format("packet length u = {} must be >= 1", u));

  MutualInfoReport report;
  report.u = u;
  report.protocol_info = {binary_entropy(access.p1), binary_entropy(access.p2)};
  for (Destination m : kDestinations) {
    const int d = index(m);
    // Idle symbols are never erased, so the only uncertainty left about X_n
    // after observing Y_m is u bits on each erased packet.
    report.i_x1_given_x2[d] =
        report.protocol_info[0] + u * link_throughput(channel, access, Source::one, m);
    report.i_x2_given_x1[d] =
        report.protocol_info[1] + u * link_throughput(channel, access, Source::two, m);
    report.i_joint[d] = report.protocol_info[0] + report.protocol_info[1] +
                        u * (link_throughput(channel, access, Source::one, m) +
                             link_throughput(channel, access, Source::two, m));
  }
  return report;
}

std::vector<SweepSample> capacity_sweep(const ChannelModel& channel, double grid_step,
                                        unsigned jobs) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw std::invalid_argument(fmt::format("grid step {} must lie in (0, 0.1]", grid_step));
  }
  return sweep_grid(grid_step, jobs, [&](const AccessProbabilities& access) {
    const auto bounds = rate_bounds(channel, access);
    return RatePoint{bounds.r1_max, bounds.r2_max};
  });
}

RegionFrontier capacity_frontier(const ChannelModel& channel, double grid_step, unsigned jobs) {
  const auto samples = capacity_sweep(channel, grid_step, jobs);
  return pareto_frontier(RegionKind::capacity, 1, grid_step, samples);
}

}  // namespace ramcast
