#include "ramcast/retrans.hpp"

namespace ramcast {

SuccessParams success_params(const ChannelModel& channel, const AccessProbabilities& access) {
  SuccessParams params;
  for (Source n : kSources) {
    const int s = index(n);
    const double p_other = access.of(other(n));
    const double solo1 = channel.solo(n, Destination::one);
    const double solo2 = channel.solo(n, Destination::two);
    const double joint1 = channel.joint(n, Destination::one);
    const double joint2 = channel.joint(n, Destination::two);
    params.phi[s] = (1.0 - p_other) * solo1 + p_other * joint1;
    params.sigma[s] = (1.0 - p_other) * solo2 + p_other * joint2;
    // Links to different destinations fail independently.
    params.tau[s] = (1.0 - p_other) * solo1 * solo2 + p_other * joint1 * joint2;
  }
  return params;
}

double retransmission_rate(double p, double phi, double sigma, double tau) {
  if (p * phi * sigma == 0.0) return 0.0;
  const double either = phi + sigma - tau;
  return p * phi * sigma * either / ((phi + sigma) * either - phi * sigma);
}

ServiceRates retrans_service_rates(const ChannelModel& channel, const AccessProbabilities& access) {
  ServiceRates rates;
  rates.policy = Policy::retransmission;
  rates.K = 1;

  const auto backlogged = success_params(channel, access);
  for (Source n : kSources) {
    const int s = index(n);
    rates.mu_b[s] = retransmission_rate(access.of(n), backlogged.phi[s], backlogged.sigma[s],
                                        backlogged.tau[s]);

    AccessProbabilities alone = access;
    (n == Source::one ? alone.p2 : alone.p1) = 0.0;
    const auto solo = success_params(channel, alone);
    rates.mu_e[s] = retransmission_rate(access.of(n), solo.phi[s], solo.sigma[s], solo.tau[s]);
  }
  return rates;
}

RateBounds jensen_bound(const ChannelModel& channel, const AccessProbabilities& access) {
  return rate_bounds(channel, access);
}

}  // namespace ramcast
