#include <doctest.h>

#include <cmath>

#include "ramcast/retrans.hpp"
#include "ramcast/random.hpp"
#include "support.hpp"

using namespace ramcast;

namespace {

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// Slots until a packet sent with probability p per slot has reached both
// destinations; per transmission the pair of receptions is drawn from the
// (phi, sigma, tau) joint law.
MeanEstimate simulated_service_time(double p, double phi, double sigma, double tau, int services,
                                    Rng& rng) {
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < services; ++s) {
    bool at1 = false, at2 = false;
    long long slots = 0;
    while (!(at1 && at2)) {
      ++slots;
      if (!bernoulli(rng, p)) continue;
      const double u = uniform01(rng);
      if (u < tau) {
        at1 = at2 = true;
      } else if (u < phi) {
        at1 = true;
      } else if (u < phi + sigma - tau) {
        at2 = true;
      }
    }
    sum += static_cast<double>(slots);
    sum_sq += static_cast<double>(slots) * static_cast<double>(slots);
  }
  const double mean = sum / services;
  const double var = sum_sq / services - mean * mean;
  return {mean, std::sqrt(var / services)};
}

// Rate 1/E[T] must sit within 4 delta-method standard errors of 1/mean.
void check_rate_against_simulation(double p, double phi, double sigma, double tau, Rng& rng) {
  const auto est = simulated_service_time(p, phi, sigma, tau, 400'000, rng);
  const double rate = retransmission_rate(p, phi, sigma, tau);
  const double se_rate = est.se / (est.mean * est.mean);
  CHECK(std::abs(1.0 / est.mean - rate) < 4 * se_rate);
}

ChannelModel random_channel(Rng& rng) {
  ChannelModel c;
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      const double a = uniform01(rng), b = uniform01(rng);
      c.q_solo[n][m] = std::max(a, b);
      c.q_joint[n][m] = std::min(a, b);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("success parameters") {
  const auto sp = success_params(strong_mpr_channel(), {0.5, 0.5});
  CHECK(sp.phi[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(sp.tau[0] == doctest::Approx(0.46).epsilon(1e-15));
  CHECK(sp.sigma[0] == doctest::Approx(0.5 * 0.7 + 0.5 * 0.6).epsilon(1e-15));

  const auto col = success_params(collision_channel(), {0.5, 0.0});
  CHECK(col.phi[0] == 1.0);
  CHECK(col.sigma[0] == 1.0);
  CHECK(col.tau[0] == 1.0);
}

TEST_CASE("joint reception probability matches a per-slot Monte Carlo") {
  Rng rng(derive_seed(42, 11));
  const auto ch = strong_mpr_channel();
  const double p2 = 0.5;
  const int trials = 1'000'000;
  int both = 0;
  for (int t = 0; t < trials; ++t) {
    const bool interfered = bernoulli(rng, p2);
    const double q1 = interfered ? ch.joint(Source::one, Destination::one)
                                 : ch.solo(Source::one, Destination::one);
    const double q2 = interfered ? ch.joint(Source::one, Destination::two)
                                 : ch.solo(Source::one, Destination::two);
    const bool r1 = bernoulli(rng, q1);
    const bool r2 = bernoulli(rng, q2);
    if (r1 && r2) ++both;
  }
  const double tau = success_params(ch, {0.5, p2}).tau[0];
  CHECK(std::abs(static_cast<double>(both) / trials - tau) <
        4 * std::sqrt(tau * (1 - tau) / trials));
}

TEST_CASE("perfect channel serves one packet per transmission") {
  for (double p : {0.1, 0.5, 1.0}) {
    const auto r = retrans_service_rates(test::perfect_channel(), {p, 0.7});
    CHECK(r.mu_b[0] == doctest::Approx(p).epsilon(1e-15));
    CHECK(r.mu_e[0] == doctest::Approx(p).epsilon(1e-15));
  }
}

TEST_CASE("strong channel service rates") {
  const auto r = retrans_service_rates(strong_mpr_channel(), {0.5, 0.5});
  CHECK(r.mu_b[0] == doctest::Approx(0.2712324).epsilon(1e-6));
  CHECK(r.mu_b[1] == doctest::Approx(r.mu_b[0]).epsilon(1e-15));
  CHECK(r.mu_e[0] == doctest::Approx(retransmission_rate(0.5, 0.8, 0.7, 0.56)).epsilon(1e-15));
  CHECK(r.mu_e[0] == doctest::Approx(0.3096471).epsilon(1e-6));
  CHECK(r.policy == Policy::retransmission);
}

TEST_CASE("closed form matches simulated service times") {
  Rng rng(derive_seed(42, 12));
  check_rate_against_simulation(0.5, 0.7, 0.65, 0.46, rng);   // strong channel, backlogged
  check_rate_against_simulation(0.5, 0.8, 0.7, 0.56, rng);    // strong channel, other empty
  check_rate_against_simulation(0.9, 0.3, 0.25, 0.05, rng);   // weak links
}

TEST_CASE("a destination that always receives reduces to one geometric") {
  for (double phi : {0.2, 0.55, 0.9}) {
    CHECK(retransmission_rate(0.4, phi, 1.0, phi) == doctest::Approx(0.4 * phi).epsilon(1e-14));
    CHECK(retransmission_rate(0.4, 1.0, phi, phi) == doctest::Approx(0.4 * phi).epsilon(1e-14));
  }
  CHECK(retransmission_rate(0.0, 0.5, 0.5, 0.25) == 0.0);
  CHECK(retransmission_rate(0.5, 0.0, 0.5, 0.0) == 0.0);
}

TEST_CASE("service rates never exceed the bound") {
  const auto b = jensen_bound(strong_mpr_channel(), {0.5, 0.5});
  CHECK(b.r1_max == rate_bounds(strong_mpr_channel(), {0.5, 0.5}).r1_max);
  CHECK(b.r1_max == doctest::Approx(0.325));
  CHECK(jensen_bound(collision_channel(), {0.5, 0.5}).r1_max == doctest::Approx(0.25));
  CHECK(retrans_service_rates(collision_channel(), {0.5, 0.5}).mu_b[0] <= 0.25);

  Rng rng(derive_seed(42, 13));
  for (int t = 0; t < 10'000; ++t) {
    const auto c = random_channel(rng);
    const AccessProbabilities a{uniform01(rng), uniform01(rng)};
    const auto r = retrans_service_rates(c, a);
    const auto bound = jensen_bound(c, a);
    CHECK(r.mu_b[0] <= bound.r1_max + 1e-15);
    CHECK(r.mu_b[1] <= bound.r2_max + 1e-15);
    CHECK(r.mu_b[0] <= r.mu_e[0] + 1e-15);
  }
}
