#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "ramcast/gf2.hpp"
#include "ramcast/random.hpp"
#include "ramcast/retrans.hpp"
#include "ramcast/rlc_markov.hpp"
#include "support.hpp"

using namespace ramcast;

namespace {

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

bool has_state(const std::vector<ChainState>& v, ChainState s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Direct Monte Carlo of one coded source: every slot draws a reception
// outcome from `w` and a fresh coefficient vector, and the two destinations
// keep their received spans. The state at the start of each slot is
// (rank1, rank2, dim of the intersection).
struct GenerationSim {
  double rate = 0.0;
  double rate_se = 0.0;
  std::map<ChainState, std::vector<double>> occupancy_batches;
  int batches = 0;
};

GenerationSim simulate_generations(const ReceptionWeights& w, int K, long long slots, int batches,
                                   Rng& rng) {
  GenerationSim out;
  out.batches = batches;
  gf2::SubspaceBasis at1, at2, joint;
  const long long per_batch = slots / batches;
  std::vector<double> batch_rates;
  for (int b = 0; b < batches; ++b) {
    std::map<ChainState, long long> visits;
    long long delivered = 0;
    for (long long t = 0; t < per_batch; ++t) {
      const ChainState s{at1.rank(), at2.rank(), at1.rank() + at2.rank() - joint.rank()};
      ++visits[s];
      const double u = uniform01(rng);
      const auto coeff = gf2::random_coefficients(K, rng);
      bool to1 = false, to2 = false;
      if (u < w.neither) {
      } else if (u < w.neither + w.first_only) {
        to1 = true;
      } else if (u < w.neither + w.first_only + w.second_only) {
        to2 = true;
      } else {
        to1 = to2 = true;
      }
      if (to1) at1.insert(coeff);
      if (to2) at2.insert(coeff);
      if (to1 || to2) joint.insert(coeff);
      if (at1.rank() == K && at2.rank() == K) {
        delivered += K;
        at1.clear();
        at2.clear();
        joint.clear();
      }
    }
    batch_rates.push_back(static_cast<double>(delivered) / per_batch);
    for (const auto& [s, n] : visits) {
      auto& v = out.occupancy_batches[s];
      v.resize(static_cast<std::size_t>(batches), 0.0);
      v[static_cast<std::size_t>(b)] = static_cast<double>(n) / per_batch;
    }
  }
  double mean = 0.0;
  for (double r : batch_rates) mean += r;
  mean /= batches;
  double var = 0.0;
  for (double r : batch_rates) var += (r - mean) * (r - mean);
  out.rate = mean;
  out.rate_se = std::sqrt(var / (batches - 1) / batches);
  return out;
}

std::pair<double, double> batch_mean_se(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
}

const ReceptionWeights kPerfectSolo{0.0, 0.0, 0.0, 1.0};

}  // namespace

TEST_CASE("state spaces") {
  const auto pub = enumerate_states(1, TransitionRule::joint_slot);
  CHECK(pub.size() == 5);
  for (ChainState s : {ChainState{0, 0, 0}, ChainState{1, 0, 0}, ChainState{0, 1, 0},
                       ChainState{1, 1, 0}, ChainState{1, 1, 1}})
    CHECK(has_state(pub, s));
  CHECK(pub.front() == ChainState{0, 0, 0});

  const auto sub = enumerate_states(1, TransitionRule::subspace);
  CHECK(sub.size() == 4);
  CHECK_FALSE(has_state(sub, {1, 1, 0}));

  for (int K : {1, 3, 8}) {
    for (auto rule : {TransitionRule::joint_slot, TransitionRule::subspace}) {
      ChainModel chain(K, rule, {0.4, 0.2, 0.1, 0.3});
      int absorbing = 0;
      for (std::size_t s = 0; s < chain.size(); ++s) absorbing += chain.is_absorbing(s);
      if (rule == TransitionRule::joint_slot) CHECK(absorbing == K + 1);
      for (const auto& s : chain.states()) {
        CHECK(s.k <= std::min(s.i, s.j));
        if (rule == TransitionRule::subspace) CHECK(s.i + s.j - s.k <= K);
      }
      // level order: every state after the origin has a larger or equal i + j
      const auto& st = chain.states();
      for (std::size_t s = 1; s < st.size(); ++s)
        CHECK(st[s].i + st[s].j >= st[s - 1].i + st[s - 1].j);
    }
  }
}

TEST_CASE("absorbing entry sets") {
  const auto a1 = absorbing_entry_sets(1);
  REQUIRE(a1.size() == 2);
  CHECK(a1[0].size() == 2);
  CHECK(has_state(a1[0], {0, 1, 0}));
  CHECK(has_state(a1[0], {1, 0, 0}));
  CHECK(a1[1].size() == 3);
  CHECK(has_state(a1[1], {0, 0, 0}));

  const int K = 5;
  const auto a = absorbing_entry_sets(K);
  CHECK(a[K].size() == 3);
  CHECK(has_state(a[K], {K - 1, K, K - 1}));
  CHECK(has_state(a[K], {K, K - 1, K - 1}));
  CHECK(has_state(a[K], {K - 1, K - 1, K - 1}));
  CHECK(a[0].size() == 2);
  CHECK(has_state(a[0], {K - 1, K, 0}));
  CHECK(has_state(a[0], {K, K - 1, 0}));

  // the joint_slot chain's own predecessors of (K, K, k) are the listed sets
  const ChainModel chain(K, TransitionRule::joint_slot, {0.4, 0.2, 0.1, 0.3});
  const auto pred = entry_predecessors(chain);
  for (int k = 0; k <= K; ++k) {
    CHECK(pred[static_cast<std::size_t>(k)].size() == a[static_cast<std::size_t>(k)].size());
    for (const auto& s : pred[static_cast<std::size_t>(k)]) CHECK(has_state(a[static_cast<std::size_t>(k)], s));
  }
}

TEST_CASE("rows are stochastic on random channels") {
  Rng rng(derive_seed(42, 31));
  for (int K = 1; K <= 8; ++K) {
    for (int t = 0; t < 5; ++t) {
      const auto c = random_channel(rng);
      const AccessProbabilities a{uniform01(rng), uniform01(rng)};
      for (auto rule : {TransitionRule::joint_slot, TransitionRule::subspace}) {
        for (bool backlogged : {true, false}) {
          const auto chain = build_chain(c, a, Source::one, backlogged, K, rule);
          CHECK(chain.max_row_residual() <= 1e-12);
          CHECK(row_residuals(chain).max() <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("reception weights") {
  const auto w = reception_weights(strong_mpr_channel(), {0.5, 0.5}, Source::one, true);
  const auto sp = success_params(strong_mpr_channel(), {0.5, 0.5});
  CHECK(w.both == doctest::Approx(0.5 * sp.tau[0]));
  CHECK(w.first_only == doctest::Approx(0.5 * (sp.phi[0] - sp.tau[0])));
  CHECK(w.second_only == doctest::Approx(0.5 * (sp.sigma[0] - sp.tau[0])));
  CHECK(w.neither + w.first_only + w.second_only + w.both == doctest::Approx(1.0).epsilon(1e-15));
  const auto alone = reception_weights(strong_mpr_channel(), {0.5, 0.5}, Source::one, false);
  CHECK(alone.both == doctest::Approx(0.5 * 0.8 * 0.7));
}

TEST_CASE("perfect channel with K = 1 serves half a packet per slot") {
  // Only nonzero coefficients deliver: one packet per geometric(1/2) slots.
  for (auto rule : {TransitionRule::joint_slot, TransitionRule::subspace}) {
    const ChainModel chain(1, rule, kPerfectSolo);
    const auto pi = steady_state(chain);
    double total = 0.0;
    for (double v : pi) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pi[chain.index_of({0, 0, 0})] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(pi[chain.index_of({1, 1, 1})] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(completion_flux(chain, pi) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(generation_service_rate(chain, pi) == doctest::Approx(0.5).epsilon(1e-14));
    const auto occ = slot_occupancy(chain, pi);
    CHECK(occ[chain.origin()] == doctest::Approx(1.0));
  }
  CHECK(rlc_service_rate(test::perfect_channel(), {1.0, 0.0}, Source::one, false, 1) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("solvers agree") {
  for (auto rule : {TransitionRule::joint_slot, TransitionRule::subspace}) {
    const auto chain = build_chain(strong_mpr_channel(), {0.5, 0.5}, Source::one, true, 16, rule);
    const auto topo = steady_state(chain, SteadyStateSolver::topological);
    const auto dense = steady_state(chain, SteadyStateSolver::dense);
    const auto iter = steady_state(chain, SteadyStateSolver::iterative);
    for (std::size_t s = 0; s < chain.size(); ++s) {
      CHECK(std::abs(topo[s] - dense[s]) <= 1e-10);
      CHECK(std::abs(topo[s] - iter[s]) <= 1e-10);
    }
  }
}

TEST_CASE("known service rates") {
  const AccessProbabilities both{1.0, 1.0};
  const auto ch = strong_mpr_channel();
  CHECK(rlc_service_rate(ch, both, Source::one, true, 2) == doctest::Approx(0.289562).epsilon(1e-5));
  CHECK(rlc_service_rate(ch, both, Source::one, true, 4) == doctest::Approx(0.362796).epsilon(1e-5));
  const RlcOptions pub{TransitionRule::joint_slot, SteadyStateSolver::topological};
  CHECK(rlc_service_rate(ch, both, Source::one, true, 2, pub) == doctest::Approx(0.286938).epsilon(1e-5));
}

TEST_CASE("a destination that always receives leaves the other's decode count") {
  // Destination 2 hears every packet destination 1 hears, so completion is
  // destination 1 reaching rank K: K p phi / E[N].
  ChannelModel c = strong_mpr_channel();
  c.q_solo[0][1] = 1.0;
  c.q_joint[0][1] = 1.0;
  for (int K : {1, 2, 5, 12}) {
    for (double p : {0.3, 1.0}) {
      const double expected = K * p * 0.8 / gf2::expected_decode_count(K);
      CHECK(rlc_service_rate(c, {p, 0.0}, Source::one, false, K) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("service rate grows with K toward the bound") {
  const AccessProbabilities a{0.5, 0.5};
  const double bound = jensen_bound(strong_mpr_channel(), a).r1_max;
  double prev = 0.0;
  for (int K : {1, 2, 4, 8, 16, 32}) {
    const double r = rlc_service_rate(strong_mpr_channel(), a, Source::one, true, K);
    CHECK(r > prev);
    CHECK(r < bound);
    prev = r;
  }
  CHECK(prev > 0.9 * bound);
}

TEST_CASE("chain matches a direct simulation of coded deliveries") {
  Rng rng(derive_seed(42, 32));
  struct Case {
    ChannelModel channel;
    AccessProbabilities access;
    bool backlogged;
    int K;
  };
  const std::vector<Case> cases{{strong_mpr_channel(), {0.5, 0.5}, true, 2},
                                {strong_mpr_channel(), {1.0, 1.0}, true, 3},
                                {weak_mpr_channel(), {0.7, 0.4}, false, 2},
                                {weak_mpr_channel(), {0.6, 0.9}, true, 4}};
  for (const auto& c : cases) {
    const auto chain = build_chain(c.channel, c.access, Source::one, c.backlogged, c.K);
    const auto pi = steady_state(chain);
    const double rate = generation_service_rate(chain, pi);
    const auto sim = simulate_generations(chain.weights(), c.K, 2'000'000, 50, rng);
    CHECK(std::abs(sim.rate - rate) < 4 * sim.rate_se);

    const auto occ = slot_occupancy(chain, pi);
    for (std::size_t s = 0; s < chain.size(); ++s) {
      const auto it = sim.occupancy_batches.find(chain.states()[s]);
      if (it == sim.occupancy_batches.end()) {
        CHECK(occ[s] < 1e-4);
        continue;
      }
      const auto [mean, se] = batch_mean_se(it->second);
      CHECK(std::abs(mean - occ[s]) < 4 * se + 1e-9);
    }
    for (const auto& [state, batches] : sim.occupancy_batches) CHECK(chain.contains(state));
  }
}

TEST_CASE("service rates for both sources") {
  const auto r = rlc_service_rates(strong_mpr_channel(), {0.5, 0.5}, 4);
  CHECK(r.policy == Policy::random_linear_coding);
  CHECK(r.K == 4);
  CHECK(r.mu_b[0] == doctest::Approx(r.mu_b[1]).epsilon(1e-12));
  CHECK(r.mu_b[0] < r.mu_e[0]);
  const auto silent = rlc_service_rates(strong_mpr_channel(), {0.0, 0.5}, 4);
  CHECK(silent.mu_b[0] == 0.0);
  CHECK(silent.mu_e[0] == 0.0);
  CHECK(silent.mu_e[1] > 0.0);
}

TEST_CASE("chain errors") {
  const ChainModel chain(2, TransitionRule::subspace, kPerfectSolo);
  CHECK_THROWS_AS(chain.index_of({3, 0, 0}), ChainError);
  CHECK_THROWS_AS(chain.index_of({2, 2, 0}), ChainError);  // i + j - k > K
  CHECK_FALSE(chain.contains({1, 0, 1}));
  const ChainModel stuck(2, TransitionRule::subspace, ReceptionWeights{});
  CHECK_THROWS_AS(steady_state(stuck), ChainError);
  CHECK_THROWS_AS(ChainModel(0, TransitionRule::subspace, kPerfectSolo), std::invalid_argument);
  CHECK_THROWS_AS(ChainModel(65, TransitionRule::subspace, kPerfectSolo), std::invalid_argument);
  CHECK(parse_transition_rule("joint_slot") == TransitionRule::joint_slot);
  CHECK(parse_steady_state_solver("dense") == SteadyStateSolver::dense);
  CHECK_THROWS(parse_transition_rule("bogus"));
  CHECK(to_string(SteadyStateSolver::iterative) == "iterative");
}
