#include "ramcast/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "ramcast/gf2.hpp"
#include "ramcast/parallel.hpp"
#include "ramcast/random.hpp"

namespace ramcast::sim {

std::string_view to_string(Mode mode) { return mode == Mode::saturated ? "saturated" : "arrivals"; }

Mode parse_mode(std::string_view name) {
  if (name == "saturated") return Mode::saturated;
  if (name == "arrivals") return Mode::arrivals;
  throw std::invalid_argument(
      fmt::format("unknown simulation mode '{}' (expected saturated|arrivals)", name));
}

void validate(const SimConfig& config) {
  validate(config.channel, Strictness::relaxed);
  validate(config.access);
  validate(config.arrivals);
  if (config.K < 1 || config.K > gf2::kMaxGenerationSize) {
    throw std::invalid_argument(
        fmt::format("K = {} must lie in [1, {}]", config.K, gf2::kMaxGenerationSize));
  }
  if (config.batches < 2) throw std::invalid_argument("batches must be >= 2");
  if (config.slots < config.batches) {
    throw std::invalid_argument(
        fmt::format("slots = {} must be at least batches = {}", config.slots, config.batches));
  }
}

namespace {

enum StreamKind : std::uint64_t { kAccess = 0, kCoefficients = 1, kReception = 2, kArrivals = 4 };

Rng stream(std::uint64_t seed, Source n, std::uint64_t kind) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(index(n)) * 8 + kind));
}

struct SourceState {
  Rng access_rng, coeff_rng, arrival_rng;
  std::array<Rng, 2> reception_rng;

  long long queue = 0;
  bool in_service = false;
  long long service_start = 0;

  // retransmission: which destinations hold the head packet
  std::array<bool, 2> delivered{};

  // random linear coding
  std::array<gf2::SubspaceBasis, 2> received;
  gf2::SubspaceBasis combined;  // U1 + U2
  std::array<long long, 2> heard{};
  std::array<long long, 2> decode_count{};

  // per-batch accumulators
  long long batch_departures = 0;
  double batch_queue_sum = 0.0;
  std::vector<double> batch_queue_means;
  double queue_sum = 0.0;
  long long service_time_sum = 0;

  std::vector<std::array<long long, 2>> decode_pairs;
};

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double batch_std_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// OLS slope of y against x and its standard error.
std::pair<double, double> ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3) return {0.0, 0.0};
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    rss += r * r;
  }
  return {slope, std::sqrt(rss / static_cast<double>(n - 2) / sxx)};
}

void finish_decode_stats(SourceStats& stats, const std::vector<std::array<long long, 2>>& pairs) {
  stats.decode_pairs = static_cast<long long>(pairs.size());
  if (pairs.empty()) return;
  const double n = static_cast<double>(pairs.size());
  std::array<double, 2> mean{};
  for (const auto& p : pairs) {
    mean[0] += static_cast<double>(p[0]) / n;
    mean[1] += static_cast<double>(p[1]) / n;
  }
  double s00 = 0.0, s11 = 0.0, s01 = 0.0;
  for (const auto& p : pairs) {
    const double a = static_cast<double>(p[0]) - mean[0];
    const double b = static_cast<double>(p[1]) - mean[1];
    s00 += a * a;
    s11 += b * b;
    s01 += a * b;
  }
  stats.mean_decode_count = mean;
  stats.decode_count_correlation = (s00 > 0.0 && s11 > 0.0) ? s01 / std::sqrt(s00 * s11) : 0.0;
}

}  // namespace

SimResult run(const SimConfig& config) {
  validate(config);
  const bool coded = config.policy == Policy::random_linear_coding;
  const bool saturated = config.mode == Mode::saturated;
  const int K = coded ? config.K : 1;
  const auto side = static_cast<std::size_t>(K + 1);

  std::array<SourceState, 2> state;
  std::array<SourceStats, 2> stats;
  for (Source n : kSources) {
    auto& s = state[index(n)];
    s.access_rng = stream(config.seed, n, kAccess);
    s.coeff_rng = stream(config.seed, n, kCoefficients);
    s.arrival_rng = stream(config.seed, n, kArrivals);
    s.reception_rng = {stream(config.seed, n, kReception), stream(config.seed, n, kReception + 1)};
    if (coded) {
      for (auto& h : stats[index(n)].decode_histogram) h.assign(static_cast<std::size_t>(8 * K + 64), 0);
    }
    if (coded && config.track_occupancy) stats[index(n)].occupancy.assign(side * side * side, 0);
  }

  const long long batch_len = config.slots / config.batches;
  const long long measured = batch_len * config.batches;

  for (long long slot = 0; slot < config.slots; ++slot) {
    // 1. Who has something to send.
    std::array<bool, 2> backlogged{};
    for (Source n : kSources) {
      auto& s = state[index(n)];
      if (!s.in_service && (saturated || s.queue >= K)) {
        s.in_service = true;
        s.service_start = slot;
      }
      backlogged[index(n)] = s.in_service;
      if (coded && config.track_occupancy && s.in_service) {
        const int i = s.received[0].rank(), j = s.received[1].rank();
        const int k = i + j - s.combined.rank();
        ++stats[index(n)].occupancy[(static_cast<std::size_t>(i) * side + j) * side + k];
        ++stats[index(n)].occupancy_slots;
      }
    }

    // 2. Random access.
    std::array<bool, 2> transmits{};
    for (Source n : kSources) {
      const bool draw = bernoulli(state[index(n)].access_rng, config.access.of(n));
      transmits[index(n)] = backlogged[index(n)] && draw;
    }
    const bool collision = transmits[0] && transmits[1];

    // 3-4. Receptions and service progress.
    for (Source n : kSources) {
      auto& s = state[index(n)];
      auto& st = stats[index(n)];
      std::array<bool, 2> heard{};
      for (Destination m : kDestinations) {
        const double q = collision ? config.channel.joint(n, m) : config.channel.solo(n, m);
        const bool ok = bernoulli(s.reception_rng[index(m)], q);
        heard[index(m)] = transmits[index(n)] && ok;
      }
      if (!transmits[index(n)]) continue;

      bool done = false;
      if (!coded) {
        for (int m = 0; m < 2; ++m) s.delivered[m] = s.delivered[m] || heard[m];
        done = s.delivered[0] && s.delivered[1];
      } else {
        const auto v = gf2::random_coefficients(K, s.coeff_rng);
        for (int m = 0; m < 2; ++m) {
          if (!heard[m] || s.received[m].rank() == K) continue;
          ++s.heard[m];
          s.received[m].insert(v);
          s.combined.insert(v);
          if (s.received[m].rank() == K) s.decode_count[m] = s.heard[m];
        }
        done = s.received[0].rank() == K && s.received[1].rank() == K;
      }
      if (!done) continue;

      ++st.services;
      st.departures += K;
      s.batch_departures += K;
      s.service_time_sum += slot + 1 - s.service_start;
      if (!saturated) s.queue -= K;
      s.in_service = false;
      s.delivered = {};
      if (coded) {
        for (int m = 0; m < 2; ++m) {
          auto& hist = st.decode_histogram[m];
          const auto c = static_cast<std::size_t>(s.decode_count[m]);
          if (c >= hist.size()) hist.resize(c + 1, 0);
          ++hist[c];
          s.received[m].clear();
          s.heard[m] = 0;
        }
        s.combined.clear();
        s.decode_pairs.push_back(s.decode_count);
      }
    }

    // 5. Arrivals at the end of the slot.
    if (!saturated) {
      for (Source n : kSources) {
        auto& s = state[index(n)];
        auto& st = stats[index(n)];
        if (bernoulli(s.arrival_rng, config.arrivals.of(n))) {
          ++s.queue;
          ++st.arrivals;
        }
        st.max_queue = std::max(st.max_queue, s.queue);
      }
    }

    for (Source n : kSources) {
      auto& s = state[index(n)];
      s.queue_sum += static_cast<double>(s.queue);
      s.batch_queue_sum += static_cast<double>(s.queue);
    }
    if ((slot + 1) % batch_len == 0 && slot < measured) {
      for (Source n : kSources) {
        auto& s = state[index(n)];
        stats[index(n)].batch_rates.push_back(static_cast<double>(s.batch_departures) /
                                              static_cast<double>(batch_len));
        s.batch_queue_means.push_back(s.batch_queue_sum / static_cast<double>(batch_len));
        s.batch_departures = 0;
        s.batch_queue_sum = 0.0;
      }
    }
  }

  SimResult result;
  result.slots = config.slots;
  result.seed = config.seed;
  for (Source n : kSources) {
    auto& s = state[index(n)];
    auto& st = stats[index(n)];
    st.departure_rate = static_cast<double>(st.departures) / static_cast<double>(config.slots);
    st.std_error = batch_std_error(st.batch_rates);
    st.final_queue = s.queue;
    st.mean_queue = s.queue_sum / static_cast<double>(config.slots);
    st.mean_service_time =
        st.services > 0 ? static_cast<double>(s.service_time_sum) / static_cast<double>(st.services)
                        : 0.0;
    if (!saturated) {
      std::vector<double> x, y;
      const std::size_t half = s.batch_queue_means.size() / 2;
      for (std::size_t b = half; b < s.batch_queue_means.size(); ++b) {
        x.push_back((static_cast<double>(b) + 0.5) * static_cast<double>(batch_len));
        y.push_back(s.batch_queue_means[b]);
      }
      std::tie(st.drift, st.drift_std_error) = ols_slope(x, y);
    }
    if (coded) finish_decode_stats(st, s.decode_pairs);
    result.sources[index(n)] = std::move(st);
  }
  return result;
}

RateEstimate estimate_service_rate(SimConfig config, Source source, int replications,
                                   unsigned jobs) {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  config.mode = Mode::saturated;
  validate(config);
  std::vector<double> rates(static_cast<std::size_t>(replications));
  std::vector<double> batch_se(rates.size());
  parallel_for(rates.size(), jobs, [&](std::size_t r) {
    SimConfig rep = config;
    rep.seed = derive_seed(config.seed, r);
    const auto result = run(rep);
    rates[r] = result.of(source).departure_rate;
    batch_se[r] = result.of(source).std_error;
  });

  RateEstimate est;
  est.replications = replications;
  est.rate = mean_of(rates);
  est.std_error = replications >= 2 ? batch_std_error(rates) : batch_se.front();
  est.ci_low = est.rate - 1.96 * est.std_error;
  est.ci_high = est.rate + 1.96 * est.std_error;
  return est;
}

bool drift_unstable(double drift, double std_error, double sigmas) {
  return drift > 0.0 && drift > sigmas * std_error;
}

StabilityVerdict probe_stability(const ChannelModel& channel, const AccessProbabilities& access,
                                 Policy policy, int K, const ArrivalRates& lambda, long long slots,
                                 std::uint64_t seed) {
  SimConfig config;
  config.channel = channel;
  config.access = access;
  config.arrivals = lambda;
  config.policy = policy;
  config.K = K;
  config.slots = slots;
  config.seed = seed;
  config.mode = Mode::arrivals;
  const auto result = run(config);

  StabilityVerdict verdict;
  verdict.lambda = lambda;
  for (Source n : kSources) {
    const auto& st = result.of(n);
    verdict.drift[index(n)] = st.drift;
    verdict.drift_std_error[index(n)] = st.drift_std_error;
    verdict.max_queue[index(n)] = st.max_queue;
    if (drift_unstable(st.drift, st.drift_std_error)) verdict.stable = false;
  }
  return verdict;
}

std::vector<StabilityVerdict> stability_probe(const ChannelModel& channel,
                                              const AccessProbabilities& access, Policy policy,
                                              int K, std::span<const ArrivalRates> lambda_grid,
                                              long long slots, std::uint64_t seed, unsigned jobs) {
  std::vector<StabilityVerdict> verdicts(lambda_grid.size());
  parallel_for(lambda_grid.size(), jobs, [&](std::size_t i) {
    verdicts[i] = probe_stability(channel, access, policy, K, lambda_grid[i], slots,
                                  derive_seed(seed, i));
  });
  return verdicts;
}

}  // namespace ramcast::sim
