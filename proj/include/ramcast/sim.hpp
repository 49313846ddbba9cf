#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ramcast/channel.hpp"
#include "ramcast/rlc_markov.hpp"
#include "ramcast/service.hpp"

namespace ramcast::sim {

// `saturated` keeps both sources permanently backlogged (an empty source
// sends a dummy packet or generation); `arrivals` feeds each queue with
// Bernoulli arrivals.
enum class Mode { saturated, arrivals };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

struct SimConfig {
  ChannelModel channel;
  AccessProbabilities access;
  ArrivalRates arrivals;
  Policy policy = Policy::retransmission;
  int K = 1;
  long long slots = 1'000'000;
  std::uint64_t seed = 42;
  Mode mode = Mode::saturated;
  int batches = 50;
  // Count (i, j, k) at the start of each slot (random linear coding only).
  bool track_occupancy = false;
};

// Throws std::invalid_argument on an invalid config.
void validate(const SimConfig& config);

struct SourceStats {
  long long arrivals = 0;
  long long departures = 0;  // packets
  long long services = 0;    // completed packets (retransmission) or generations
  double departure_rate = 0.0;
  double std_error = 0.0;  // batch means
  std::vector<double> batch_rates;

  double mean_queue = 0.0;
  long long max_queue = 0;
  long long final_queue = 0;
  // OLS slope (packets/slot) of batch-mean queue length over the second half
  // of the run, and its standard error. Arrivals mode only.
  double drift = 0.0;
  double drift_std_error = 0.0;

  double mean_service_time = 0.0;

  // Random linear coding only. decode_histogram[m][n] counts generations in
  // which destination m needed exactly n received coded packets.
  std::array<std::vector<long long>, 2> decode_histogram;
  std::array<double, 2> mean_decode_count{};
  double decode_count_correlation = 0.0;
  long long decode_pairs = 0;

  // occupancy[(i * (K + 1) + j) * (K + 1) + k]: slots that began in state
  // (i, j, k), with k the dimension of the intersection of the two received
  // subspaces.
  std::vector<long long> occupancy;
  long long occupancy_slots = 0;
};

struct SimResult {
  std::array<SourceStats, 2> sources;
  long long slots = 0;
  std::uint64_t seed = 0;

  const SourceStats& of(Source n) const { return sources[index(n)]; }
};

/// Slot-level simulation of the two-source, two-destination system.
/// Deterministic for a given config.
SimResult run(const SimConfig& config);

struct RateEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;  // 95% normal interval
  double ci_high = 0.0;
  int replications = 0;
};

/// Saturated departure rate of `source` averaged over independent
/// replications. Replication r runs with seed derive_seed(config.seed, r).
RateEstimate estimate_service_rate(SimConfig config, Source source, int replications,
                                   unsigned jobs = 0);

struct StabilityVerdict {
  ArrivalRates lambda;
  bool stable = true;
  std::array<double, 2> drift{};
  std::array<double, 2> drift_std_error{};
  std::array<long long, 2> max_queue{};
};

// A queue is flagged unstable when its drift is positive and exceeds
// `sigmas` standard errors.
bool drift_unstable(double drift, double std_error, double sigmas = 3.0);

StabilityVerdict probe_stability(const ChannelModel& channel, const AccessProbabilities& access,
                                 Policy policy, int K, const ArrivalRates& lambda, long long slots,
                                 std::uint64_t seed);

/// Runs probe_stability on every arrival pair; point i uses seed
/// derive_seed(seed, i).
std::vector<StabilityVerdict> stability_probe(const ChannelModel& channel,
                                              const AccessProbabilities& access, Policy policy,
                                              int K, std::span<const ArrivalRates> lambda_grid,
                                              long long slots, std::uint64_t seed,
                                              unsigned jobs = 0);

}  // namespace ramcast::sim
