#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "ramcast/channel.hpp"
#include "ramcast/rlc_markov.hpp"
#include "ramcast/service.hpp"

namespace ramcast {

struct RatePoint {
  double x = 0.0;
  double y = 0.0;
};

enum class RegionKind { capacity, stability_retrans, stability_rlc };

std::string_view to_string(RegionKind kind);
// Accepts "capacity", "retrans" and "rlc".
RegionKind parse_region_kind(std::string_view name);

// One grid evaluation: the access probabilities and the rate pair they give.
struct SweepSample {
  AccessProbabilities access;
  RatePoint rate;
};

struct FrontierPoint {
  RatePoint rate;
  AccessProbabilities witness;
};

/// Pareto-maximal rate pairs of a region, sorted by strictly increasing x
/// (and therefore strictly decreasing y).
struct RegionFrontier {
  RegionKind kind = RegionKind::capacity;
  int K = 1;
  double grid_step = 0.01;
  std::vector<FrontierPoint> points;

  double max_rate() const;
};

/// Grid values 0, step, 2 step, ..., 1 over [0, 1]. The last value is
/// always exactly 1. Throws std::invalid_argument unless 0 < step <= 1.
std::vector<double> grid_values(double step);

/// Evaluates `rate_at` on every (p1, p2) grid point, row-major in p1.
/// Points are distributed over `jobs` workers (0 = hardware concurrency);
/// the result order does not depend on `jobs`.
std::vector<SweepSample> sweep_grid(double step, unsigned jobs,
                                    const std::function<RatePoint(const AccessProbabilities&)>& rate_at);

/// Pareto reduction. Among identical rate pairs the lexicographically
/// smallest (p1, p2) witness is kept.
RegionFrontier pareto_frontier(RegionKind kind, int K, double grid_step,
                               std::span<const SweepSample> samples);

// Whether each sample is the recorded witness of some frontier point.
std::vector<bool> frontier_membership(const RegionFrontier& frontier,
                                      std::span<const SweepSample> samples);

/// Upper boundary of the region under the frontier: the piecewise-linear
/// interpolation of the frontier points, flat to the left of the first point
/// and -infinity to the right of the last one.
double frontier_height(const RegionFrontier& frontier, double x);

// Whether `point` lies under the frontier polyline after moving it by `tol`
// toward the origin in both coordinates.
bool frontier_dominates(const RegionFrontier& frontier, RatePoint point, double tol);

/// True iff every point of `inner` is dominated by the polyline of `outer`
/// within `tol`.
bool frontier_contains(const RegionFrontier& outer, const RegionFrontier& inner, double tol);

// 2 * grid_step * max_rate: absorbs discretization of the closure.
double default_containment_tolerance(const RegionFrontier& outer, const RegionFrontier& inner);

/// max over points c of `outer` of 1 - t(c), where t(c) is the largest scale
/// with t c still dominated by `inner`. 0 means `inner` reaches every outer
/// point along its ray from the origin.
double radial_gap(const RegionFrontier& outer, const RegionFrontier& inner);

/// The stable region L1 U L2 at one (p1, p2), given the policy's service
/// rates there.
///
///   L1: lambda2 < mu2b, lambda1 < (lambda2 / mu2b) mu1b + (1 - lambda2 / mu2b) mu1e
///   L2: lambda1 < mu1b, lambda2 < (lambda1 / mu1b) mu2b + (1 - lambda1 / mu1b) mu2e
class StabilityRegionAt {
 public:
  explicit StabilityRegionAt(const ServiceRates& rates);

  bool empty() const { return empty_; }
  bool contains(RatePoint lambda) const;
  bool in_first(RatePoint lambda) const;
  bool in_second(RatePoint lambda) const;

  // Largest lambda1 admitted by L1 at the given lambda2 (0 if lambda2 >= mu2b).
  double lambda1_limit(double lambda2) const;
  double lambda2_limit(double lambda1) const;

  /// Outer boundary of L1 U L2: (0, mu2e) -> (mu1b, mu2b) -> (mu1e, 0).
  std::array<RatePoint, 3> boundary() const;

  const ServiceRates& rates() const { return rates_; }

 private:
  ServiceRates rates_;
  bool empty_ = false;
};

StabilityRegionAt stability_region_at(const ServiceRates& rates);

/// Service rates of the policy at one access point. K is ignored for the
/// retransmission policy.
ServiceRates policy_service_rates(Policy policy, const ChannelModel& channel,
                                  const AccessProbabilities& access, int K,
                                  const RlcOptions& options = {});

struct ThroughputSweep {
  std::vector<SweepSample> samples;  // (mu1b, mu2b) per grid point
  std::vector<ServiceRates> rates;   // full service rates, same order
};

ThroughputSweep throughput_sweep(Policy policy, const ChannelModel& channel, double grid_step,
                                 int K = 1, unsigned jobs = 0, const RlcOptions& options = {});

/// Frontier of the throughput region {lambda1 < mu1b, lambda2 < mu2b} closed
/// over (p1, p2); for two sources it is also the stable-throughput region.
RegionFrontier throughput_frontier(Policy policy, const ChannelModel& channel,
                                   double grid_step = 0.01, int K = 1, unsigned jobs = 0,
                                   const RlcOptions& options = {});

/// Smallest tolerance under which every vertex of every per-point region
/// L(p1, p2) is dominated by the throughput frontier. 0 when the union of the
/// per-point regions lies under the frontier.
double stability_union_excess(const RegionFrontier& frontier, const ThroughputSweep& sweep);

}  // namespace ramcast
