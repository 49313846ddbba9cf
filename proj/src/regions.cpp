#include "ramcast/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "ramcast/parallel.hpp"
#include "ramcast/retrans.hpp"

namespace ramcast {

std::string_view to_string(Policy policy) {
  return policy == Policy::retransmission ? "retrans" : "rlc";
}

Policy parse_policy(std::string_view name) {
  if (name == "retrans") return Policy::retransmission;
  if (name == "rlc") return Policy::random_linear_coding;
  throw std::invalid_argument(fmt::format("unknown policy '{}' (expected retrans|rlc)", name));
}

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::capacity: return "capacity";
    case RegionKind::stability_retrans: return "retrans";
    case RegionKind::stability_rlc: return "rlc";
  }
  return "?";
}

RegionKind parse_region_kind(std::string_view name) {
  if (name == "capacity") return RegionKind::capacity;
  if (name == "retrans") return RegionKind::stability_retrans;
  if (name == "rlc") return RegionKind::stability_rlc;
  throw std::invalid_argument(
      fmt::format("unknown region kind '{}' (expected capacity|retrans|rlc)", name));
}

double RegionFrontier::max_rate() const {
  double best = 0.0;
  for (const auto& p : points) best = std::max({best, p.rate.x, p.rate.y});
  return best;
}

std::vector<double> grid_values(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw std::invalid_argument(fmt::format("grid step {} must lie in (0, 1]", step));
  }
  const double cells = 1.0 / step;
  const auto n = static_cast<long long>(std::llround(cells));
  std::vector<double> values;
  if (std::abs(cells - static_cast<double>(n)) < 1e-9) {
    values.reserve(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i <= n; ++i) values.push_back(static_cast<double>(i) / static_cast<double>(n));
  } else {
    for (long long i = 0; static_cast<double>(i) * step < 1.0; ++i) {
      values.push_back(static_cast<double>(i) * step);
    }
    values.push_back(1.0);
  }
  return values;
}

std::vector<SweepSample> sweep_grid(
    double step, unsigned jobs, const std::function<RatePoint(const AccessProbabilities&)>& rate_at) {
  const auto values = grid_values(step);
  const std::size_t n = values.size();
  std::vector<SweepSample> samples(n * n);
  parallel_for(samples.size(), jobs, [&](std::size_t idx) {
    const AccessProbabilities access{values[idx / n], values[idx % n]};
    samples[idx] = {access, rate_at(access)};
  });
  return samples;
}

RegionFrontier pareto_frontier(RegionKind kind, int K, double grid_step,
                               std::span<const SweepSample> samples) {
  std::vector<const SweepSample*> order;
  order.reserve(samples.size());
  for (const auto& s : samples) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const SweepSample* a, const SweepSample* b) {
    if (a->rate.x != b->rate.x) return a->rate.x > b->rate.x;
    if (a->rate.y != b->rate.y) return a->rate.y > b->rate.y;
    if (a->access.p1 != b->access.p1) return a->access.p1 < b->access.p1;
    return a->access.p2 < b->access.p2;
  });

  RegionFrontier frontier{kind, K, grid_step, {}};
  double best_y = -std::numeric_limits<double>::infinity();
  for (const auto* s : order) {
    if (s->rate.y > best_y) {
      frontier.points.push_back({s->rate, s->access});
      best_y = s->rate.y;
    }
  }
  std::reverse(frontier.points.begin(), frontier.points.end());
  return frontier;
}

std::vector<bool> frontier_membership(const RegionFrontier& frontier,
                                      std::span<const SweepSample> samples) {
  std::vector<bool> member(samples.size(), false);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (const auto& p : frontier.points) {
      if (p.witness == samples[s].access) {
        member[s] = true;
        break;
      }
    }
  }
  return member;
}

double frontier_height(const RegionFrontier& frontier, double x) {
  const auto& pts = frontier.points;
  constexpr double kOutside = -std::numeric_limits<double>::infinity();
  if (pts.empty() || x > pts.back().rate.x) return kOutside;
  if (x <= pts.front().rate.x) return pts.front().rate.y;
  // First point with rate.x >= x; its predecessor has rate.x < x.
  const auto hi = std::lower_bound(pts.begin(), pts.end(), x,
                                   [](const FrontierPoint& p, double v) { return p.rate.x < v; });
  const auto lo = hi - 1;
  const double t = (x - lo->rate.x) / (hi->rate.x - lo->rate.x);
  return lo->rate.y + t * (hi->rate.y - lo->rate.y);
}

bool frontier_dominates(const RegionFrontier& frontier, RatePoint point, double tol) {
  return point.y <= frontier_height(frontier, std::max(0.0, point.x - tol)) + tol;
}

bool frontier_contains(const RegionFrontier& outer, const RegionFrontier& inner, double tol) {
  return std::all_of(inner.points.begin(), inner.points.end(), [&](const FrontierPoint& p) {
    return frontier_dominates(outer, p.rate, tol);
  });
}

double default_containment_tolerance(const RegionFrontier& outer, const RegionFrontier& inner) {
  return 2.0 * std::max(outer.grid_step, inner.grid_step) *
         std::max(outer.max_rate(), inner.max_rate());
}

double radial_gap(const RegionFrontier& outer, const RegionFrontier& inner) {
  double gap = 0.0;
  for (const auto& p : outer.points) {
    if (p.rate.x <= 0.0 && p.rate.y <= 0.0) continue;
    const auto scaled_inside = [&](double t) {
      return frontier_dominates(inner, {t * p.rate.x, t * p.rate.y}, 0.0);
    };
    if (scaled_inside(1.0)) continue;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (scaled_inside(mid) ? lo : hi) = mid;
    }
    gap = std::max(gap, 1.0 - lo);
  }
  return gap;
}

StabilityRegionAt::StabilityRegionAt(const ServiceRates& rates)
    : rates_(rates), empty_(!(rates.mu_b[0] > 0.0) && !(rates.mu_b[1] > 0.0)) {}

double StabilityRegionAt::lambda1_limit(double lambda2) const {
  const double mu2b = rates_.mu_b[1];
  if (!(lambda2 < mu2b)) return 0.0;
  const double share = lambda2 / mu2b;
  return share * rates_.mu_b[0] + (1.0 - share) * rates_.mu_e[0];
}

double StabilityRegionAt::lambda2_limit(double lambda1) const {
  const double mu1b = rates_.mu_b[0];
  if (!(lambda1 < mu1b)) return 0.0;
  const double share = lambda1 / mu1b;
  return share * rates_.mu_b[1] + (1.0 - share) * rates_.mu_e[1];
}

bool StabilityRegionAt::in_first(RatePoint lambda) const {
  return lambda.y < rates_.mu_b[1] && lambda.x < lambda1_limit(lambda.y);
}

bool StabilityRegionAt::in_second(RatePoint lambda) const {
  return lambda.x < rates_.mu_b[0] && lambda.y < lambda2_limit(lambda.x);
}

bool StabilityRegionAt::contains(RatePoint lambda) const {
  return in_first(lambda) || in_second(lambda);
}

std::array<RatePoint, 3> StabilityRegionAt::boundary() const {
  return {RatePoint{0.0, rates_.mu_e[1]}, RatePoint{rates_.mu_b[0], rates_.mu_b[1]},
          RatePoint{rates_.mu_e[0], 0.0}};
}

StabilityRegionAt stability_region_at(const ServiceRates& rates) { return StabilityRegionAt(rates); }

ServiceRates policy_service_rates(Policy policy, const ChannelModel& channel,
                                  const AccessProbabilities& access, int K,
                                  const RlcOptions& options) {
  if (policy == Policy::retransmission) return retrans_service_rates(channel, access);
  return rlc_service_rates(channel, access, K, options);
}

ThroughputSweep throughput_sweep(Policy policy, const ChannelModel& channel, double grid_step,
                                 int K, unsigned jobs, const RlcOptions& options) {
  const auto values = grid_values(grid_step);
  const std::size_t n = values.size();
  ThroughputSweep sweep;
  sweep.samples.resize(n * n);
  sweep.rates.resize(n * n);

  // Only the backlogged rates are solved per point. The empty-queue rate of
  // a source equals its backlogged rate with the other access probability
  // set to 0, which is itself a grid point (p = 0 is exact on the grid).
  parallel_for(n * n, jobs, [&](std::size_t idx) {
    const AccessProbabilities access{values[idx / n], values[idx % n]};
    auto& rates = sweep.rates[idx];
    rates.policy = policy;
    rates.K = policy == Policy::retransmission ? 1 : K;
    if (policy == Policy::retransmission) {
      rates = retrans_service_rates(channel, access);
    } else {
      for (Source s : kSources) {
        rates.mu_b[index(s)] = rlc_service_rate(channel, access, s, true, K, options);
      }
    }
    sweep.samples[idx] = {access, {rates.mu_b[0], rates.mu_b[1]}};
  });

  if (policy == Policy::random_linear_coding) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        auto& rates = sweep.rates[a * n + b];
        rates.mu_e[0] = sweep.rates[a * n].mu_b[0];
        rates.mu_e[1] = sweep.rates[b].mu_b[1];
      }
    }
  }
  return sweep;
}

namespace {

RegionKind kind_of(Policy policy) {
  return policy == Policy::retransmission ? RegionKind::stability_retrans
                                          : RegionKind::stability_rlc;
}

}  // namespace

RegionFrontier throughput_frontier(Policy policy, const ChannelModel& channel, double grid_step,
                                   int K, unsigned jobs, const RlcOptions& options) {
  const auto sweep = throughput_sweep(policy, channel, grid_step, K, jobs, options);
  return pareto_frontier(kind_of(policy), policy == Policy::retransmission ? 1 : K, grid_step,
                         sweep.samples);
}

double stability_union_excess(const RegionFrontier& frontier, const ThroughputSweep& sweep) {
  double excess = 0.0;
  for (const auto& rates : sweep.rates) {
    for (const auto& v : StabilityRegionAt(rates).boundary()) {
      if (frontier_dominates(frontier, v, 0.0)) continue;
      // Smallest tolerance that brings the vertex under the frontier.
      double lo = 0.0, hi = std::max({v.x, v.y, 1.0});
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (frontier_dominates(frontier, v, mid) ? hi : lo) = mid;
      }
      excess = std::max(excess, hi);
    }
  }
  return excess;
}

}  // namespace ramcast
