#include "ramcast/checks.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "ramcast/capacity.hpp"
#include "ramcast/csv.hpp"
#include "ramcast/figure.hpp"
#include "ramcast/gf2.hpp"
#include "ramcast/random.hpp"
#include "ramcast/regions.hpp"
#include "ramcast/retrans.hpp"
#include "ramcast/rlc_markov.hpp"
#include "ramcast/sim.hpp"

namespace ramcast::checks {
namespace {

// Pinned tolerances.
constexpr double kEnumerationTol = 1e-15;
constexpr double kSigmas = 3.0;
constexpr double kRowSumTol = 1e-12;
constexpr double kChainRelTol = 0.01;
constexpr double kDominanceSlack = 1e-12;
constexpr double kUnionTol = 1e-9;
constexpr double kCapacityGapLimit = 0.05;
constexpr double kOverheadAtOneTol = 1e-12;
constexpr double kOverheadAt64Limit = 1.05;
constexpr double kBoundaryRelTol = 0.05;

struct NamedChannel {
  std::string name;
  ChannelModel channel;
};

std::vector<NamedChannel> reference_channels() {
  return {{"strong_mpr", strong_mpr_channel()}, {"weak_mpr", weak_mpr_channel()}};
}

constexpr std::array<double, 3> kAccessValues{0.3, 0.5, 1.0};

std::string fmt_num(double v) { return format_number(v); }

class Recorder {
 public:
  Recorder(int criterion, std::string title, const CheckOptions& options, double limit)
      : start_(std::chrono::steady_clock::now()),
        dir_(options.out_dir / fmt::format("criterion{}", criterion)) {
    result_.criterion = criterion;
    result_.title = std::move(title);
    result_.time_limit = limit;
    std::filesystem::create_directories(dir_);
  }

  void check(std::string name, bool passed, std::string detail) {
    result_.parts.push_back({std::move(name), passed, std::move(detail), false});
  }
  void note(std::string name, std::string detail) {
    result_.parts.push_back({std::move(name), true, std::move(detail), true});
  }
  void write(const CsvTable& table, const std::string& name) {
    table.write(dir_ / name);
    result_.outputs.push_back(dir_ / name);
  }

  void track(const std::filesystem::path& path) { result_.outputs.push_back(path); }

  CheckResult finish() {
    result_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (result_.time_limit > 0.0) {
      check("runtime", result_.seconds < result_.time_limit,
            fmt::format("{:.1f} s (limit {:.0f} s)", result_.seconds, result_.time_limit));
    }
    return result_;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::filesystem::path dir_;
  CheckResult result_;
};

// Rank-K test independent of elimination: a K x j matrix has full row rank
// iff no nonzero x has x^T M = 0.
bool full_row_rank_by_search(int K, const std::vector<gf2::CoefficientVector>& columns) {
  for (gf2::CoefficientVector x = 1; x < (gf2::CoefficientVector{1} << K); ++x) {
    bool annihilates = true;
    for (auto c : columns) {
      if (std::popcount(x & c) % 2 == 1) {
        annihilates = false;
        break;
      }
    }
    if (annihilates) return false;
  }
  return true;
}

CheckResult rank_enumeration(const CheckOptions& options) {
  Recorder rec(1, "rank distribution matches exhaustive enumeration", options, 60.0);
  CsvTable table({"K", "j", "full_rank", "total", "rank_cdf", "enumerated", "abs_error"});
  double worst = 0.0;
  long long elimination_mismatches = 0;
  for (int K = 1; K <= 3; ++K) {
    for (int j = 0; j <= 6; ++j) {
      const int bits = K * j;
      const std::uint64_t total = std::uint64_t{1} << bits;
      std::uint64_t full = 0;
      std::vector<gf2::CoefficientVector> columns(static_cast<std::size_t>(j));
      for (std::uint64_t m = 0; m < total; ++m) {
        for (int c = 0; c < j; ++c) columns[c] = (m >> (c * K)) & gf2::low_mask(K);
        const bool oracle = full_row_rank_by_search(K, columns);
        if (oracle) ++full;
        if ((gf2::rank(gf2::BinaryMatrix(K, columns)) == K) != oracle) ++elimination_mismatches;
      }
      const double enumerated = std::ldexp(static_cast<double>(full), -bits);
      const double formula = gf2::rank_cdf(K, j);
      const double err = std::abs(formula - enumerated);
      worst = std::max(worst, err);
      table.add_row({format_number(K), format_number(j), format_number(static_cast<long long>(full)),
                     format_number(static_cast<long long>(total)), fmt_num(formula),
                     fmt_num(enumerated), fmt_num(err)});
    }
  }
  rec.write(table, "rank_cdf.csv");
  rec.check("formula vs enumeration", worst < kEnumerationTol,
            fmt::format("max |error| = {} over K <= 3, j <= 6 (tol {})", worst, kEnumerationTol));
  rec.check("elimination rank vs nullspace search", elimination_mismatches == 0,
            fmt::format("{} disagreements", elimination_mismatches));
  return rec.finish();
}

sim::SimConfig saturated_config(const ChannelModel& channel, AccessProbabilities access,
                                Policy policy, int K, long long slots, std::uint64_t seed) {
  sim::SimConfig config;
  config.channel = channel;
  config.access = access;
  config.policy = policy;
  config.K = K;
  config.slots = slots;
  config.seed = seed;
  config.mode = sim::Mode::saturated;
  return config;
}

CheckResult retrans_oracle(const CheckOptions& options) {
  Recorder rec(2, "retransmission rates match saturated simulation", options, 120.0);
  const long long slots = options.quick ? 200'000 : 1'000'000;
  CsvTable table({"channel", "p1", "p2", "source", "analytic", "simulated", "std_error", "z"});
  int misses = 0, comparisons = 0, empty_mismatches = 0;
  double worst_z = 0.0;
  std::uint64_t point = 0;
  for (const auto& [name, channel] : reference_channels()) {
    for (double p1 : kAccessValues) {
      for (double p2 : kAccessValues) {
        const AccessProbabilities access{p1, p2};
        const auto rates = retrans_service_rates(channel, access);
        const auto result = sim::run(saturated_config(channel, access, Policy::retransmission, 1,
                                                      slots, derive_seed(options.seed, 200 + point++)));
        for (Source n : kSources) {
          const auto& st = result.of(n);
          const double z = (st.departure_rate - rates.backlogged(n)) / st.std_error;
          ++comparisons;
          if (!(std::abs(z) <= kSigmas)) ++misses;
          worst_z = std::max(worst_z, std::abs(z));
          table.add_row({name, fmt_num(p1), fmt_num(p2), format_number(index(n) + 1),
                         fmt_num(rates.backlogged(n)), fmt_num(st.departure_rate),
                         fmt_num(st.std_error), fmt_num(z)});

          AccessProbabilities alone = access;
          (n == Source::one ? alone.p2 : alone.p1) = 0.0;
          const double reference = retrans_service_rates(channel, alone).backlogged(n);
          if (std::abs(rates.empty(n) - reference) >
              4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, reference)) {
            ++empty_mismatches;
          }
        }
      }
    }
  }
  rec.write(table, "retrans_vs_sim.csv");
  rec.check("analytic vs simulation", misses == 0,
            fmt::format("{} of {} comparisons beyond {} SE (max |z| = {:.2f}, {} slots)", misses,
                        comparisons, kSigmas, worst_z, slots));
  rec.check("empty rate equals backlogged rate at p_other = 0", empty_mismatches == 0,
            fmt::format("{} mismatches", empty_mismatches));
  return rec.finish();
}

CheckResult chain_oracle(const CheckOptions& options) {
  Recorder rec(3, "coding chain matches saturated simulation", options, 300.0);
  // The 1% test must be resolvable at the smallest rate (about 0.02
  // packets/slot): 5e6 slots put 1% at more than 4 standard errors there.
  const long long slots = options.quick ? 2'000'000 : 5'000'000;
  const std::vector<double> access_values = options.quick
                                                ? std::vector<double>{0.5, 1.0}
                                                : std::vector<double>(kAccessValues.begin(),
                                                                      kAccessValues.end());
  CsvTable table({"channel", "p1", "p2", "K", "source", "rule", "analytic", "simulated",
                  "std_error", "z", "rel_delta"});
  CsvTable residuals({"channel", "p1", "p2", "K", "source", "other", "rule", "interior",
                      "boundary_j", "boundary_i", "renewal"});
  int misses = 0, comparisons = 0, row_failures = 0, rows_checked = 0;
  int joint_slot_misses = 0;
  double worst_z = 0.0, worst_rel = 0.0, worst_joint_slot_rel = 0.0, worst_row = 0.0;
  std::uint64_t point = 0;

  for (const auto& [name, channel] : reference_channels()) {
    for (double p1 : access_values) {
      for (double p2 : access_values) {
        const AccessProbabilities access{p1, p2};
        for (int K : {1, 2, 4}) {
          const auto result =
              sim::run(saturated_config(channel, access, Policy::random_linear_coding, K, slots,
                                        derive_seed(options.seed, 300 + point++)));
          for (Source n : kSources) {
            const auto& st = result.of(n);
            for (auto rule : {TransitionRule::subspace, TransitionRule::joint_slot}) {
              const double analytic = rlc_service_rate(channel, access, n, true, K, {rule});
              const double z = (st.departure_rate - analytic) / st.std_error;
              const double rel = std::abs(st.departure_rate - analytic) / analytic;
              const bool ok = std::abs(z) <= kSigmas && rel <= kChainRelTol;
              if (rule == TransitionRule::subspace) {
                ++comparisons;
                if (!ok) ++misses;
                worst_z = std::max(worst_z, std::abs(z));
                worst_rel = std::max(worst_rel, rel);
              } else {
                if (!ok) ++joint_slot_misses;
                worst_joint_slot_rel = std::max(worst_joint_slot_rel, rel);
              }
              table.add_row({name, fmt_num(p1), fmt_num(p2), format_number(K),
                             format_number(index(n) + 1), std::string(to_string(rule)),
                             fmt_num(analytic), fmt_num(st.departure_rate), fmt_num(st.std_error),
                             fmt_num(z), fmt_num(rel)});

              for (bool other : {true, false}) {
                const auto chain = build_chain(channel, access, n, other, K, rule);
                const auto r = row_residuals(chain);
                ++rows_checked;
                worst_row = std::max(worst_row, r.max());
                if (!(r.max() <= kRowSumTol)) ++row_failures;
                residuals.add_row({name, fmt_num(p1), fmt_num(p2), format_number(K),
                                   format_number(index(n) + 1), other ? "backlogged" : "empty",
                                   std::string(to_string(rule)), fmt_num(r.interior),
                                   fmt_num(r.dest2_complete), fmt_num(r.dest1_complete),
                                   fmt_num(r.renewal)});
              }
            }
          }
        }
      }
    }
  }
  rec.write(table, "chain_vs_sim.csv");
  rec.write(residuals, "row_residuals.csv");
  rec.check("subspace chain vs simulation", misses == 0,
            fmt::format("{} of {} comparisons outside {} SE or {}% (max |z| = {:.2f}, max rel = "
                        "{:.4f}, {} slots)",
                        misses, comparisons, kSigmas, 100 * kChainRelTol, worst_z, worst_rel, slots));
  rec.check("row sums", row_failures == 0,
            fmt::format("{} of {} chains (both rules) have a row off by more than {} (max {})",
                        row_failures, rows_checked, kRowSumTol, worst_row));
  rec.note("joint_slot table vs simulation",
           fmt::format("{} of {} comparisons outside {} SE or {}% (max rel = {:.4f}); its rows "
                       "sum to 1, the gap comes from how k is advanced",
                       joint_slot_misses, comparisons, kSigmas, 100 * kChainRelTol,
                       worst_joint_slot_rel));
  return rec.finish();
}

CheckResult capacity_dominance(const CheckOptions& options) {
  Recorder rec(4, "service rates never exceed the capacity bound", options, 0.0);
  const double step = 0.05;
  const std::vector<int> Ks = options.quick ? std::vector<int>{1, 4} : std::vector<int>{1, 4, 16};
  CsvTable table({"channel", "policy", "K", "max_excess", "max_gap"});
  int violations = 0;
  bool gaps_positive = true;
  std::string detail;
  for (const auto& [name, channel] : reference_channels()) {
    std::vector<std::pair<Policy, int>> runs{{Policy::retransmission, 1}};
    for (int K : Ks) runs.emplace_back(Policy::random_linear_coding, K);
    for (const auto& [policy, K] : runs) {
      const auto sweep = throughput_sweep(policy, channel, step, K, options.jobs);
      double max_excess = -std::numeric_limits<double>::infinity();
      double max_gap = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < sweep.samples.size(); ++s) {
        const auto bound = rate_bounds(channel, sweep.samples[s].access);
        for (Source n : kSources) {
          const double diff = sweep.rates[s].backlogged(n) - bound.of(n);
          if (diff > kDominanceSlack) ++violations;
          max_excess = std::max(max_excess, diff);
          max_gap = std::max(max_gap, -diff);
        }
      }
      if (!(max_gap > 0.0)) gaps_positive = false;
      table.add_row({name, std::string(to_string(policy)), format_number(K), fmt_num(max_excess),
                     fmt_num(max_gap)});
    }
  }
  rec.write(table, "dominance.csv");
  rec.check("rate <= bound + 1e-12 on the 0.05 grid", violations == 0,
            fmt::format("{} violations", violations));
  rec.check("bound strictly larger somewhere", gaps_positive,
            "max (bound - rate) > 0 for every policy and channel");
  return rec.finish();
}

// Largest (capacity - rlc) / capacity over capacity frontier abscissae that
// the rlc frontier also covers.
double matched_vertical_gap(const RegionFrontier& capacity, const RegionFrontier& inner,
                            CsvTable* table) {
  double worst = 0.0;
  if (inner.points.empty()) return std::numeric_limits<double>::infinity();
  const double reach = inner.points.back().rate.x;
  for (const auto& p : capacity.points) {
    if (p.rate.x > reach || !(p.rate.y > 0.0)) continue;
    const double inner_y = frontier_height(inner, p.rate.x);
    const double gap = (p.rate.y - inner_y) / p.rate.y;
    worst = std::max(worst, gap);
    if (table) table->add_row({fmt_num(p.rate.x), fmt_num(p.rate.y), fmt_num(inner_y), fmt_num(gap)});
  }
  return worst;
}

CheckResult figure_reproduction(const CheckOptions& options) {
  Recorder rec(5, "rate-region figures: containment / nesting / gap / crossover", options, 900.0);
  FigureOptions fo;
  fo.step = options.quick ? 0.05 : 0.01;
  fo.K_list = options.quick ? std::vector<int>{1, 2, 5, 10} : std::vector<int>{1, 2, 5, 10, 50};
  fo.jobs = options.jobs;

  CsvTable summary({"channel", "inner", "K", "contained", "strict", "tolerance"});
  bool contained = true, strict = true, nested = true, union_ok = true, crossover = false;
  std::string crossover_detail = "retransmission frontier never leaves any coding frontier";
  double gap = std::numeric_limits<double>::quiet_NaN();
  double radial = gap, normalized = gap;

  for (const auto& [name, channel] : reference_channels()) {
    const auto fig = compute_figure(channel, name, fo);
    for (const auto& path : write_figure(fig, options.out_dir / "criterion5" / name)) {
      if (path.extension() == ".csv") rec.track(path);
    }
    CsvTable frontiers({"kind", "K", "p1", "p2", "x", "y"});
    auto append = [&frontiers](const RegionFrontier& f) {
      const auto table = frontier_table(f);
      for (const auto& row : table.rows()) frontiers.add_row(row);
    };
    append(fig.capacity);
    append(fig.retrans);
    for (const auto& f : fig.rlc) append(f);
    rec.write(frontiers, name + "_frontiers.csv");

    auto record = [&](const RegionFrontier& inner, bool need_strict) {
      const double tol = default_containment_tolerance(fig.capacity, inner);
      const bool in = frontier_contains(fig.capacity, inner, tol);
      const bool proper = !frontier_contains(inner, fig.capacity, tol);
      contained = contained && in;
      if (need_strict) strict = strict && proper;
      summary.add_row({name, std::string(to_string(inner.kind)), format_number(inner.K),
                       in ? "1" : "0", proper ? "1" : "0", fmt_num(tol)});
    };
    record(fig.retrans, true);
    for (std::size_t i = 0; i < fig.rlc.size(); ++i) record(fig.rlc[i], i + 1 == fig.rlc.size());

    for (std::size_t i = 1; i < fig.rlc.size(); ++i) {
      const double tol = default_containment_tolerance(fig.rlc[i], fig.rlc[i - 1]);
      if (!frontier_contains(fig.rlc[i], fig.rlc[i - 1], tol)) nested = false;
    }

    union_ok = union_ok && fig.retrans_union_excess <= kUnionTol;
    for (double e : fig.rlc_union_excess) union_ok = union_ok && e <= kUnionTol;

    if (name == "strong_mpr") {
      // Report the retransmission point that rises highest above a coding frontier.
      double best = 0.0;
      for (const auto& f : fig.rlc) {
        for (const auto& p : fig.retrans.points) {
          if (frontier_dominates(f, p.rate, 0.0)) continue;
          const double excess = p.rate.y - frontier_height(f, p.rate.x);
          if (!crossover || excess > best) {
            best = excess;
            crossover_detail = fmt::format(
                "retransmission point ({:.4f}, {:.4f}) at p = ({}, {}) lies outside the K = {} "
                "coding frontier",
                p.rate.x, p.rate.y, p.witness.p1, p.witness.p2, f.K);
          }
          crossover = true;
        }
      }
      if (!options.quick) {
        CsvTable gaps({"x", "capacity_y", "rlc_y", "rel_gap"});
        gap = matched_vertical_gap(fig.capacity, fig.rlc.back(), &gaps);
        radial = radial_gap(fig.capacity, fig.rlc.back());
        double worst_abs = 0.0;
        for (const auto& row : gaps.rows()) {
          worst_abs = std::max(worst_abs, parse_number(row[1]) - parse_number(row[2]));
        }
        normalized = worst_abs / fig.capacity.max_rate();
        rec.write(gaps, "strong_mpr_capacity_gap.csv");
      }
    }
  }
  rec.write(summary, "containment.csv");

  rec.check("capacity contains every policy frontier", contained,
            "within 2 * step * max rate; see containment.csv");
  rec.check("capacity strictly larger than retransmission and largest-K coding", strict,
            "some capacity point lies outside each inner frontier");
  rec.check("coding frontiers nested in K", nested, "within grid tolerance");
  rec.check("per-point stable regions under the throughput frontier", union_ok,
            fmt::format("tolerance {}", kUnionTol));
  if (options.quick) {
    rec.note("capacity gap at K = 50", "needs the K = 50 sweep; run without --quick");
  } else {
    rec.check("capacity gap at K = 50 on strong_mpr <= 5%", gap <= kCapacityGapLimit,
              fmt::format("max relative vertical gap {:.4f} at matched abscissae (radial gap "
                          "{:.4f}, gap / max capacity rate {:.4f})",
                          gap, radial, normalized));
  }
  rec.check("retransmission beats small-K coding somewhere", crossover, crossover_detail);
  return rec.finish();
}

CheckResult overhead_limit(const CheckOptions& options) {
  Recorder rec(6, "decode overhead E[N]/K", options, 10.0);
  CsvTable table({"K", "expected_n", "ratio"});
  bool bounded = true;
  double at_one = 0.0, at_64 = 0.0;
  for (int K = 1; K <= gf2::kMaxGenerationSize; ++K) {
    const double en = gf2::expected_decode_count(K);
    const double ratio = en / K;
    if (!(ratio >= 1.0 && ratio <= 2.0)) bounded = false;
    if (K == 1) at_one = ratio;
    if (K == 64) at_64 = ratio;
    table.add_row({format_number(K), fmt_num(en), fmt_num(ratio)});
  }
  rec.write(table, "overhead.csv");
  rec.check("K = 1 gives 2", std::abs(at_one - 2.0) <= kOverheadAtOneTol,
            fmt::format("E[N] = {}", at_one));
  rec.check("1 <= E[N]/K <= 2 for K <= 64", bounded, "");
  rec.check("E[N]/K <= 1.05 at K = 64", at_64 <= kOverheadAt64Limit, fmt::format("{}", at_64));
  return rec.finish();
}

CheckResult stability_boundary(const CheckOptions& options) {
  Recorder rec(7, "simulated stability boundary matches the predicted one", options, 300.0);
  const auto channel = strong_mpr_channel();
  const AccessProbabilities access{0.5, 0.5};
  const auto rates = retrans_service_rates(channel, access);
  const StabilityRegionAt region(rates);
  const double lambda2 = 0.8 * rates.mu_b[1];
  const double predicted = region.lambda1_limit(lambda2);
  const long long slots = options.quick ? 200'000 : 1'000'000;
  const int iterations = options.quick ? 6 : 10;

  CsvTable table({"step", "lambda1", "lambda2", "stable", "drift1", "drift_se1", "drift2",
                  "drift_se2", "max_queue1", "max_queue2"});
  std::uint64_t probe = 0;
  auto run_probe = [&](double lambda1, int step) {
    const auto v = sim::probe_stability(channel, access, Policy::retransmission, 1,
                                        {lambda1, lambda2}, slots,
                                        derive_seed(options.seed, 700 + probe++));
    table.add_row({format_number(step), fmt_num(lambda1), fmt_num(lambda2), v.stable ? "1" : "0",
                   fmt_num(v.drift[0]), fmt_num(v.drift_std_error[0]), fmt_num(v.drift[1]),
                   fmt_num(v.drift_std_error[1]), format_number(v.max_queue[0]),
                   format_number(v.max_queue[1])});
    return v.stable;
  };

  double lo = 0.5 * predicted, hi = std::min(1.0, 1.5 * predicted);
  const bool lo_stable = run_probe(lo, -2);
  const bool hi_unstable = !run_probe(hi, -1);
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (run_probe(mid, it) ? lo : hi) = mid;
  }
  const double found = 0.5 * (lo + hi);
  const double rel = std::abs(found - predicted) / predicted;
  rec.write(table, "bisection.csv");
  rec.check("bracket endpoints", lo_stable && hi_unstable,
            fmt::format("0.5x prediction stable: {}, 1.5x prediction unstable: {}", lo_stable,
                        hi_unstable));
  rec.check("boundary within 5% of prediction", rel <= kBoundaryRelTol,
            fmt::format("simulated lambda1* = {:.5f}, predicted {:.5f} (rel {:.4f}, lambda2 = "
                        "{:.5f}, {} slots per probe)",
                        found, predicted, rel, lambda2, slots));
  return rec.finish();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CheckResult determinism(const CheckOptions& options) {
  Recorder rec(8, "repeated check runs give byte-identical CSVs", options, 0.0);
  CsvTable table({"criterion", "file", "bytes", "identical"});
  int files = 0, differing = 0;
  for (int c = 1; c < 8; ++c) {
    CheckOptions a = options, b = options;
    a.out_dir = options.out_dir / "criterion8" / "first";
    b.out_dir = options.out_dir / "criterion8" / "second";
    const auto ra = run_criterion(c, a);
    const auto rb = run_criterion(c, b);
    if (ra.outputs.size() != rb.outputs.size()) ++differing;
    for (std::size_t f = 0; f < std::min(ra.outputs.size(), rb.outputs.size()); ++f) {
      const auto first = slurp(ra.outputs[f]);
      const bool same = first == slurp(rb.outputs[f]);
      ++files;
      if (!same) ++differing;
      table.add_row({format_number(c), ra.outputs[f].filename().string(),
                     format_number(static_cast<long long>(first.size())), same ? "1" : "0"});
    }
  }
  rec.write(table, "determinism.csv");
  rec.check("identical outputs", differing == 0,
            fmt::format("{} of {} CSV files differ between two runs", differing, files));
  return rec.finish();
}

}  // namespace

bool CheckResult::passed() const {
  return std::all_of(parts.begin(), parts.end(),
                     [](const SubCheck& p) { return p.informational || p.passed; });
}

CheckResult run_criterion(int criterion, const CheckOptions& options) {
  switch (criterion) {
    case 1: return rank_enumeration(options);
    case 2: return retrans_oracle(options);
    case 3: return chain_oracle(options);
    case 4: return capacity_dominance(options);
    case 5: return figure_reproduction(options);
    case 6: return overhead_limit(options);
    case 7: return stability_boundary(options);
    case 8: return determinism(options);
    default:
      throw std::invalid_argument(
          fmt::format("criterion {} does not exist (expected 1..{})", criterion, kCriterionCount));
  }
}

std::string format_result(const CheckResult& result) {
  std::string out = fmt::format("{} criterion {}: {} ({:.1f} s)\n", result.passed() ? "PASS" : "FAIL",
                                result.criterion, result.title, result.seconds);
  for (const auto& part : result.parts) {
    out += fmt::format("    [{}] {}{}{}\n", part.informational ? "info" : part.passed ? "ok" : "FAIL",
                       part.name, part.detail.empty() ? "" : ": ", part.detail);
  }
  return out;
}

}  // namespace ramcast::checks
