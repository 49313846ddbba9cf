#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "manifest.hpp"
#include "ramcast/capacity.hpp"
#include "ramcast/channel.hpp"
#include "ramcast/checks.hpp"
#include "ramcast/csv.hpp"
#include "ramcast/figure.hpp"
#include "ramcast/gf2.hpp"
#include "ramcast/random.hpp"
#include "ramcast/regions.hpp"
#include "ramcast/retrans.hpp"
#include "ramcast/rlc_markov.hpp"
#include "ramcast/sim.hpp"

namespace ramcast::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

fs::path default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return (env && *env) ? fs::path(env) : fs::path("ramcast-out");
}

// --out if given, otherwise <default dir>/<name>.
fs::path resolve_out(const std::string& out, const std::string& name) {
  return out.empty() ? default_out_dir() / name : fs::path(out);
}

fs::path manifest_path_for(const fs::path& output) {
  return output.parent_path() / (output.filename().string() + ".manifest.json");
}

void require_generation_size(int K) {
  if (K < 1) throw std::invalid_argument(fmt::format("K must satisfy K >= 1 (got {})", K));
  if (K > kMaxChainGenerationSize) {
    throw std::invalid_argument(
        fmt::format("K must satisfy K <= {} (got {})", kMaxChainGenerationSize, K));
  }
}

struct ChannelArgs {
  std::string channel = "strong_mpr";
  bool relaxed = false;

  void add_to(CLI::App* app) {
    app->add_option("--channel", channel, "preset (strong_mpr, weak_mpr, collision) or config file")
        ->capture_default_str();
    app->add_flag("--relaxed", relaxed, "allow q_solo == q_joint (e.g. a perfect channel)");
  }
  ChannelModel load() const {
    return load_channel(channel, relaxed ? Strictness::relaxed : Strictness::strict);
  }
  std::string label() const {
    return preset_channel(channel) ? channel : fs::path(channel).stem().string();
  }
  void describe(Json& config) const {
    config["channel"] = channel;
    config["relaxed"] = relaxed;
    const auto model = load();
    config["channel_values"] = to_config_text(model);
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  unsigned jobs = 0;
  std::string chain = "subspace";

  RlcOptions rlc() const { return {parse_transition_rule(chain), SteadyStateSolver::topological}; }
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(RunManifest& manifest, const Timer& timer, const fs::path& manifest_path,
            std::ostream& out) {
  manifest.wall_seconds = timer.seconds();
  write_manifest(manifest, manifest_path);
  for (const auto& p : manifest.outputs) out << "wrote " << p.string() << '\n';
  out << "wrote " << manifest_path.string() << '\n';
}

// ---- capacity -------------------------------------------------------------

struct CapacityArgs {
  ChannelArgs channel;
  double step = 0.01;
  std::string out;
};

int run_capacity(const CapacityArgs& a, Context& ctx) {
  Timer timer;
  const auto channel = a.channel.load();
  const auto samples = capacity_sweep(channel, a.step, ctx.jobs);
  const auto frontier = pareto_frontier(RegionKind::capacity, 1, a.step, samples);
  const auto member = frontier_membership(frontier, samples);

  CsvTable table({"p1", "p2", "r1", "r2", "on_frontier"});
  for (std::size_t s = 0; s < samples.size(); ++s) {
    table.add_row({format_number(samples[s].access.p1), format_number(samples[s].access.p2),
                   format_number(samples[s].rate.x), format_number(samples[s].rate.y),
                   member[s] ? "1" : "0"});
  }
  const auto path = resolve_out(a.out, "capacity.csv");
  table.write(path);

  RunManifest m;
  m.command = "capacity";
  a.channel.describe(m.config);
  m.config["step"] = a.step;
  m.config["jobs"] = ctx.jobs;
  m.outputs = {path};
  finish(m, timer, manifest_path_for(path), ctx.out);
  return 0;
}

// ---- rates ----------------------------------------------------------------

struct RatesArgs {
  ChannelArgs channel;
  std::string policy = "retrans";
  int K = 1;
  double p1 = 0.5, p2 = 0.5;
  std::string out;
};

int run_rates(const RatesArgs& a, Context& ctx) {
  Timer timer;
  const auto policy = parse_policy(a.policy);
  if (policy == Policy::random_linear_coding) require_generation_size(a.K);
  const auto channel = a.channel.load();
  const auto access = validate(AccessProbabilities{a.p1, a.p2});
  const auto rates = policy_service_rates(policy, channel, access, a.K, ctx.rlc());

  CsvTable table({"policy", "K", "source", "mu_b", "mu_e"});
  for (Source n : kSources) {
    table.add_row({std::string(to_string(policy)), format_number(rates.K),
                   format_number(index(n) + 1), format_number(rates.backlogged(n)),
                   format_number(rates.empty(n))});
  }
  ctx.out << table.str();
  if (!a.out.empty()) {
    const fs::path path(a.out);
    table.write(path);
    RunManifest m;
    m.command = "rates";
    a.channel.describe(m.config);
    m.config["policy"] = a.policy;
    m.config["K"] = a.K;
    m.config["p1"] = a.p1;
    m.config["p2"] = a.p2;
    m.config["chain"] = ctx.chain;
    m.outputs = {path};
    finish(m, timer, manifest_path_for(path), ctx.out);
  }
  return 0;
}

// ---- region ---------------------------------------------------------------

struct RegionArgs {
  ChannelArgs channel;
  std::string kind = "capacity";
  int K = 1;
  double step = 0.01;
  std::string out;
};

int run_region(const RegionArgs& a, Context& ctx) {
  Timer timer;
  const auto kind = parse_region_kind(a.kind);
  if (kind == RegionKind::stability_rlc) require_generation_size(a.K);
  if (!(a.step > 0.0 && a.step <= 0.1)) {
    throw std::invalid_argument(fmt::format("step must satisfy 0 < step <= 0.1 (got {})", a.step));
  }
  const auto channel = a.channel.load();
  RegionFrontier frontier;
  switch (kind) {
    case RegionKind::capacity: frontier = capacity_frontier(channel, a.step, ctx.jobs); break;
    case RegionKind::stability_retrans:
      frontier = throughput_frontier(Policy::retransmission, channel, a.step, 1, ctx.jobs);
      break;
    case RegionKind::stability_rlc:
      frontier = throughput_frontier(Policy::random_linear_coding, channel, a.step, a.K, ctx.jobs,
                                     ctx.rlc());
      break;
  }
  const auto path = resolve_out(a.out, fmt::format("region_{}.csv", a.kind));
  frontier_table(frontier).write(path);

  RunManifest m;
  m.command = "region";
  a.channel.describe(m.config);
  m.config["kind"] = a.kind;
  m.config["K"] = a.K;
  m.config["step"] = a.step;
  m.config["chain"] = ctx.chain;
  m.config["jobs"] = ctx.jobs;
  m.outputs = {path};
  finish(m, timer, manifest_path_for(path), ctx.out);
  return 0;
}

// ---- rankdist -------------------------------------------------------------

struct RankdistArgs {
  int K = 4;
  long long max_j = -1;
  std::string out;
};

int run_rankdist(const RankdistArgs& a, Context& ctx) {
  Timer timer;
  require_generation_size(a.K);
  const long long max_j = a.max_j >= 0 ? a.max_j : 2LL * a.K + 16;
  const auto dist = gf2::rank_distribution(a.K, max_j);
  CsvTable table({"j", "cdf", "pmf"});
  for (long long j = 0; j <= max_j; ++j) {
    table.add_row({format_number(j), format_number(dist.cdf[static_cast<std::size_t>(j)]),
                   format_number(dist.pmf[static_cast<std::size_t>(j)])});
  }
  const auto path = resolve_out(a.out, fmt::format("rankdist_K{}.csv", a.K));
  table.write(path);
  ctx.out << fmt::format("K = {}: E[N] = {}, E[N]/K = {}\n", a.K, dist.expected_n,
                         dist.expected_n / a.K);

  RunManifest m;
  m.command = "rankdist";
  m.config["K"] = a.K;
  m.config["max_j"] = max_j;
  m.outputs = {path};
  finish(m, timer, manifest_path_for(path), ctx.out);
  return 0;
}

// ---- sim ------------------------------------------------------------------

struct SimArgs {
  ChannelArgs channel;
  std::string policy = "retrans";
  int K = 1;
  double p1 = 0.5, p2 = 0.5;
  double lambda1 = 0.0, lambda2 = 0.0;
  long long slots = 1'000'000;
  std::uint64_t seed = 42;
  std::string mode = "saturated";
  int batches = 50;
  std::string out;
};

CsvTable sim_table(const sim::SimConfig& config, const sim::SimResult& result) {
  CsvTable table({"source", "policy", "K", "mode", "slots", "seed", "arrivals", "departures",
                  "departure_rate", "std_error", "mean_queue", "max_queue", "final_queue",
                  "drift", "drift_std_error", "mean_service_time", "mean_decode_count_1",
                  "mean_decode_count_2", "decode_count_correlation"});
  for (Source n : kSources) {
    const auto& st = result.of(n);
    table.add_row({format_number(index(n) + 1), std::string(to_string(config.policy)),
                   format_number(config.K), std::string(to_string(config.mode)),
                   format_number(config.slots), format_number(static_cast<unsigned long long>(config.seed)),
                   format_number(st.arrivals), format_number(st.departures),
                   format_number(st.departure_rate), format_number(st.std_error),
                   format_number(st.mean_queue), format_number(st.max_queue),
                   format_number(st.final_queue), format_number(st.drift),
                   format_number(st.drift_std_error), format_number(st.mean_service_time),
                   format_number(st.mean_decode_count[0]), format_number(st.mean_decode_count[1]),
                   format_number(st.decode_count_correlation)});
  }
  return table;
}

int run_sim(const SimArgs& a, Context& ctx) {
  Timer timer;
  sim::SimConfig config;
  config.policy = parse_policy(a.policy);
  if (config.policy == Policy::random_linear_coding) require_generation_size(a.K);
  config.channel = a.channel.load();
  config.access = {a.p1, a.p2};
  config.arrivals = {a.lambda1, a.lambda2};
  config.K = config.policy == Policy::random_linear_coding ? a.K : 1;
  config.slots = a.slots;
  config.seed = a.seed;
  config.mode = sim::parse_mode(a.mode);
  config.batches = a.batches;
  const auto result = sim::run(config);

  const auto table = sim_table(config, result);
  const auto path = resolve_out(a.out, "sim.csv");
  table.write(path);
  ctx.out << table.str();

  RunManifest m;
  m.command = "sim";
  a.channel.describe(m.config);
  m.config["policy"] = a.policy;
  m.config["K"] = config.K;
  m.config["p1"] = a.p1;
  m.config["p2"] = a.p2;
  m.config["lambda1"] = a.lambda1;
  m.config["lambda2"] = a.lambda2;
  m.config["slots"] = a.slots;
  m.config["mode"] = a.mode;
  m.config["batches"] = a.batches;
  m.seeds = {a.seed};
  m.outputs = {path};
  finish(m, timer, manifest_path_for(path), ctx.out);
  return 0;
}

// ---- verify-chain ---------------------------------------------------------

struct VerifyArgs {
  ChannelArgs channel;
  int K = 4;
  double p1 = 0.5, p2 = 0.5;
  long long slots = 1'000'000;
  std::uint64_t seed = 42;
  std::string out;
};

int run_verify_chain(const VerifyArgs& a, Context& ctx) {
  Timer timer;
  require_generation_size(a.K);
  const auto channel = a.channel.load();
  const auto access = validate(AccessProbabilities{a.p1, a.p2});

  auto simulate = [&](AccessProbabilities acc, std::uint64_t stream) {
    sim::SimConfig config;
    config.channel = channel;
    config.access = acc;
    config.policy = Policy::random_linear_coding;
    config.K = a.K;
    config.slots = a.slots;
    config.seed = derive_seed(a.seed, stream);
    return sim::run(config);
  };
  // Backlogged: both sources contend. Empty: the other source never sends.
  const auto both = simulate(access, 0);
  const std::array<sim::SimResult, 2> alone{simulate({a.p1, 0.0}, 1), simulate({0.0, a.p2}, 2)};

  CsvTable table({"rule", "source", "other", "K", "max_residual_interior",
                  "max_residual_boundary_i", "max_residual_boundary_j", "analytic", "simulated",
                  "std_error", "delta", "rel_delta"});
  for (auto rule : {TransitionRule::joint_slot, TransitionRule::subspace}) {
    for (Source n : kSources) {
      for (bool other : {true, false}) {
        const auto chain = build_chain(channel, access, n, other, a.K, rule);
        const auto residuals = row_residuals(chain);
        const double analytic = rlc_service_rate(channel, access, n, other, a.K, {rule});
        const auto& st = (other ? both : alone[index(n)]).of(n);
        const double delta = st.departure_rate - analytic;
        table.add_row({std::string(to_string(rule)), format_number(index(n) + 1),
                       other ? "backlogged" : "empty", format_number(a.K),
                       format_number(residuals.interior), format_number(residuals.dest1_complete),
                       format_number(residuals.dest2_complete), format_number(analytic),
                       format_number(st.departure_rate), format_number(st.std_error),
                       format_number(delta), format_number(analytic > 0 ? delta / analytic : 0.0)});
      }
    }
  }
  const auto path = resolve_out(a.out, fmt::format("verify_chain_K{}.csv", a.K));
  table.write(path);
  ctx.out << table.str();

  RunManifest m;
  m.command = "verify-chain";
  a.channel.describe(m.config);
  m.config["K"] = a.K;
  m.config["p1"] = a.p1;
  m.config["p2"] = a.p2;
  m.config["slots"] = a.slots;
  m.seeds = {derive_seed(a.seed, 0), derive_seed(a.seed, 1), derive_seed(a.seed, 2)};
  m.outputs = {path};
  finish(m, timer, manifest_path_for(path), ctx.out);
  return 0;
}

// ---- figure ---------------------------------------------------------------

struct FigureArgs {
  ChannelArgs channel;
  std::vector<int> K_list{1, 2, 5, 10, 50};
  double step = 0.01;
  std::string out;
};

int run_figure(const FigureArgs& a, Context& ctx) {
  Timer timer;
  for (int K : a.K_list) require_generation_size(K);
  if (!(a.step > 0.0 && a.step <= 0.1)) {
    throw std::invalid_argument(fmt::format("step must satisfy 0 < step <= 0.1 (got {})", a.step));
  }
  FigureOptions options;
  options.step = a.step;
  options.K_list = a.K_list;
  options.jobs = ctx.jobs;
  options.rlc = ctx.rlc();
  const auto figure = compute_figure(a.channel.load(), a.channel.label(), options);
  const fs::path dir = a.out.empty() ? default_out_dir() / ("figure_" + a.channel.label()) : fs::path(a.out);
  const auto written = write_figure(figure, dir);

  RunManifest m;
  m.command = "figure";
  a.channel.describe(m.config);
  m.config["K_list"] = a.K_list;
  m.config["step"] = a.step;
  m.config["chain"] = ctx.chain;
  m.config["jobs"] = ctx.jobs;
  m.outputs = written;
  finish(m, timer, dir / "manifest.json", ctx.out);
  return 0;
}

// ---- check ----------------------------------------------------------------

struct CheckArgs {
  bool quick = false;
  std::vector<int> criteria;
  std::uint64_t seed = 42;
  std::string out;
};

int run_check(const CheckArgs& a, Context& ctx) {
  Timer timer;
  checks::CheckOptions options;
  options.quick = a.quick;
  options.seed = a.seed;
  options.jobs = ctx.jobs;
  options.out_dir = a.out.empty() ? default_out_dir() / "check" : fs::path(a.out);

  std::vector<int> criteria = a.criteria;
  if (criteria.empty()) {
    for (int c = 1; c <= checks::kCriterionCount; ++c) criteria.push_back(c);
  }
  RunManifest m;
  m.command = "check";
  m.config["quick"] = a.quick;
  m.config["criteria"] = criteria;
  m.config["jobs"] = ctx.jobs;
  m.seeds = {a.seed};

  CsvTable summary({"criterion", "passed", "seconds", "title"});
  bool all_passed = true;
  for (int c : criteria) {
    const auto result = checks::run_criterion(c, options);
    ctx.out << checks::format_result(result) << std::flush;
    all_passed = all_passed && result.passed();
    summary.add_row({format_number(c), result.passed() ? "1" : "0", fmt::format("{:.1f}", result.seconds),
                     result.title});
    m.outputs.insert(m.outputs.end(), result.outputs.begin(), result.outputs.end());
  }
  summary.write(options.out_dir / "summary.csv");
  m.outputs.push_back(options.out_dir / "summary.csv");
  m.wall_seconds = timer.seconds();
  write_manifest(m, options.out_dir / "manifest.json");
  ctx.out << (all_passed ? "all criteria passed\n" : "some criteria failed\n");
  return all_passed ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability and capacity regions of two-source random-access multicast"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Context ctx{out, err};
  auto add_common = [&ctx](CLI::App* sub) {
    sub->add_option("--jobs", ctx.jobs, "worker threads for sweeps (0 = all cores)");
  };
  auto add_chain = [&ctx](CLI::App* sub) {
    sub->add_option("--chain", ctx.chain, "transition rule for the coding chain")
        ->check(CLI::IsMember({"subspace", "joint_slot"}))
        ->capture_default_str();
  };

  CapacityArgs capacity;
  auto* cap = app.add_subcommand("capacity", "capacity region sweep over (p1, p2)");
  capacity.channel.add_to(cap);
  cap->add_option("--step", capacity.step, "grid step in (0, 0.1]")->capture_default_str();
  cap->add_option("--out", capacity.out, "output CSV");
  add_common(cap);

  RatesArgs rates;
  auto* rat = app.add_subcommand("rates", "service rates at one (p1, p2)");
  rates.channel.add_to(rat);
  rat->add_option("--policy", rates.policy, "retrans or rlc")->capture_default_str();
  rat->add_option("--K", rates.K, "generation size (rlc)")->capture_default_str();
  rat->add_option("--p1", rates.p1)->capture_default_str();
  rat->add_option("--p2", rates.p2)->capture_default_str();
  rat->add_option("--out", rates.out, "also write the CSV here");
  add_chain(rat);

  RegionArgs region;
  auto* reg = app.add_subcommand("region", "Pareto frontier of one region");
  region.channel.add_to(reg);
  reg->add_option("--kind", region.kind, "capacity, retrans or rlc")->capture_default_str();
  reg->add_option("--K", region.K, "generation size (rlc)")->capture_default_str();
  reg->add_option("--step", region.step, "grid step in (0, 0.1]")->capture_default_str();
  reg->add_option("--out", region.out, "output CSV");
  add_common(reg);
  add_chain(reg);

  RankdistArgs rankdist;
  auto* rank = app.add_subcommand("rankdist", "decode-count distribution for generation size K");
  rank->add_option("--K", rankdist.K)->capture_default_str();
  rank->add_option("--max-j", rankdist.max_j, "largest j tabulated (default 2K + 16)");
  rank->add_option("--out", rankdist.out, "output CSV");

  SimArgs simargs;
  auto* simc = app.add_subcommand("sim", "slot-level simulation");
  simargs.channel.add_to(simc);
  simc->add_option("--policy", simargs.policy, "retrans or rlc")->capture_default_str();
  simc->add_option("--K", simargs.K, "generation size (rlc)")->capture_default_str();
  simc->add_option("--p1", simargs.p1)->capture_default_str();
  simc->add_option("--p2", simargs.p2)->capture_default_str();
  simc->add_option("--lambda1", simargs.lambda1, "arrival rate (arrivals mode)")->capture_default_str();
  simc->add_option("--lambda2", simargs.lambda2, "arrival rate (arrivals mode)")->capture_default_str();
  simc->add_option("--slots", simargs.slots)->capture_default_str();
  simc->add_option("--seed", simargs.seed)->capture_default_str();
  simc->add_option("--mode", simargs.mode, "saturated or arrivals")->capture_default_str();
  simc->add_option("--batches", simargs.batches, "batches for standard errors")->capture_default_str();
  simc->add_option("--out", simargs.out, "output CSV");

  VerifyArgs verify;
  auto* ver = app.add_subcommand("verify-chain", "row sums and simulation deltas of the coding chain");
  verify.channel.add_to(ver);
  ver->add_option("--K", verify.K)->capture_default_str();
  ver->add_option("--p1", verify.p1)->capture_default_str();
  ver->add_option("--p2", verify.p2)->capture_default_str();
  ver->add_option("--slots", verify.slots)->capture_default_str();
  ver->add_option("--seed", verify.seed)->capture_default_str();
  ver->add_option("--out", verify.out, "output CSV");

  FigureArgs figure;
  auto* fig = app.add_subcommand("figure", "all frontiers of one channel plus a plot script");
  figure.channel.add_to(fig);
  fig->add_option("--K-list", figure.K_list, "generation sizes, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  fig->add_option("--step", figure.step, "grid step in (0, 0.1]")->capture_default_str();
  fig->add_option("--out", figure.out, "output directory");
  add_common(fig);
  add_chain(fig);

  CheckArgs check;
  auto* chk = app.add_subcommand("check", "acceptance and cross-validation suite");
  chk->add_flag("--quick", check.quick, "reduced sizes");
  chk->add_option("--criterion", check.criteria, "run only these criteria (repeatable)")
      ->check(CLI::Range(1, checks::kCriterionCount));
  chk->add_option("--seed", check.seed)->capture_default_str();
  chk->add_option("--out", check.out, "output directory");
  add_common(chk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (cap->parsed()) return run_capacity(capacity, ctx);
    if (rat->parsed()) return run_rates(rates, ctx);
    if (reg->parsed()) return run_region(region, ctx);
    if (rank->parsed()) return run_rankdist(rankdist, ctx);
    if (simc->parsed()) return run_sim(simargs, ctx);
    if (ver->parsed()) return run_verify_chain(verify, ctx);
    if (fig->parsed()) return run_figure(figure, ctx);
    if (chk->parsed()) return run_check(check, ctx);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace ramcast::cli
