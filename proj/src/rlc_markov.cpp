#include "ramcast/rlc_markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <fmt/format.h>

namespace ramcast {
namespace {

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

void check_generation_size(int K) {
  if (K < 1 || K > kMaxChainGenerationSize) {
    throw std::invalid_argument(
        fmt::format("generation size K = {} must lie in [1, {}]", K, kMaxChainGenerationSize));
  }
}

bool valid_state(int K, TransitionRule rule, int i, int j, int k) {
  if (i < 0 || j < 0 || k < 0 || i > K || j > K || k > std::min(i, j)) return false;
  return rule == TransitionRule::joint_slot || i + j - k <= K;
}

bool absorbing(int K, const ChainState& s) { return s.i == K && s.j == K; }

// Accumulates the outgoing transitions of one state, merging repeated
// targets. At most seven distinct targets occur.
class RowBuilder {
 public:
  void add(const ChainState& to, double probability) {
    if (!(probability > 0.0)) return;
    for (int e = 0; e < size_; ++e) {
      if (targets_[e] == to) {
        probs_[e] += probability;
        return;
      }
    }
    targets_[size_] = to;
    probs_[size_] = probability;
    ++size_;
  }

  int size() const { return size_; }
  const ChainState& target(int e) const { return targets_[e]; }
  double probability(int e) const { return probs_[e]; }

 private:
  std::array<ChainState, 8> targets_{};
  std::array<double, 8> probs_{};
  int size_ = 0;
};

// 2^e 2^-K
double scaled(int K, int e) { return std::ldexp(1.0, e - K); }

void joint_slot_row(int K, const ReceptionWeights& w, const ChainState& s, RowBuilder& row) {
  const auto [i, j, k] = s;
  const double none = w.neither, f = w.first_only, g = w.second_only, b = w.both;
  if (i < K && j < K) {
    row.add(s, none + g * scaled(K, j) + f * scaled(K, i) + b * scaled(K, k));
    row.add({i + 1, j, k}, f * (1.0 - scaled(K, i)) + b * (scaled(K, j) - scaled(K, k)));
    row.add({i, j + 1, k}, g * (1.0 - scaled(K, j)) + b * (scaled(K, i) - scaled(K, k)));
    row.add({i + 1, j + 1, k + 1},
            b * (1.0 - (scaled(K, i) + scaled(K, j) - scaled(K, k))));
  } else if (j == K) {
    // Destination 2 is done; only receptions at destination 1 matter.
    const double hear = f + b;
    row.add(s, none + g + hear * scaled(K, i));
    row.add({i + 1, K, k}, hear * (1.0 - (scaled(K, i) + (K - k) * scaled(K, 0))));
    row.add({i + 1, K, k + 1}, hear * (K - k) * scaled(K, 0));
  } else {
    const double hear = g + b;
    row.add(s, none + f + hear * scaled(K, j));
    row.add({K, j + 1, k}, hear * (1.0 - (scaled(K, j) + (K - k) * scaled(K, 0))));
    row.add({K, j + 1, k + 1}, hear * (K - k) * scaled(K, 0));
  }
}

// k is dim(U1 ∩ U2) and dim(U1 + U2) = i + j - k. A uniform coefficient
// vector v lands in each region of the subspace lattice with probability
// proportional to its size.
void subspace_row(int K, const ReceptionWeights& w, const ChainState& s, RowBuilder& row) {
  const auto [i, j, k] = s;
  const int sum_dim = i + j - k;
  const double f = w.first_only, g = w.second_only, b = w.both;

  row.add(s, w.neither);

  if (i == K) {
    row.add(s, f);
  } else {
    row.add(s, f * scaled(K, i));                                        // v in U1
    if (sum_dim > i) row.add({i + 1, j, k + 1}, f * (scaled(K, sum_dim) - scaled(K, i)));
    if (sum_dim < K) row.add({i + 1, j, k}, f * (1.0 - scaled(K, sum_dim)));
  }

  if (j == K) {
    row.add(s, g);
  } else {
    row.add(s, g * scaled(K, j));
    if (sum_dim > j) row.add({i, j + 1, k + 1}, g * (scaled(K, sum_dim) - scaled(K, j)));
    if (sum_dim < K) row.add({i, j + 1, k}, g * (1.0 - scaled(K, sum_dim)));
  }

  row.add(s, b * scaled(K, k));                                              // v in U1 ∩ U2
  if (i > k) row.add({i, j + 1, k + 1}, b * (scaled(K, i) - scaled(K, k)));  // v in U1 \ U2
  if (j > k) row.add({i + 1, j, k + 1}, b * (scaled(K, j) - scaled(K, k)));  // v in U2 \ U1
  // v in (U1 + U2) outside U1 ∪ U2: both ranks grow and the intersection
  // gains two dimensions. This region is empty when U1 ⊆ U2 or U2 ⊆ U1.
  if (i > k && j > k) {
    row.add({i + 1, j + 1, k + 2},
            b * (scaled(K, sum_dim) - scaled(K, i) - scaled(K, j) + scaled(K, k)));
  }
  if (sum_dim < K) row.add({i + 1, j + 1, k + 1}, b * (1.0 - scaled(K, sum_dim)));
}

std::size_t dense_key(int K, const ChainState& s) {
  const auto side = static_cast<std::size_t>(K + 1);
  return (static_cast<std::size_t>(s.i) * side + static_cast<std::size_t>(s.j)) * side +
         static_cast<std::size_t>(s.k);
}

std::string describe(const ChainState& s) { return fmt::format("({},{},{})", s.i, s.j, s.k); }

}  // namespace

std::string_view to_string(TransitionRule rule) {
  return rule == TransitionRule::joint_slot ? "joint_slot" : "subspace";
}

TransitionRule parse_transition_rule(std::string_view name) {
  if (name == "joint_slot") return TransitionRule::joint_slot;
  if (name == "subspace") return TransitionRule::subspace;
  throw std::invalid_argument(
      fmt::format("unknown transition rule '{}' (expected joint_slot|subspace)", name));
}

std::string_view to_string(SteadyStateSolver solver) {
  switch (solver) {
    case SteadyStateSolver::topological: return "topological";
    case SteadyStateSolver::dense: return "dense";
    case SteadyStateSolver::iterative: return "iterative";
  }
  return "?";
}

SteadyStateSolver parse_steady_state_solver(std::string_view name) {
  if (name == "topological") return SteadyStateSolver::topological;
  if (name == "dense") return SteadyStateSolver::dense;
  if (name == "iterative") return SteadyStateSolver::iterative;
  throw std::invalid_argument(fmt::format(
      "unknown steady-state solver '{}' (expected topological|dense|iterative)", name));
}

ReceptionWeights reception_weights(const ChannelModel& channel, const AccessProbabilities& access,
                                   Source source, bool other_backlogged) {
  const double p = access.of(source);
  const double p_other = other_backlogged ? access.of(other(source)) : 0.0;
  ReceptionWeights w{};
  for (const auto& [weight, table] : {std::pair{1.0 - p_other, &channel.q_solo},
                                      std::pair{p_other, &channel.q_joint}}) {
    const double a = (*table)[index(source)][0];
    const double c = (*table)[index(source)][1];
    w.first_only += p * weight * a * (1.0 - c);
    w.second_only += p * weight * (1.0 - a) * c;
    w.both += p * weight * a * c;
  }
  w.neither = (1.0 - p) + p * ((1.0 - p_other) * (1.0 - channel.q_solo[index(source)][0]) *
                                   (1.0 - channel.q_solo[index(source)][1]) +
                               p_other * (1.0 - channel.q_joint[index(source)][0]) *
                                   (1.0 - channel.q_joint[index(source)][1]));
  return w;
}

std::vector<ChainState> enumerate_states(int K, TransitionRule rule) {
  check_generation_size(K);
  std::vector<ChainState> states;
  for (int level = 0; level <= 2 * K; ++level) {
    for (int i = std::max(0, level - K); i <= std::min(K, level); ++i) {
      const int j = level - i;
      for (int k = 0; k <= std::min(i, j); ++k) {
        if (valid_state(K, rule, i, j, k)) states.push_back({i, j, k});
      }
    }
  }
  return states;
}

ChainModel::ChainModel(int K, TransitionRule rule, ReceptionWeights weights)
    : K_(K), rule_(rule), weights_(weights), states_(enumerate_states(K, rule)) {
  const auto side = static_cast<std::size_t>(K + 1);
  lookup_.assign(side * side * side, kAbsent);
  for (std::size_t s = 0; s < states_.size(); ++s) lookup_[dense_key(K, states_[s])] = s;

  row_offsets_.reserve(states_.size() + 1);
  transitions_.reserve(states_.size() * 5);
  row_offsets_.push_back(0);
  for (const auto& state : states_) {
    if (absorbing(K, state)) {
      transitions_.push_back({origin(), 1.0});
    } else {
      RowBuilder row;
      if (rule == TransitionRule::joint_slot) {
        joint_slot_row(K, weights, state, row);
      } else {
        subspace_row(K, weights, state, row);
      }
      for (int e = 0; e < row.size(); ++e) {
        transitions_.push_back({index_of(row.target(e)), row.probability(e)});
      }
    }
    row_offsets_.push_back(transitions_.size());
  }
}

std::size_t ChainModel::index_of(const ChainState& state) const {
  if (!valid_state(K_, rule_, state.i, state.j, state.k)) {
    throw ChainError(fmt::format("{} is not a state of the K = {} {} chain", describe(state), K_,
                                 to_string(rule_)));
  }
  return lookup_[dense_key(K_, state)];
}

bool ChainModel::contains(const ChainState& state) const {
  return valid_state(K_, rule_, state.i, state.j, state.k);
}

std::span<const Transition> ChainModel::row(std::size_t state) const {
  return {transitions_.data() + row_offsets_.at(state),
          transitions_.data() + row_offsets_.at(state + 1)};
}

double ChainModel::probability(std::size_t from, std::size_t to) const {
  for (const auto& t : row(from)) {
    if (t.to == to) return t.probability;
  }
  return 0.0;
}

bool ChainModel::is_absorbing(std::size_t state) const { return absorbing(K_, states_.at(state)); }

double ChainModel::row_sum(std::size_t state) const {
  double sum = 0.0;
  for (const auto& t : row(state)) sum += t.probability;
  return sum;
}

double ChainModel::max_row_residual() const { return row_residuals(*this).max(); }

double RowResidualReport::max() const {
  return std::max({interior, dest2_complete, dest1_complete, renewal});
}

RowResidualReport row_residuals(const ChainModel& chain) {
  RowResidualReport report;
  const int K = chain.generation_size();
  for (std::size_t s = 0; s < chain.size(); ++s) {
    const double residual = std::abs(chain.row_sum(s) - 1.0);
    const auto& state = chain.states()[s];
    double& slot = chain.is_absorbing(s) ? report.renewal
                   : state.j == K        ? report.dest2_complete
                   : state.i == K        ? report.dest1_complete
                                         : report.interior;
    slot = std::max(slot, residual);
  }
  return report;
}

ChainModel build_chain(const ChannelModel& channel, const AccessProbabilities& access,
                       Source source, bool other_backlogged, int K, TransitionRule rule) {
  check_generation_size(K);
  return ChainModel(K, rule, reception_weights(channel, access, source, other_backlogged));
}

namespace {

std::vector<double> topological_steady_state(const ChainModel& chain) {
  const std::size_t n = chain.size();
  std::vector<double> inflow(n, 0.0);
  std::vector<double> visits(n, 0.0);
  inflow[chain.origin()] = 1.0;  // one renewal per cycle

  for (std::size_t s = 0; s < n; ++s) {
    if (inflow[s] == 0.0) continue;
    if (chain.is_absorbing(s)) {
      visits[s] = inflow[s];
      continue;
    }
    double leave = 0.0;
    for (const auto& t : chain.row(s)) {
      if (t.to == s) continue;
      if (t.to < s) {
        throw ChainError(fmt::format("transition {} -> {} does not move up the chain",
                                     describe(chain.states()[s]), describe(chain.states()[t.to])));
      }
      leave += t.probability;
    }
    if (!(leave > 0.0)) {
      throw ChainError(fmt::format("reachable state {} is never left", describe(chain.states()[s])));
    }
    visits[s] = inflow[s] / leave;
    for (const auto& t : chain.row(s)) {
      if (t.to != s) inflow[t.to] += visits[s] * t.probability;
    }
  }

  double total = 0.0;
  for (double v : visits) total += v;
  for (double& v : visits) v /= total;
  return visits;
}

// Balance equations pi (P - I) = 0 with the last one replaced by sum(pi) = 1.
std::vector<double> dense_steady_state(const ChainModel& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  Eigen::MatrixXd A = -Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    for (const auto& t : chain.row(static_cast<std::size_t>(s))) {
      A(static_cast<Eigen::Index>(t.to), s) += t.probability;
    }
  }
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd pi = lu.solve(rhs);
  if (!pi.allFinite() || (A * pi - rhs).lpNorm<Eigen::Infinity>() > 1e-9) {
    throw ChainError("balance equations are singular");
  }
  return {pi.data(), pi.data() + n};
}

std::vector<double> iterative_steady_state(const ChainModel& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(chain.size() * 7);
  for (Eigen::Index s = 0; s < n; ++s) {
    entries.emplace_back(s, s, -1.0);
    for (const auto& t : chain.row(static_cast<std::size_t>(s))) {
      if (static_cast<Eigen::Index>(t.to) != n - 1) {
        entries.emplace_back(static_cast<Eigen::Index>(t.to), s, t.probability);
      }
    }
  }
  for (Eigen::Index s = 0; s < n; ++s) {
    if (s != n - 1) entries.emplace_back(n - 1, s, 1.0);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(entries.begin(), entries.end());
  // The normalization row replaced the balance equation of the last state,
  // including its -1 diagonal; restore the diagonal to 1.
  A.coeffRef(n - 1, n - 1) = 1.0;
  A.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
  solver.setTolerance(1e-15);
  solver.setMaxIterations(static_cast<int>(std::max<Eigen::Index>(1000, 10 * n)));
  solver.compute(A);
  if (solver.info() != Eigen::Success) throw ChainError("preconditioner setup failed");
  const Eigen::VectorXd pi = solver.solve(rhs);
  if (!pi.allFinite() || (A * pi - rhs).lpNorm<Eigen::Infinity>() > 1e-11) {
    throw ChainError(fmt::format("iterative solve did not converge (residual {})",
                                 (A * pi - rhs).lpNorm<Eigen::Infinity>()));
  }
  return {pi.data(), pi.data() + n};
}

}  // namespace

std::vector<double> steady_state(const ChainModel& chain, SteadyStateSolver solver) {
  switch (solver) {
    case SteadyStateSolver::topological: return topological_steady_state(chain);
    case SteadyStateSolver::dense: return dense_steady_state(chain);
    case SteadyStateSolver::iterative: return iterative_steady_state(chain);
  }
  throw std::invalid_argument("unknown solver");
}

std::vector<std::vector<ChainState>> absorbing_entry_sets(int K) {
  check_generation_size(K);
  std::vector<std::vector<ChainState>> sets(static_cast<std::size_t>(K) + 1);
  auto keep = [K](std::vector<ChainState>& set, ChainState s) {
    if (valid_state(K, TransitionRule::joint_slot, s.i, s.j, s.k)) set.push_back(s);
  };
  for (int k = 0; k < K; ++k) {
    auto& set = sets[static_cast<std::size_t>(k)];
    keep(set, {K - 1, K, k});
    keep(set, {K - 1, K, k - 1});
    keep(set, {K, K - 1, k});
    keep(set, {K, K - 1, k - 1});
    keep(set, {K - 1, K - 1, k - 1});
  }
  auto& last = sets[static_cast<std::size_t>(K)];
  keep(last, {K - 1, K, K - 1});
  keep(last, {K, K - 1, K - 1});
  keep(last, {K - 1, K - 1, K - 1});
  return sets;
}

std::vector<std::vector<ChainState>> entry_predecessors(const ChainModel& chain) {
  const int K = chain.generation_size();
  std::vector<std::vector<ChainState>> sets(static_cast<std::size_t>(K) + 1);
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (chain.is_absorbing(s)) continue;
    for (const auto& t : chain.row(s)) {
      if (chain.is_absorbing(t.to)) {
        sets[static_cast<std::size_t>(chain.states()[t.to].k)].push_back(chain.states()[s]);
      }
    }
  }
  return sets;
}

double completion_flux(const ChainModel& chain, std::span<const double> pi) {
  if (pi.size() != chain.size()) throw std::invalid_argument("pi does not match the chain");
  double flux = 0.0;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (chain.is_absorbing(s) || pi[s] == 0.0) continue;
    for (const auto& t : chain.row(s)) {
      if (chain.is_absorbing(t.to)) flux += pi[s] * t.probability;
    }
  }
  return flux;
}

double generation_service_rate(const ChainModel& chain, std::span<const double> pi) {
  const double flux = completion_flux(chain, pi);
  if (!(flux < 1.0)) throw ChainError("completion flux must be below 1");
  return chain.generation_size() * flux / (1.0 - flux);
}

std::vector<double> slot_occupancy(const ChainModel& chain, std::span<const double> pi) {
  if (pi.size() != chain.size()) throw std::invalid_argument("pi does not match the chain");
  std::vector<double> occupancy(pi.begin(), pi.end());
  double renewal_mass = 0.0;
  for (std::size_t s = 0; s < chain.size(); ++s) {
    if (chain.is_absorbing(s)) {
      renewal_mass += occupancy[s];
      occupancy[s] = 0.0;
    }
  }
  for (double& v : occupancy) v /= 1.0 - renewal_mass;
  return occupancy;
}

double rlc_service_rate(const ChannelModel& channel, const AccessProbabilities& access,
                        Source source, bool other_backlogged, int K, const RlcOptions& options) {
  check_generation_size(K);
  const auto weights = reception_weights(channel, access, source, other_backlogged);
  // A destination that never hears the source never decodes.
  if (!(weights.first_only + weights.both > 0.0) || !(weights.second_only + weights.both > 0.0)) {
    return 0.0;
  }
  const ChainModel chain(K, options.rule, weights);
  const auto pi = steady_state(chain, options.solver);
  return generation_service_rate(chain, pi);
}

ServiceRates rlc_service_rates(const ChannelModel& channel, const AccessProbabilities& access,
                               int K, const RlcOptions& options) {
  ServiceRates rates;
  rates.policy = Policy::random_linear_coding;
  rates.K = K;
  for (Source n : kSources) {
    rates.mu_b[index(n)] = rlc_service_rate(channel, access, n, true, K, options);
    rates.mu_e[index(n)] = rlc_service_rate(channel, access, n, false, K, options);
  }
  return rates;
}

}  // namespace ramcast
