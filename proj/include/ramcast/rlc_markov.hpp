#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ramcast/channel.hpp"
#include "ramcast/service.hpp"

namespace ramcast {

inline constexpr int kMaxChainGenerationSize = 64;

/// Progress of one generation of K coded packets from a single source:
/// `i` and `j` are the ranks collected at destinations 1 and 2, `k` counts
/// packets shared by both.
struct ChainState {
  int i = 0;
  int j = 0;
  int k = 0;

  auto operator<=>(const ChainState&) const = default;
};

/// How transitions between (i, j, k) states are generated.
///
/// `joint_slot` is the classic transition table: `k`
/// only advances on a packet that is innovative at both destinations in the
/// same slot, and the full-rank boundary rows split on linear `(K - k) 2^-K`
/// terms.
///
/// `subspace` takes `k` to be the dimension of the intersection of the two
/// received subspaces. With that reading (i, j, k) determines the pair of
/// subspaces up to a change of basis, so the chain is exact for uniformly
/// random coefficients; states with i + j - k > K are unreachable and left
/// out of the state space.
enum class TransitionRule { joint_slot, subspace };

enum class SteadyStateSolver {
  topological,  // forward substitution along the upward (i + j increasing) order
  dense,        // dense LU on the balance equations
  iterative,    // sparse BiCGSTAB with an incomplete-LU preconditioner
};

std::string_view to_string(TransitionRule rule);
TransitionRule parse_transition_rule(std::string_view name);
std::string_view to_string(SteadyStateSolver solver);
SteadyStateSolver parse_steady_state_solver(std::string_view name);

/// Probabilities of the four reception outcomes for the coded source in one
/// slot. `neither` includes slots where the source stays silent.
struct ReceptionWeights {
  double neither = 1.0;
  double first_only = 0.0;
  double second_only = 0.0;
  double both = 0.0;
};

ReceptionWeights reception_weights(const ChannelModel& channel, const AccessProbabilities& access,
                                   Source source, bool other_backlogged);

struct Transition {
  std::size_t to = 0;
  double probability = 0.0;
};

class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite renewal chain over (i, j, k). The absorbing states (K, K, k) hand
/// control back to (0, 0, 0) with probability 1, which makes the chain
/// irreducible on its reachable states. Rows are stored in CSR form.
class ChainModel {
 public:
  ChainModel(int K, TransitionRule rule, ReceptionWeights weights);

  int generation_size() const { return K_; }
  TransitionRule rule() const { return rule_; }
  const ReceptionWeights& weights() const { return weights_; }

  const std::vector<ChainState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  // Throws ChainError for states outside the state space.
  std::size_t index_of(const ChainState& state) const;
  bool contains(const ChainState& state) const;
  std::size_t origin() const { return 0; }

  std::span<const Transition> row(std::size_t state) const;
  double probability(std::size_t from, std::size_t to) const;
  bool is_absorbing(std::size_t state) const;

  double row_sum(std::size_t state) const;
  double max_row_residual() const;

 private:
  int K_;
  TransitionRule rule_;
  ReceptionWeights weights_;
  std::vector<ChainState> states_;
  std::vector<std::size_t> lookup_;  // dense (i, j, k) -> state index, npos if absent
  std::vector<std::size_t> row_offsets_;
  std::vector<Transition> transitions_;
};

/// States of the chain ordered by i + j, so every non-renewal transition
/// moves forward in the sequence. (0,0,0) is first.
std::vector<ChainState> enumerate_states(int K, TransitionRule rule = TransitionRule::joint_slot);

ChainModel build_chain(const ChannelModel& channel, const AccessProbabilities& access,
                       Source source, bool other_backlogged, int K,
                       TransitionRule rule = TransitionRule::subspace);

/// Stationary distribution of the renewal chain, indexed like
/// `chain.states()`. Throws ChainError if the balance equations are singular
/// or the chain cannot leave some reachable state.
std::vector<double> steady_state(const ChainModel& chain,
                                 SteadyStateSolver solver = SteadyStateSolver::topological);

/// The sets A_0 .. A_K of states with a one-step transition into (K, K, k),
/// as listed for the joint_slot chain. Members with negative indices or
/// k > min(i, j) are dropped.
std::vector<std::vector<ChainState>> absorbing_entry_sets(int K);

/// States with a positive-probability transition into (K, K, k), read off the
/// chain itself. Indexed by k.
std::vector<std::vector<ChainState>> entry_predecessors(const ChainModel& chain);

/// Stationary probability mass that enters a completed state per slot of the
/// renewal chain: sum over k and predecessors s of pi_s Pr(s -> (K, K, k)).
double completion_flux(const ChainModel& chain, std::span<const double> pi);

/// Packets per slot delivered by the source, K F / (1 - F) with F the
/// completion flux. The renewal step from (K, K, k) to (0, 0, 0) is
/// bookkeeping rather than a channel slot, so one step per cycle is removed
/// from the time base.
double generation_service_rate(const ChainModel& chain, std::span<const double> pi);

/// Stationary occupancy with the renewal step removed: the distribution of
/// the (i, j, k) state at the start of a channel slot.
std::vector<double> slot_occupancy(const ChainModel& chain, std::span<const double> pi);

struct RlcOptions {
  TransitionRule rule = TransitionRule::subspace;
  SteadyStateSolver solver = SteadyStateSolver::topological;
};

/// Backlogged and empty service rates of random linear coding with
/// generation size K. Sources that cannot complete a generation (p_n = 0, or
/// a destination that never hears them) get rate 0.
ServiceRates rlc_service_rates(const ChannelModel& channel, const AccessProbabilities& access,
                               int K, const RlcOptions& options = {});

double rlc_service_rate(const ChannelModel& channel, const AccessProbabilities& access,
                        Source source, bool other_backlogged, int K, const RlcOptions& options = {});

/// Largest |row sum - 1| per row family: interior rows (i, j < K), rows with
/// j = K, rows with i = K, and renewal rows.
struct RowResidualReport {
  double interior = 0.0;
  double dest2_complete = 0.0;
  double dest1_complete = 0.0;
  double renewal = 0.0;

  double max() const;
};

RowResidualReport row_residuals(const ChainModel& chain);

}  // namespace ramcast
