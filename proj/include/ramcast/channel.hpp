#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ramcast {

enum class Source : int { one = 0, two = 1 };
enum class Destination : int { one = 0, two = 1 };

constexpr int index(Source s) { return static_cast<int>(s); }
constexpr int index(Destination d) { return static_cast<int>(d); }
constexpr Source other(Source s) { return s == Source::one ? Source::two : Source::one; }

inline constexpr std::array<Source, 2> kSources{Source::one, Source::two};
inline constexpr std::array<Destination, 2> kDestinations{Destination::one, Destination::two};

// Indexed [source][destination].
using LinkTable = std::array<std::array<double, 2>, 2>;

/// Erasure channel with multipacket reception.
///
/// `q_solo[n][m]` is the probability that a packet from source n reaches
/// destination m when n is the only transmitter; `q_joint[n][m]` is the same
/// probability when both sources transmit. Reception events at different
/// destinations are independent.
struct ChannelModel {
  LinkTable q_solo{};
  LinkTable q_joint{};

  double solo(Source n, Destination m) const { return q_solo[index(n)][index(m)]; }
  double joint(Source n, Destination m) const { return q_joint[index(n)][index(m)]; }

  bool operator==(const ChannelModel&) const = default;
};

class ChannelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// `strict` requires q_solo > q_joint on every link. `relaxed` accepts
// q_solo >= q_joint, which admits degenerate models such as the perfect
// channel (all q = 1) used to pin down limiting cases.
enum class Strictness { strict, relaxed };

/// Returns `channel` unchanged if every entry lies in [0,1] and interference
/// never helps. Throws ChannelError naming the offending key otherwise.
ChannelModel validate(const ChannelModel& channel, Strictness strictness = Strictness::strict);

ChannelModel collision_channel();
ChannelModel strong_mpr_channel();
ChannelModel weak_mpr_channel();

// Preset names: "collision", "strong_mpr", "weak_mpr".
std::optional<ChannelModel> preset_channel(std::string_view name);

double success_prob(const ChannelModel& channel, Source transmitter, Destination dest,
                    bool other_transmits);

/// Parses a channel description with the eight keys `q_solo.n.m` and
/// `q_joint.n.m` (n, m in {1,2}). Accepts either a flat JSON object or
/// `key = value` lines with `#` comments. The result is not validated.
ChannelModel parse_channel_config(std::string_view text);

/// Resolves a preset name or reads a config file, then validates.
ChannelModel load_channel(std::string_view preset_or_path,
                          Strictness strictness = Strictness::strict);

// Inverse of parse_channel_config (key = value form).
std::string to_config_text(const ChannelModel& channel);

struct AccessProbabilities {
  double p1 = 0.0;
  double p2 = 0.0;

  double of(Source n) const { return n == Source::one ? p1 : p2; }
  bool operator==(const AccessProbabilities&) const = default;
};

AccessProbabilities validate(const AccessProbabilities& access);

struct ArrivalRates {
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  double of(Source n) const { return n == Source::one ? lambda1 : lambda2; }
};

// Bernoulli arrivals: each rate must lie in [0,1].
ArrivalRates validate(const ArrivalRates& arrivals);

}  // namespace ramcast
