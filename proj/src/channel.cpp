#include "ramcast/channel.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace ramcast {
namespace {

std::string key_name(std::string_view table, int n, int m) {
  return fmt::format("{}.{}.{}", table, n + 1, m + 1);
}

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ChannelError(fmt::format("{}: cannot parse '{}' as a number", key, text));
  }
  return value;
}

ChannelModel from_key_values(const std::map<std::string, double, std::less<>>& values) {
  ChannelModel channel;
  std::size_t used = 0;
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      for (auto [name, table] : {std::pair{"q_solo", &channel.q_solo},
                                 std::pair{"q_joint", &channel.q_joint}}) {
        const auto key = key_name(name, n, m);
        const auto it = values.find(key);
        if (it == values.end()) throw ChannelError(fmt::format("missing key {}", key));
        (*table)[n][m] = it->second;
        ++used;
      }
    }
  }
  if (used != values.size()) {
    for (const auto& [key, value] : values) {
      bool known = false;
      for (int n = 0; n < 2 && !known; ++n)
        for (int m = 0; m < 2 && !known; ++m)
          known = key == key_name("q_solo", n, m) || key == key_name("q_joint", n, m);
      if (!known) throw ChannelError(fmt::format("unknown key {}", key));
    }
  }
  return channel;
}

}  // namespace

ChannelModel validate(const ChannelModel& channel, Strictness strictness) {
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      const double solo = channel.q_solo[n][m];
      const double joint = channel.q_joint[n][m];
      if (!is_probability(solo)) {
        throw ChannelError(
            fmt::format("{} = {} is outside [0,1]", key_name("q_solo", n, m), solo));
      }
      if (!is_probability(joint)) {
        throw ChannelError(
            fmt::format("{} = {} is outside [0,1]", key_name("q_joint", n, m), joint));
      }
      const bool ordered = strictness == Strictness::strict ? solo > joint : solo >= joint;
      if (!ordered) {
        throw ChannelError(fmt::format("{} = {} must {} {} = {}", key_name("q_solo", n, m), solo,
                                       strictness == Strictness::strict ? "exceed" : "be at least",
                                       key_name("q_joint", n, m), joint));
      }
    }
  }
  return channel;
}

ChannelModel collision_channel() {
  ChannelModel channel;
  for (auto& row : channel.q_solo) row = {1.0, 1.0};
  for (auto& row : channel.q_joint) row = {0.0, 0.0};
  return channel;
}

// Source n reaches its "own" destination n with 0.8 and the other with 0.7.
ChannelModel strong_mpr_channel() {
  ChannelModel channel;
  channel.q_solo = {{{0.8, 0.7}, {0.7, 0.8}}};
  channel.q_joint = {{{0.6, 0.6}, {0.6, 0.6}}};
  return channel;
}

ChannelModel weak_mpr_channel() {
  ChannelModel channel = strong_mpr_channel();
  channel.q_joint = {{{0.2, 0.2}, {0.2, 0.2}}};
  return channel;
}

std::optional<ChannelModel> preset_channel(std::string_view name) {
  if (name == "collision") return collision_channel();
  if (name == "strong_mpr") return strong_mpr_channel();
  if (name == "weak_mpr") return weak_mpr_channel();
  return std::nullopt;
}

double success_prob(const ChannelModel& channel, Source transmitter, Destination dest,
                    bool other_transmits) {
  return other_transmits ? channel.joint(transmitter, dest) : channel.solo(transmitter, dest);
}

ChannelModel parse_channel_config(std::string_view text) {
  std::map<std::string, double, std::less<>> values;
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ChannelError(fmt::format("invalid JSON channel config: {}", e.what()));
    }
    if (!doc.is_object()) throw ChannelError("JSON channel config must be an object");
    for (const auto& [key, value] : doc.items()) {
      if (!value.is_number()) throw ChannelError(fmt::format("{}: expected a number", key));
      values[key] = value.get<double>();
    }
    return from_key_values(values);
  }

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ChannelError(fmt::format("line {}: expected key = value", line_no));
    }
    const auto key = std::string(trim(view.substr(0, eq)));
    if (values.contains(key)) throw ChannelError(fmt::format("duplicate key {}", key));
    values[key] = parse_double(key, view.substr(eq + 1));
  }
  return from_key_values(values);
}

ChannelModel load_channel(std::string_view preset_or_path, Strictness strictness) {
  if (auto preset = preset_channel(preset_or_path)) return validate(*preset, strictness);
  std::ifstream in{std::string(preset_or_path)};
  if (!in) {
    throw ChannelError(
        fmt::format("'{}' is neither a channel preset nor a readable file", preset_or_path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return validate(parse_channel_config(buffer.str()), strictness);
}

std::string to_config_text(const ChannelModel& channel) {
  std::string out;
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      out += fmt::format("{} = {}\n", key_name("q_solo", n, m), channel.q_solo[n][m]);
      out += fmt::format("{} = {}\n", key_name("q_joint", n, m), channel.q_joint[n][m]);
    }
  }
  return out;
}

AccessProbabilities validate(const AccessProbabilities& access) {
  if (!is_probability(access.p1)) {
    throw std::invalid_argument(fmt::format("p1 = {} is outside [0,1]", access.p1));
  }
  if (!is_probability(access.p2)) {
    throw std::invalid_argument(fmt::format("p2 = {} is outside [0,1]", access.p2));
  }
  return access;
}

ArrivalRates validate(const ArrivalRates& arrivals) {
  if (!is_probability(arrivals.lambda1)) {
    throw std::invalid_argument(fmt::format("lambda1 = {} is outside [0,1]", arrivals.lambda1));
  }
  if (!is_probability(arrivals.lambda2)) {
    throw std::invalid_argument(fmt::format("lambda2 = {} is outside [0,1]", arrivals.lambda2));
  }
  return arrivals;
}

}  // namespace ramcast
