#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ramcast/channel.hpp"
#include "support.hpp"

using namespace ramcast;

namespace {

std::string validation_error(const ChannelModel& c, Strictness s = Strictness::strict) {
  try {
    validate(c, s);
  } catch (const ChannelError& e) {
    return e.what();
  }
  return {};
}

const char* kStrongConfig = R"(# strong multipacket reception
q_solo.1.1 = 0.8
q_solo.1.2 = 0.7
q_solo.2.1 = 0.7
q_solo.2.2 = 0.8
q_joint.1.1 = 0.6
q_joint.1.2 = 0.6  # trailing comment
q_joint.2.1 = 0.6
q_joint.2.2 = 0.6
)";

}  // namespace

TEST_CASE("collision channel is valid under both strictness levels") {
  const auto c = collision_channel();
  for (auto& row : c.q_solo) CHECK(row == std::array<double, 2>{1.0, 1.0});
  for (auto& row : c.q_joint) CHECK(row == std::array<double, 2>{0.0, 0.0});
  CHECK(validate(c) == c);
  CHECK(validate(c, Strictness::relaxed) == c);
  CHECK(success_prob(c, Source::one, Destination::two, true) == 0.0);
  CHECK(success_prob(c, Source::one, Destination::two, false) == 1.0);
}

TEST_CASE("equal solo and joint probabilities violate the strict ordering") {
  auto c = strong_mpr_channel();
  c.q_solo[0][0] = 0.5;
  c.q_joint[0][0] = 0.5;
  const auto msg = validation_error(c);
  CHECK(test::contains(msg, "q_solo.1.1"));
  CHECK(test::contains(msg, "q_joint.1.1"));
  CHECK(validation_error(c, Strictness::relaxed).empty());
}

TEST_CASE("out-of-range entries are rejected by name") {
  auto c = strong_mpr_channel();
  c.q_solo[0][0] = 1.2;
  CHECK(test::contains(validation_error(c), "q_solo.1.1 = 1.2"));
  c = strong_mpr_channel();
  c.q_joint[1][0] = -0.1;
  CHECK(test::contains(validation_error(c), "q_joint.2.1"));
  c = strong_mpr_channel();
  c.q_joint[1][1] = 0.9;  // exceeds q_solo.2.2 = 0.8
  CHECK(test::contains(validation_error(c, Strictness::relaxed), "q_solo.2.2"));
}

TEST_CASE("presets") {
  const auto strong = strong_mpr_channel();
  CHECK(strong.q_solo[0][0] == 0.8);
  CHECK(strong.q_solo[0][1] == 0.7);
  CHECK(strong.q_solo[1][0] == 0.7);
  CHECK(strong.q_solo[1][1] == 0.8);
  for (auto& row : strong.q_joint) CHECK(row == std::array<double, 2>{0.6, 0.6});
  const auto weak = weak_mpr_channel();
  CHECK(weak.q_solo == strong.q_solo);
  for (auto& row : weak.q_joint) CHECK(row == std::array<double, 2>{0.2, 0.2});
  CHECK(preset_channel("strong_mpr") == strong);
  CHECK(preset_channel("weak_mpr") == weak);
  CHECK(preset_channel("collision") == collision_channel());
  CHECK_FALSE(preset_channel("nope").has_value());
}

TEST_CASE("key = value and JSON configs parse to the same model") {
  CHECK(parse_channel_config(kStrongConfig) == strong_mpr_channel());
  const auto json = R"({"q_solo.1.1": 0.8, "q_solo.1.2": 0.7, "q_solo.2.1": 0.7,
                        "q_solo.2.2": 0.8, "q_joint.1.1": 0.2, "q_joint.1.2": 0.2,
                        "q_joint.2.1": 0.2, "q_joint.2.2": 0.2})";
  CHECK(parse_channel_config(json) == weak_mpr_channel());
}

TEST_CASE("config round trip through text") {
  for (const auto& c : {strong_mpr_channel(), weak_mpr_channel(), collision_channel()}) {
    CHECK(parse_channel_config(to_config_text(c)) == c);
  }
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse_channel_config("q_solo.1.1 = 0.8\n"), doctest::Contains("missing key"),
                       ChannelError);
  std::string extra = std::string(kStrongConfig) + "q_other = 1\n";
  CHECK_THROWS_WITH_AS(parse_channel_config(extra), doctest::Contains("unknown key q_other"),
                       ChannelError);
  std::string dup = std::string(kStrongConfig) + "q_solo.1.1 = 0.9\n";
  CHECK_THROWS_WITH_AS(parse_channel_config(dup), doctest::Contains("duplicate key q_solo.1.1"),
                       ChannelError);
  CHECK_THROWS_WITH_AS(parse_channel_config("q_solo.1.1 = abc\n"), doctest::Contains("q_solo.1.1"),
                       ChannelError);
  CHECK_THROWS_AS(parse_channel_config("{not json"), ChannelError);
  CHECK_THROWS_AS(parse_channel_config("just words\n"), ChannelError);
}

TEST_CASE("load_channel resolves presets and files") {
  CHECK(load_channel("weak_mpr") == weak_mpr_channel());
  const auto path = std::filesystem::temp_directory_path() / "ramcast_test_channel.cfg";
  {
    std::ofstream out(path);
    out << kStrongConfig;
  }
  CHECK(load_channel(path.string()) == strong_mpr_channel());
  std::filesystem::remove(path);
  CHECK_THROWS_WITH_AS(load_channel("/nonexistent/file.cfg"),
                       doctest::Contains("neither a channel preset nor a readable file"),
                       ChannelError);
}

TEST_CASE("access and arrival validation") {
  CHECK_NOTHROW(validate(AccessProbabilities{0.0, 1.0}));
  CHECK_THROWS_WITH(validate(AccessProbabilities{1.5, 0.5}), doctest::Contains("p1"));
  CHECK_THROWS_WITH(validate(ArrivalRates{0.1, -0.2}), doctest::Contains("lambda2"));
  const AccessProbabilities a{0.3, 0.7};
  CHECK(a.of(Source::one) == 0.3);
  CHECK(a.of(Source::two) == 0.7);
}
