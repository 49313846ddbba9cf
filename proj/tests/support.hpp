#pragma once

#include <string>

#include "ramcast/channel.hpp"

namespace ramcast::test {

// Every link always succeeds, with or without interference.
inline ChannelModel perfect_channel() {
  ChannelModel c;
  for (auto& row : c.q_solo) row = {1.0, 1.0};
  for (auto& row : c.q_joint) row = {1.0, 1.0};
  return c;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace ramcast::test
