#pragma once

#include <array>
#include <string_view>

#include "ramcast/channel.hpp"

namespace ramcast {

enum class Policy { retransmission, random_linear_coding };

std::string_view to_string(Policy policy);
// Accepts "retrans" and "rlc".
Policy parse_policy(std::string_view name);

/// Queue service rates at a fixed (p1, p2), in packets per slot.
///
/// `mu_b[n]` applies while the other source is backlogged (it contends for
/// the channel in every slot), `mu_e[n]` while the other source is empty.
struct ServiceRates {
  std::array<double, 2> mu_b{};
  std::array<double, 2> mu_e{};
  Policy policy = Policy::retransmission;
  int K = 1;

  double backlogged(Source n) const { return mu_b[index(n)]; }
  double empty(Source n) const { return mu_e[index(n)]; }
};

}  // namespace ramcast
