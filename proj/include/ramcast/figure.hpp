#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ramcast/channel.hpp"
#include "ramcast/csv.hpp"
#include "ramcast/regions.hpp"

namespace ramcast {

struct FigureOptions {
  double step = 0.01;
  std::vector<int> K_list{1, 2, 5, 10, 50};
  unsigned jobs = 0;
  RlcOptions rlc;
};

/// All frontiers of one rate-region plot: capacity, retransmission and one
/// random-linear-coding curve per generation size.
struct FigureData {
  std::string channel_name;
  ChannelModel channel;
  FigureOptions options;
  RegionFrontier capacity;
  RegionFrontier retrans;
  std::vector<RegionFrontier> rlc;  // same order as options.K_list
  // stability_union_excess of each policy sweep against its own frontier
  double retrans_union_excess = 0.0;
  std::vector<double> rlc_union_excess;
};

FigureData compute_figure(const ChannelModel& channel, std::string channel_name,
                          const FigureOptions& options);

// Columns kind,K,p1,p2,x,y; one row per frontier point.
CsvTable frontier_table(const RegionFrontier& frontier);

/// Writes one CSV per frontier plus plot.py into `dir` and returns the paths
/// written, CSVs first.
std::vector<std::filesystem::path> write_figure(const FigureData& figure,
                                                const std::filesystem::path& dir);

}  // namespace ramcast
