#include "ramcast/figure.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "ramcast/capacity.hpp"

namespace ramcast {

FigureData compute_figure(const ChannelModel& channel, std::string channel_name,
                          const FigureOptions& options) {
  if (options.K_list.empty()) throw std::invalid_argument("K list must not be empty");
  FigureData fig;
  fig.channel_name = std::move(channel_name);
  fig.channel = channel;
  fig.options = options;
  fig.capacity = capacity_frontier(channel, options.step, options.jobs);

  const auto retrans = throughput_sweep(Policy::retransmission, channel, options.step, 1,
                                        options.jobs);
  fig.retrans = pareto_frontier(RegionKind::stability_retrans, 1, options.step, retrans.samples);
  fig.retrans_union_excess = stability_union_excess(fig.retrans, retrans);

  for (int K : options.K_list) {
    const auto sweep = throughput_sweep(Policy::random_linear_coding, channel, options.step, K,
                                        options.jobs, options.rlc);
    fig.rlc.push_back(pareto_frontier(RegionKind::stability_rlc, K, options.step, sweep.samples));
    fig.rlc_union_excess.push_back(stability_union_excess(fig.rlc.back(), sweep));
  }
  return fig;
}

CsvTable frontier_table(const RegionFrontier& frontier) {
  CsvTable table({"kind", "K", "p1", "p2", "x", "y"});
  for (const auto& p : frontier.points) {
    table.add_row({std::string(to_string(frontier.kind)), format_number(frontier.K),
                   format_number(p.witness.p1), format_number(p.witness.p2),
                   format_number(p.rate.x), format_number(p.rate.y)});
  }
  return table;
}

namespace {

constexpr std::string_view kPlotScript = R"(#!/usr/bin/env python3
# Plots every region CSV in this directory. Usage: python3 plot.py [out.png]
import csv
import pathlib
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = pathlib.Path(__file__).resolve().parent


def load(name):
    with open(here / name, newline="") as f:
        rows = list(csv.DictReader(f))
    return [float(r["x"]) for r in rows], [float(r["y"]) for r in rows]


def closed(xs, ys):
    # Close the frontier down to both axes.
    if not xs:
        return xs, ys
    return [0.0] + xs + [xs[-1]], [ys[0]] + ys + [0.0]


fig, ax = plt.subplots(figsize=(5.5, 5))
ax.plot(*closed(*load("capacity.csv")), "k-", lw=2, label="capacity")
ax.plot(*closed(*load("retrans.csv")), "r--", lw=1.5, label="retransmission")
for name in {rlc_files}:
    K = name.split("_K")[1].split(".")[0]
    ax.plot(*closed(*load(name)), lw=1, label=f"coding, K={{K}}")
ax.set_xlabel("rate of source 1 [packets/slot]")
ax.set_ylabel("rate of source 2 [packets/slot]")
ax.set_title("{title}")
ax.set_xlim(0, 1)
ax.set_ylim(0, 1)
ax.legend(loc="upper right", fontsize=8)
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else here / "regions.png", dpi=150)
)";

}  // namespace

std::vector<std::filesystem::path> write_figure(const FigureData& figure,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const RegionFrontier& frontier, const std::string& name) {
    frontier_table(frontier).write(dir / name);
    written.push_back(dir / name);
  };
  emit(figure.capacity, "capacity.csv");
  emit(figure.retrans, "retrans.csv");
  std::string rlc_files = "[";
  for (const auto& frontier : figure.rlc) {
    const auto name = fmt::format("rlc_K{}.csv", frontier.K);
    emit(frontier, name);
    rlc_files += fmt::format("{}\"{}\"", rlc_files.size() > 1 ? ", " : "", name);
  }
  rlc_files += "]";

  const auto script = dir / "plot.py";
  std::ofstream out(script, std::ios::binary);
  out << fmt::format(fmt::runtime(kPlotScript), fmt::arg("rlc_files", rlc_files),
                     fmt::arg("title", figure.channel_name));
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", script.string()));
  written.push_back(script);
  return written;
}

}  // namespace ramcast
