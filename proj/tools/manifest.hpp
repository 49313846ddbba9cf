#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace ramcast::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Record of one command invocation, written next to its outputs so a run
/// can be repeated from the manifest alone.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::filesystem::path> outputs;
  double wall_seconds = 0.0;

  nlohmann::ordered_json to_json() const;
};

// Writes the manifest to `path` and returns it.
std::filesystem::path write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace ramcast::cli
