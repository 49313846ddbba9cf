#include "manifest.hpp"

#include <fstream>
#include <stdexcept>

namespace ramcast::cli {

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config"] = config;
  j["seeds"] = seeds;
  auto files = nlohmann::ordered_json::array();
  for (const auto& p : outputs) files.push_back(p.string());
  j["outputs"] = files;
  j["wall_seconds"] = wall_seconds;
  return j;
}

std::filesystem::path write_manifest(const RunManifest& manifest,
                                     const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest " + path.string());
  return path;
}

}  // namespace ramcast::cli
