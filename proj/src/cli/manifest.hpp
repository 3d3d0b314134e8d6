#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace netcompress::cli {

/// Record written next to every command output as <out>.manifest.json.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters;
  std::uint64_t seed = 0;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
};

std::string manifest_path(const std::string& out_path);

/// Writes the manifest and returns its path. The manifest lists itself last.
std::string write_manifest(const std::string& out_path, RunManifest manifest);

nlohmann::ordered_json to_json(const RunManifest& manifest);

}  // namespace netcompress::cli
