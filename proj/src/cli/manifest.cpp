#include "cli/manifest.hpp"

#include <fstream>
#include <stdexcept>

namespace netcompress::cli {

std::string manifest_path(const std::string& out_path) { return out_path + ".manifest.json"; }

nlohmann::ordered_json to_json(const RunManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["command"] = manifest.command;
  doc["parameters"] = manifest.parameters;
  doc["seed"] = manifest.seed;
  doc["version"] = manifest.version;
  doc["wall_seconds"] = manifest.wall_seconds;
  doc["outputs"] = manifest.outputs;
  doc["results"] = manifest.results;
  return doc;
}

std::string write_manifest(const std::string& out_path, RunManifest manifest) {
  const std::string path = manifest_path(out_path);
  manifest.outputs.push_back(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
  return path;
}

}  // namespace netcompress::cli
