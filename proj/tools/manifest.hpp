#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace fractarray::cli {

/// Provenance record written next to every data artifact as
/// `<first artifact>.manifest.json`.
struct RunManifest {
  std::vector<std::string> command_line;
  nlohmann::json configuration;
  std::uint64_t seed = 0;
  std::string version;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;

  /// Hashes the outputs and writes the manifest; returns its path.
  std::string write() const;
};

std::string utc_timestamp();

/// Hex SHA-256 of a file's contents.
std::string file_sha256(const std::string& path);

}  // namespace fractarray::cli
