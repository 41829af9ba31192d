#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace armwind {

inline constexpr const char* kVersion = "0.1.0";

/// Everything that determines an experiment's outputs. The thread count is
/// recorded but excluded from the hash, since outputs do not depend on it.
struct ExperimentManifest {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> outputs;
  std::string version = kVersion;

  /// Sorted key=value lines covering command, params, seed, outputs and version.
  std::string canonical() const;
  /// Git blob id (SHA-1 of "blob <len>\0" + canonical()).
  std::string hash() const;
  std::string to_json() const;
};

std::string sha1_hex(const std::string& data);

}  // namespace armwind
