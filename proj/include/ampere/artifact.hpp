// artifact.hpp -- provenance stamping for output files: tool version, config
// hash, input hashes, seed. Identical inputs reproduce byte-identical files.
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace ampere {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a. Stable, fast, good enough to detect changed inputs; not
// cryptographic.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t hash_file(const std::string& path);
std::string hash_hex(std::uint64_t h);

struct ArtifactHeader {
  std::string tool_version = kToolVersion;
  std::uint64_t config_hash = 0;
  std::map<std::string, std::uint64_t> input_hashes;  // name -> hash
  std::uint64_t seed = 0;

  // single-line JSON object under key "_artifact"
  std::string to_json_line() const;
};

}  // namespace ampere
