// artifact.cpp

#include "ampere/artifact.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ampere/error.hpp"

namespace ampere {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot hash missing file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ArtifactHeader::to_json_line() const {
  nlohmann::json inputs;
  for (const auto& [name, h] : input_hashes) inputs[name] = hash_hex(h);
  nlohmann::json j = {{"_artifact",
                       {{"tool_version", tool_version},
                        {"config_hash", hash_hex(config_hash)},
                        {"input_hashes", inputs},
                        {"seed", seed}}}};
  return j.dump();
}

}  // namespace ampere
