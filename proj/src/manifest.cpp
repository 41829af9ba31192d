#include "armwind/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "json.hpp"

#include "armwind/error.hpp"

namespace armwind {

std::string sha1_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) == 1,
          ErrorKind::InvalidInput, "SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string ExperimentManifest::canonical() const {
  std::map<std::string, std::string> all = params;
  all["command"] = command;
  all["seed"] = std::to_string(seed);
  all["version"] = version;
  std::string outs;
  for (const auto& o : outputs) outs += (outs.empty() ? "" : ",") + o;
  all["outputs"] = outs;
  std::string s;
  for (const auto& [k, v] : all) s += k + "=" + v + "\n";
  return s;
}

std::string ExperimentManifest::hash() const {
  const std::string body = canonical();
  std::string blob = "blob " + std::to_string(body.size());
  blob.push_back('\0');
  return sha1_hex(blob + body);
}

std::string ExperimentManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = version;
  j["seed"] = seed;
  j["threads"] = threads;
  j["params"] = params;
  j["outputs"] = outputs;
  j["hash"] = hash();
  return j.dump(2);
}

}  // namespace armwind
