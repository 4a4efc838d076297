#include "nvs/manifest.hpp"

#include <openssl/evp.h>

#include "nvs/image_io.hpp"

namespace nvs {

std::string sha256_hex(const std::vector<uint8_t>& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error::internal("HashFailure", "SHA-256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

void RunManifest::add_input(const std::string& name, const std::string& path) {
  inputs[name] = Json{{"path", path}, {"sha256", sha256_file(path)}};
}

Json RunManifest::to_json() const {
  Json j{{"tool_version", tool_version},
         {"command", command},
         {"seed", seed},
         {"params", params},
         {"inputs", inputs},
         {"artifacts", artifacts},
         {"timings_ms", timings_ms}};
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.command = j.at("command").get<std::string>();
  m.seed = j.value("seed", uint64_t{0});
  m.params = j.at("params");
  if (j.contains("inputs")) {
    for (const auto& [name, entry] : j.at("inputs").items()) m.inputs[name] = entry;
  }
  if (j.contains("artifacts")) {
    for (const auto& [rel, sha] : j.at("artifacts").items()) {
      m.artifacts[rel] = sha.get<std::string>();
    }
  }
  if (j.contains("timings_ms")) {
    for (const auto& [stage, ms] : j.at("timings_ms").items()) {
      m.timings_ms[stage] = ms.get<double>();
    }
  }
  return m;
}

void RunManifest::save(const std::string& path) const {
  const std::string text = to_json().dump(2) + "\n";
  write_file(path, std::vector<uint8_t>(text.begin(), text.end()));
}

RunManifest RunManifest::load(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file(path);
  try {
    return from_json(Json::parse(bytes.begin(), bytes.end()));
  } catch (const Json::exception& e) {
    throw Error::validation("InvalidJson", std::string("manifest parse error: ") + e.what());
  }
}

}  // namespace nvs
