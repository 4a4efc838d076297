#include "nvs/remote.hpp"

#include <httplib.h>

#include "nvs/image_io.hpp"

namespace nvs {

namespace {
const char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::vector<uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back(kB64Alphabet[v & 63]);
  }
  const size_t rest = bytes.size() - i;
  if (rest == 1) {
    const uint32_t v = bytes[i] << 16;
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (rest == 2) {
    const uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
  static const auto value_of = [] {
    std::array<int8_t, 256> table;
    table.fill(-1);
    for (int i = 0; i < 64; ++i) table[static_cast<uint8_t>(kB64Alphabet[i])] = static_cast<int8_t>(i);
    return table;
  }();
  if (text.size() % 4 != 0) throw Error::protocol("base64 payload length must be a multiple of 4");
  std::vector<uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    uint32_t v = 0;
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) throw Error::protocol("misplaced base64 padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw Error::protocol("base64 data after padding");
      const int8_t d = value_of[static_cast<uint8_t>(c)];
      if (d < 0) throw Error::protocol("invalid base64 character");
      v = (v << 6) | static_cast<uint32_t>(d);
    }
    out.push_back(static_cast<uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<uint8_t>(v));
  }
  return out;
}

Json completion_request_to_wire(const CompletionRequest& req, const std::string& request_id) {
  Json renders = Json::array();
  for (const RenderOutput& r : req.renders) {
    renders.push_back(Json{{"rgb_png_b64", base64_encode(encode_image_png(r.rgb))},
                           {"depth_pfm_b64", base64_encode(encode_depth_pfm(r.depth))},
                           {"mask_png_b64", base64_encode(encode_mask_png(r.mask))}});
  }
  Json poses = Json::array();
  for (const Pose& p : req.trajectory.poses) poses.push_back(json_from_pose(p));
  Json references = Json::array();
  for (const auto& [idx, img] : req.reference_images) {
    references.push_back(
        Json{{"index", idx}, {"rgb_png_b64", base64_encode(encode_image_png(img))}});
  }
  return Json{{"request_id", request_id},
              {"intrinsics", json_from_intrinsics(req.trajectory.intrinsics)},
              {"poses", poses},
              {"renders", renders},
              {"references", references}};
}

CompletionRequest completion_request_from_wire(const Json& j, std::string* request_id) {
  try {
    if (request_id) *request_id = j.at("request_id").get<std::string>();
    CompletionRequest req;
    req.trajectory.intrinsics = intrinsics_from_json(j.at("intrinsics"));
    for (const Json& jp : j.at("poses")) req.trajectory.poses.push_back(pose_from_json(jp));
    for (const Json& jr : j.at("renders")) {
      RenderOutput r;
      r.rgb = decode_image_png(base64_decode(jr.at("rgb_png_b64").get<std::string>()));
      r.depth = decode_depth_pfm(base64_decode(jr.at("depth_pfm_b64").get<std::string>()));
      r.mask = decode_mask_png(base64_decode(jr.at("mask_png_b64").get<std::string>()));
      req.renders.push_back(std::move(r));
    }
    for (const Json& jr : j.at("references")) {
      req.reference_images.emplace_back(
          jr.at("index").get<int>(),
          decode_image_png(base64_decode(jr.at("rgb_png_b64").get<std::string>())));
    }
    return req;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error::protocol(std::string("malformed completion request: ") + e.what());
  }
}

Json completion_response_to_wire(const CompletionResponse& resp, const std::string& request_id) {
  Json frames = Json::array();
  for (const Image& f : resp.frames) frames.push_back(base64_encode(encode_image_png(f)));
  Json out{{"request_id", request_id}, {"frames", frames}};
  if (resp.depths) {
    Json depths = Json::array();
    for (const DepthMap& d : *resp.depths) depths.push_back(base64_encode(encode_depth_pfm(d)));
    out["depths"] = depths;
  }
  return out;
}

CompletionResponse completion_response_from_wire(const Json& j, std::string* request_id) {
  try {
    if (request_id) *request_id = j.at("request_id").get<std::string>();
    CompletionResponse resp;
    for (const Json& jf : j.at("frames")) {
      resp.frames.push_back(decode_image_png(base64_decode(jf.get<std::string>())));
    }
    if (j.contains("depths")) {
      resp.depths.emplace();
      for (const Json& jd : j.at("depths")) {
        resp.depths->push_back(decode_depth_pfm(base64_decode(jd.get<std::string>())));
      }
    }
    return resp;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error::protocol(std::string("malformed completion response: ") + e.what());
  }
}

RemoteCompleter::RemoteCompleter(RemoteConfig config) : config_(std::move(config)) {}

CompletionResponse RemoteCompleter::complete(const CompletionRequest& req) {
  validate_request(req);
  const std::string request_id =
      "req-" + std::to_string(next_request_.fetch_add(1)) + "-" +
      std::to_string(std::hash<std::string>{}(config_.endpoint) & 0xffff);
  const std::string body = completion_request_to_wire(req, request_id).dump();

  httplib::Client client(config_.endpoint);
  const auto timeout_whole = static_cast<time_t>(config_.timeout_s);
  const auto timeout_frac =
      static_cast<time_t>((config_.timeout_s - static_cast<double>(timeout_whole)) * 1e6);
  client.set_connection_timeout(timeout_whole, timeout_frac);
  client.set_read_timeout(timeout_whole, timeout_frac);
  client.set_write_timeout(timeout_whole, timeout_frac);

  httplib::Result result;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    result = client.Post("/v1/complete", body, "application/json");
    if (result) break;
  }
  if (!result) {
    throw Error::transport("completion endpoint unreachable: " + config_.endpoint + " (" +
                           httplib::to_string(result.error()) + ")");
  }
  if (result->status >= 500) {
    throw Error::transport("completion service error: HTTP " + std::to_string(result->status));
  }
  if (result->status >= 400) {
    throw Error::protocol("completion service rejected the request: HTTP " +
                          std::to_string(result->status));
  }
  if (result->status != 200) {
    throw Error::protocol("unexpected HTTP status " + std::to_string(result->status));
  }

  Json j;
  try {
    j = Json::parse(result->body);
  } catch (const Json::exception& e) {
    throw Error::protocol(std::string("response is not valid JSON: ") + e.what());
  }
  std::string echoed_id;
  CompletionResponse resp = completion_response_from_wire(j, &echoed_id);
  if (echoed_id != request_id) {
    throw Error::protocol("response request_id does not match (sent " + request_id + ", got " +
                          echoed_id + ")");
  }
  if (resp.frames.size() != req.trajectory.poses.size()) {
    throw Error::protocol("expected " + std::to_string(req.trajectory.poses.size()) +
                          " frames, got " + std::to_string(resp.frames.size()));
  }
  if (resp.depths && resp.depths->size() != req.trajectory.poses.size()) {
    throw Error::protocol("depth count does not match frame count");
  }
  // References crossed the wire as 8-bit PNG; compare against that round trip.
  validate_response(req, resp, /*quantized_references=*/true);
  return resp;
}

CompletionResponse remote_complete(const std::string& endpoint, const CompletionRequest& req,
                                   double timeout_s) {
  RemoteCompleter completer(RemoteConfig{endpoint, timeout_s, 0});
  return completer.complete(req);
}

struct CompletionServer::Impl {
  httplib::Server server;
};

CompletionServer::CompletionServer(std::shared_ptr<ViewCompleter> completer)
    : completer_(std::move(completer)), impl_(std::make_unique<Impl>()) {}

CompletionServer::~CompletionServer() { stop(); }

void CompletionServer::start(const std::string& host, int port) {
  impl_->server.Post("/v1/complete", [this](const httplib::Request& req, httplib::Response& res) {
    std::string request_id = "unknown";
    try {
      const Json body = Json::parse(req.body);
      const CompletionRequest creq = completion_request_from_wire(body, &request_id);
      validate_request(creq);
      const CompletionResponse cresp = completer_->complete(creq);
      res.set_content(completion_response_to_wire(cresp, request_id).dump(), "application/json");
    } catch (const Error& e) {
      res.status = e.kind() == ErrorKind::internal ? 500 : 400;
      res.set_content(Json{{"request_id", request_id}, {"error", e.what()}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(Json{{"request_id", request_id}, {"error", e.what()}}.dump(),
                      "application/json");
    }
  });

  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    if (port_ <= 0) throw Error::transport("cannot bind completion server");
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      throw Error::transport("cannot bind completion server to port " + std::to_string(port));
    }
    port_ = port;
  }
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void CompletionServer::stop() {
  if (thread_.joinable()) {
    impl_->server.stop();
    thread_.join();
  }
}

void CompletionServer::wait() {
  if (thread_.joinable()) thread_.join();
}

}  // namespace nvs
