#pragma once

#include <atomic>
#include <memory>
#include <thread>

#include "nvs/completer.hpp"
#include "nvs/serialization.hpp"

namespace nvs {

std::string base64_encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

// Wire schema for POST /v1/complete (images as base64 PNG, depth as base64
// PFM). Decoding throws ProtocolError on any malformed payload.
Json completion_request_to_wire(const CompletionRequest& req, const std::string& request_id);
CompletionRequest completion_request_from_wire(const Json& j, std::string* request_id);
Json completion_response_to_wire(const CompletionResponse& resp, const std::string& request_id);
CompletionResponse completion_response_from_wire(const Json& j, std::string* request_id);

struct RemoteConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080
  double timeout_s = 30.0;
  int retries = 0;  // additional attempts on transport failure, same request id
};

// Client for an external completion service. Responses are validated against
// the completion contract before they are returned: wrong frame counts or a
// mismatched request id raise ProtocolError, altered reference frames raise
// ContractViolation, connection failures and 5xx raise TransportError.
class RemoteCompleter : public ViewCompleter {
 public:
  explicit RemoteCompleter(RemoteConfig config);

  CompletionResponse complete(const CompletionRequest& req) override;
  std::string name() const override { return "remote"; }

 private:
  RemoteConfig config_;
  std::atomic<uint64_t> next_request_ = 0;
};

CompletionResponse remote_complete(const std::string& endpoint, const CompletionRequest& req,
                                   double timeout_s);

// In-process HTTP host for a ViewCompleter; serves /v1/complete. Used for
// loopback testing and by the `serve` CLI command.
class CompletionServer {
 public:
  explicit CompletionServer(std::shared_ptr<ViewCompleter> completer);
  ~CompletionServer();

  // Binds to the port (0 picks a free one) and serves on a background thread.
  void start(const std::string& host, int port);
  void stop();
  // Blocks until the server is stopped; used by the `serve` CLI command.
  void wait();
  int port() const { return port_; }

 private:
  struct Impl;
  std::shared_ptr<ViewCompleter> completer_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace nvs
