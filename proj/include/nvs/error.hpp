#pragma once

#include <stdexcept>
#include <string>

namespace nvs {

// Error categories map 1:1 onto CLI exit codes (see tools/).
enum class ErrorKind {
  validation,  // bad arguments, malformed inputs, violated preconditions
  contract,    // a component broke one of its documented invariants
  protocol,    // malformed or out-of-spec wire payload
  transport,   // network-level failure (timeout, connection, 5xx)
  internal,    // numerical failure or a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  // Stable machine-readable name, e.g. "InvalidDepth" or "ProtocolError".
  const std::string& code() const { return code_; }

  static Error validation(std::string code, const std::string& message) {
    return Error(ErrorKind::validation, std::move(code), message);
  }
  static Error contract(std::string code, const std::string& message) {
    return Error(ErrorKind::contract, std::move(code), message);
  }
  static Error protocol(const std::string& message) {
    return Error(ErrorKind::protocol, "ProtocolError", message);
  }
  static Error transport(const std::string& message) {
    return Error(ErrorKind::transport, "TransportError", message);
  }
  static Error internal(std::string code, const std::string& message) {
    return Error(ErrorKind::internal, std::move(code), message);
  }

 private:
  ErrorKind kind_;
  std::string code_;
};

}  // namespace nvs
