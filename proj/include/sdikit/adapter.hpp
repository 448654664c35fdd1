#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "sdikit/model.hpp"
#include "sdikit/preprocess.hpp"

namespace sdikit::adapter {

enum class ErrorKind { kNone, kNetwork, kHttpStatus, kMalformedBody, kTimeout };

const char* error_kind_name(ErrorKind k);

// Adapters never throw on well-formed prompts; failures come back as a
// distinct error kind plus detail.
struct Response {
  bool ok = false;
  std::string text;
  ErrorKind error = ErrorKind::kNone;
  std::string detail;

  static Response success(std::string t) { return {true, std::move(t), ErrorKind::kNone, {}}; }
  static Response failure(ErrorKind kind, std::string detail) {
    return {false, {}, kind, std::move(detail)};
  }
};

class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  virtual std::string id() const = 0;
  virtual Response respond(const std::string& prompt) = 0;
};

// Greedy decoding against an in-process trained transformer; deterministic.
class LocalAdapter : public ModelAdapter {
 public:
  LocalAdapter(std::string id, model::ModelParameters params, prep::Vocab vocab,
               std::size_t max_new_tokens);

  std::string id() const override { return id_; }
  Response respond(const std::string& prompt) override;

 private:
  std::string id_;
  model::ModelParameters params_;
  prep::Vocab vocab_;
  std::size_t max_new_tokens_;
};

struct EndpointDescriptor {
  std::string base_url;  // e.g. http://127.0.0.1:8080
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string auth_env;  // env var holding the bearer token; empty = no auth
  int timeout_ms = 10000;
  int max_attempts = 3;
  int backoff_base_ms = 100;
  int backoff_cap_ms = 2000;
};

// Single-turn chat completion with capped exponential backoff. Retries
// network errors, timeouts, and 5xx statuses; other failures surface at once.
Response query_external(const EndpointDescriptor& endpoint, const std::string& prompt);

class ExternalAdapter : public ModelAdapter {
 public:
  explicit ExternalAdapter(EndpointDescriptor endpoint) : endpoint_(std::move(endpoint)) {}

  std::string id() const override {
    return endpoint_.model.empty() ? "external" : endpoint_.model;
  }
  Response respond(const std::string& prompt) override {
    return query_external(endpoint_, prompt);
  }

 private:
  EndpointDescriptor endpoint_;
};

}  // namespace sdikit::adapter
