#include "sdikit/adapter.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace sdikit::adapter {

using nlohmann::json;

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kNone: return "none";
    case ErrorKind::kNetwork: return "network";
    case ErrorKind::kHttpStatus: return "http_status";
    case ErrorKind::kMalformedBody: return "malformed_body";
    case ErrorKind::kTimeout: return "timeout";
  }
  return "unknown";
}

LocalAdapter::LocalAdapter(std::string id, model::ModelParameters params, prep::Vocab vocab,
                           std::size_t max_new_tokens)
    : id_(std::move(id)),
      params_(std::move(params)),
      vocab_(std::move(vocab)),
      max_new_tokens_(max_new_tokens) {}

Response LocalAdapter::respond(const std::string& prompt) {
  std::vector<int> tokens;
  tokens.push_back(prep::kBosId);
  const std::vector<int> prompt_ids = vocab_.encode_text(prompt);
  const std::size_t max_len = static_cast<std::size_t>(params_.config.max_len);
  const std::size_t budget = max_len > max_new_tokens_ + 2 ? max_len - max_new_tokens_ - 2 : 1;
  // Long prompts are truncated from the left, mirroring training-time layout.
  const std::size_t start = prompt_ids.size() > budget ? prompt_ids.size() - budget : 0;
  tokens.insert(tokens.end(), prompt_ids.begin() + static_cast<std::ptrdiff_t>(start),
                prompt_ids.end());
  tokens.push_back(prep::kSepId);

  const std::size_t room = max_len > tokens.size() ? max_len - tokens.size() : 0;
  const auto out = model::generate(params_, tokens, std::min(max_new_tokens_, room));
  const std::vector<int> generated(out.begin() + static_cast<std::ptrdiff_t>(tokens.size()),
                                   out.end());
  return Response::success(vocab_.decode(generated));
}

namespace {

bool is_retryable_status(int status) { return status >= 500 && status < 600; }

Response attempt_request(const EndpointDescriptor& endpoint, const std::string& prompt) {
  httplib::Client client(endpoint.base_url);
  const time_t sec = endpoint.timeout_ms / 1000;
  const time_t usec = (endpoint.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Headers headers;
  if (!endpoint.auth_env.empty()) {
    if (const char* token = std::getenv(endpoint.auth_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  json body;
  body["model"] = endpoint.model;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});

  auto result = client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
        err == httplib::Error::Write) {
      return Response::failure(ErrorKind::kTimeout, httplib::to_string(err));
    }
    return Response::failure(ErrorKind::kNetwork, httplib::to_string(err));
  }
  if (result->status < 200 || result->status >= 300) {
    return Response::failure(ErrorKind::kHttpStatus,
                             "status " + std::to_string(result->status));
  }
  json parsed = json::parse(result->body, nullptr, false);
  if (parsed.is_discarded()) {
    return Response::failure(ErrorKind::kMalformedBody, "response body is not JSON");
  }
  try {
    return Response::success(
        parsed.at("choices").at(0).at("message").at("content").get<std::string>());
  } catch (const json::exception& e) {
    return Response::failure(ErrorKind::kMalformedBody,
                             std::string("missing choices[0].message.content: ") + e.what());
  }
}

}  // namespace

Response query_external(const EndpointDescriptor& endpoint, const std::string& prompt) {
  Response last = Response::failure(ErrorKind::kNetwork, "no attempt made");
  int delay_ms = endpoint.backoff_base_ms;
  int attempts_made = 0;
  for (int attempt = 1; attempt <= endpoint.max_attempts; ++attempt) {
    attempts_made = attempt;
    last = attempt_request(endpoint, prompt);
    if (last.ok) return last;
    const bool retryable =
        last.error == ErrorKind::kNetwork || last.error == ErrorKind::kTimeout ||
        (last.error == ErrorKind::kHttpStatus && is_retryable_status([&] {
           // detail is "status NNN"
           const auto pos = last.detail.rfind(' ');
           return pos == std::string::npos ? 0 : std::atoi(last.detail.c_str() + pos + 1);
         }()));
    if (!retryable || attempt == endpoint.max_attempts) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    delay_ms = std::min(delay_ms * 2, endpoint.backoff_cap_ms);
  }
  last.detail += " (after " + std::to_string(attempts_made) + " attempt(s))";
  return last;
}

}  // namespace sdikit::adapter
