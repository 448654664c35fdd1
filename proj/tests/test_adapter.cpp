#include <atomic>
#include <chrono>
#include <thread>

// adapter.hpp (Eigen) must precede httplib.h: the resolver headers behind
// httplib define a `_res` macro that mangles Eigen parameter names.
#include "sdikit/adapter.hpp"

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

using namespace sdikit;
using adapter::EndpointDescriptor;
using adapter::ErrorKind;

namespace {

struct MockServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit MockServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~MockServer() {
    server.stop();
    thread.join();
  }

  EndpointDescriptor endpoint() const {
    EndpointDescriptor e;
    e.base_url = "http://127.0.0.1:" + std::to_string(port);
    e.model = "mock-model";
    e.timeout_ms = 2000;
    e.backoff_base_ms = 5;
    e.backoff_cap_ms = 20;
    return e;
  }
};

}  // namespace

TEST_SUITE("adapter") {

TEST_CASE("mock endpoint response is carried verbatim") {
  std::string seen_body;
  MockServer mock([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    nlohmann::json body;
    body["choices"] = {{{"message",
                         {{"role", "assistant"},
                          {"content", "No, that is not correct. The Earth is round."}}}}};
    res.set_content(body.dump(), "application/json");
  });

  const auto response = adapter::query_external(mock.endpoint(), "Is the earth flat?");
  REQUIRE(response.ok);
  CHECK(response.text == "No, that is not correct. The Earth is round.");

  // The request is a single-turn chat completion.
  const auto sent = nlohmann::json::parse(seen_body);
  CHECK(sent.at("model") == "mock-model");
  REQUIRE(sent.at("messages").size() == 1);
  CHECK(sent["messages"][0]["role"] == "user");
  CHECK(sent["messages"][0]["content"] == "Is the earth flat?");
}

TEST_CASE("5xx responses are retried then surfaced as endpoint errors") {
  std::atomic<int> hits{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    hits++;
    res.status = 500;
    res.set_content("boom", "text/plain");
  });

  const auto response = adapter::query_external(mock.endpoint(), "hello");
  CHECK_FALSE(response.ok);
  CHECK(response.error == ErrorKind::kHttpStatus);
  CHECK(hits.load() == 3);
  CHECK(response.detail.find("500") != std::string::npos);
}

TEST_CASE("4xx responses are not retried") {
  std::atomic<int> hits{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    hits++;
    res.status = 403;
  });
  const auto response = adapter::query_external(mock.endpoint(), "hello");
  CHECK_FALSE(response.ok);
  CHECK(response.error == ErrorKind::kHttpStatus);
  CHECK(hits.load() == 1);
}

TEST_CASE("timeout below mock latency surfaces as a timeout error") {
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1200));
    res.set_content("{}", "application/json");
  });
  auto endpoint = mock.endpoint();
  endpoint.timeout_ms = 150;
  endpoint.max_attempts = 2;
  const auto response = adapter::query_external(endpoint, "hello");
  CHECK_FALSE(response.ok);
  CHECK(response.error == ErrorKind::kTimeout);
}

TEST_CASE("malformed bodies are surfaced without retry") {
  std::atomic<int> hits{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    hits++;
    res.set_content("not json at all", "text/plain");
  });
  const auto response = adapter::query_external(mock.endpoint(), "hello");
  CHECK_FALSE(response.ok);
  CHECK(response.error == ErrorKind::kMalformedBody);
  CHECK(hits.load() == 1);

  // Valid JSON with the wrong shape is also malformed.
  MockServer wrong_shape([&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"unexpected":true})", "application/json");
  });
  const auto response2 = adapter::query_external(wrong_shape.endpoint(), "hello");
  CHECK(response2.error == ErrorKind::kMalformedBody);
}

TEST_CASE("unreachable endpoints surface as network errors") {
  EndpointDescriptor endpoint;
  endpoint.base_url = "http://127.0.0.1:1";
  endpoint.timeout_ms = 200;
  endpoint.backoff_base_ms = 1;
  endpoint.backoff_cap_ms = 2;
  const auto response = adapter::query_external(endpoint, "hello");
  CHECK_FALSE(response.ok);
  CHECK((response.error == ErrorKind::kNetwork || response.error == ErrorKind::kTimeout));
}

TEST_CASE("bearer token is attached when the env var is set") {
  std::string auth_header;
  MockServer mock([&](const httplib::Request& req, httplib::Response& res) {
    auth_header = req.get_header_value("Authorization");
    nlohmann::json body;
    body["choices"] = {{{"message", {{"content", "ok"}}}}};
    res.set_content(body.dump(), "application/json");
  });
  ::setenv("SDIKIT_TEST_TOKEN", "sekrit", 1);
  auto endpoint = mock.endpoint();
  endpoint.auth_env = "SDIKIT_TEST_TOKEN";
  const auto response = adapter::query_external(endpoint, "hello");
  REQUIRE(response.ok);
  CHECK(auth_header == "Bearer sekrit");
  ::unsetenv("SDIKIT_TEST_TOKEN");
}

TEST_CASE("local adapter is deterministic and never fails on text input") {
  model::ModelConfig config;
  config.n_layers = 1;
  config.d_model = 16;
  config.n_heads = 2;
  config.d_ff = 32;
  config.vocab_size = 64;
  config.max_len = 32;
  const auto params = model::init_params(config, 9);

  pipeline::SyntheticExample seeded;
  seeded.example_id = "s";
  seeded.prompt_text = "is the earth flat";
  seeded.target_response = "no the earth is round";
  seeded.provenance = {"crafted"};
  const auto vocab = prep::Vocab::build({seeded}, 64);

  adapter::LocalAdapter local("toy", params, vocab, 8);
  const auto a = local.respond("is the earth flat");
  const auto b = local.respond("is the earth flat");
  REQUIRE(a.ok);
  CHECK(a.text == b.text);

  const auto overlong = local.respond(
      "this prompt has many words that will be truncated from the left side to fit the budget "
      "without any failure whatsoever even though it is long");
  CHECK(overlong.ok);
}

}  // TEST_SUITE
