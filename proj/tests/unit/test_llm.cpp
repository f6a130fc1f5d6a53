// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "uat/llm/backend.hpp"
#include "uat/llm/classifiers.hpp"
#include "uat/llm/http_backend.hpp"

#include <httplib.h>
#include <json.hpp>

using namespace uat::llm;

namespace {

CompletionRequest request_for(std::string user) {
  CompletionRequest r;
  r.messages = {{Role::User, std::move(user)}};
  return r;
}

BackendErrc backend_error_of(auto&& fn) {
  try {
    fn();
  } catch (const BackendError& e) {
    return e.code();
  }
  FAIL("expected BackendError");
  return BackendErrc::BadResponse;
}

// Local chat-completions stand-in. Answers with the queued statuses first,
// then 200 with a fixed completion.
class FakeProvider {
 public:
  explicit FakeProvider(std::vector<int> statuses) : statuses_(std::move(statuses)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const auto n = calls_++;
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      if (n < statuses_.size()) {
        res.status = statuses_[n];
        res.set_content("{\"error\":\"nope\"}", "application/json");
        return;
      }
      res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"Final Answer: hi"}}]})",
                      "application/json");
    });
    server_.Post("/v1/embeddings", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"data":[{"embedding":[0.5,0.25,1.0]}]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeProvider() {
    server_.stop();
    thread_.join();
  }

  HttpBackendOptions options() const {
    HttpBackendOptions o;
    o.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    o.api_key = "test-key";
    o.timeout = std::chrono::milliseconds(2000);
    return o;
  }

  std::size_t calls() const { return calls_; }
  std::string last_auth() const { return last_auth_; }
  std::string last_body() const { return last_body_; }

 private:
  httplib::Server server_;
  std::vector<int> statuses_;
  std::atomic<std::size_t> calls_{0};
  std::string last_auth_;
  std::string last_body_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("scripted backend replays in order and records requests") {
  ScriptedBackend backend({"one", "two"});
  CHECK(backend.complete(request_for("a")) == "one");
  CHECK(backend.complete(request_for("b")) == "two");
  CHECK(backend.exhausted());
  CHECK(backend_error_of([&] { backend.complete(request_for("c")); }) == BackendErrc::Exhausted);
  REQUIRE(backend.recorded_requests().size() == 3);
  CHECK(backend.recorded_requests()[1].messages.front().content == "b");
}

TEST_CASE("scripted backends are deterministic") {
  const std::vector<std::string> script = {"x", "y", "z"};
  ScriptedBackend a(script), b(script);
  for (int i = 0; i < 3; ++i) CHECK(a.complete(request_for("q")) == b.complete(request_for("q")));
}

TEST_CASE("script files split on separator lines") {
  CHECK(ScriptedBackend::parse_script("first\nline two\n---\nsecond\n---\n") ==
        std::vector<std::string>{"first\nline two", "second"});
  CHECK(ScriptedBackend::parse_script("a --- b") == std::vector<std::string>{"a --- b"});
  const auto path = std::filesystem::temp_directory_path() / "uat_script_test.txt";
  std::ofstream(path) << "Thought: t\nFinal Answer: 1\n---\nFinal Answer: 2\n";
  auto backend = ScriptedBackend::from_file(path);
  CHECK(backend.script().size() == 2);
  std::filesystem::remove(path);
}

TEST_CASE("request validation") {
  CHECK_NOTHROW(validate(request_for("hi")));
  CHECK_THROWS_AS(validate(request_for("")), std::invalid_argument);
  auto r = request_for("hi");
  r.max_tokens = 0;
  CHECK_THROWS_AS(validate(r), std::invalid_argument);
}

TEST_CASE("preference classification") {
  CHECK(parse_preference("left") == Preference::Left);
  CHECK(parse_preference("  Right.\n") == Preference::Unclear);
  CHECK(parse_preference(" RIGHT \n") == Preference::Right);
  CHECK(parse_preference("neutral") == Preference::Neutral);
  CHECK(parse_preference("banana") == Preference::Unclear);
  CHECK(parse_preference("left or right") == Preference::Unclear);

  ScriptedBackend backend({"right"});
  const std::string feedback = "The one on the right asked what I needed and then gave a much better list.";
  CHECK(classify_preference(feedback, backend) == Preference::Right);
  const auto& sent = backend.recorded_requests().front();
  REQUIRE(sent.messages.size() == 2);
  CHECK(sent.messages[0] == ChatMessage{Role::System, std::string(kPreferencePrompt)});
  CHECK(sent.messages[1] == ChatMessage{Role::User, feedback});
  CHECK_THROWS_AS(classify_preference("   ", backend), std::invalid_argument);
}

TEST_CASE("keyword sentiment stub") {
  const auto classify = keyword_sentiment();
  CHECK(classify_sentiment("The left bot was great and helpful", classify) == Sentiment::Positive);
  CHECK(classify_sentiment("It did not understand me", classify) == Sentiment::Negative);
  CHECK(classify_sentiment("I didn't like the questions", classify) == Sentiment::Negative);
  CHECK(classify_sentiment("The follow-up question was frustrating", classify) == Sentiment::Negative);
  CHECK(classify_sentiment("Another good answer", classify) == Sentiment::Positive);
  CHECK_THROWS_AS(classify_sentiment(" \n", classify), std::invalid_argument);
}

TEST_CASE("remote sentiment label decoding") {
  CHECK(sentiment_from_response(R"([[{"label":"NEGATIVE","score":0.9},{"label":"POSITIVE","score":0.1}]])") ==
        Sentiment::Negative);
  CHECK(sentiment_from_response(R"([{"label":"POSITIVE","score":0.7},{"label":"NEGATIVE","score":0.3}])") ==
        Sentiment::Positive);
  CHECK_THROWS_AS(sentiment_from_response("{}"), ClassifierError);
  CHECK_THROWS_AS(sentiment_from_response("not json"), ClassifierError);
}

TEST_CASE("http backend request and response shapes") {
  auto r = request_for("hello");
  r.stop = {"\nObservation:"};
  const auto body = nlohmann::json::parse(request_body(r, "gpt-x"));
  CHECK(body["model"] == "gpt-x");
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "hello");
  CHECK(body["stop"][0] == "\nObservation:");
  CHECK(body["temperature"] == 0.0);

  CHECK(completion_text(R"({"choices":[{"message":{"content":"ok"}}]})") == "ok");
  CHECK(backend_error_of([] { completion_text(R"({"choices":[]})"); }) == BackendErrc::BadResponse);
  CHECK(backend_error_of([] { completion_text("<html>"); }) == BackendErrc::BadResponse);

  CHECK(split_base_url("https://api.example.com/v1") == std::pair<std::string, std::string>{"https://api.example.com", "/v1"});
  CHECK(split_base_url("http://127.0.0.1:9000") == std::pair<std::string, std::string>{"http://127.0.0.1:9000", ""});
}

TEST_CASE("http backend retries transient failures with doubling backoff") {
  FakeProvider provider({503, 429});
  std::vector<std::chrono::milliseconds> sleeps;
  HttpBackend backend(provider.options(), [&](std::chrono::milliseconds d) { sleeps.push_back(d); });
  CHECK(backend.complete(request_for("hi")) == "Final Answer: hi");
  CHECK(provider.calls() == 3);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(500), std::chrono::milliseconds(1000)});
  CHECK(provider.last_auth() == "Bearer test-key");
  CHECK(nlohmann::json::parse(provider.last_body())["model"] == "gpt-3.5-turbo");
}

TEST_CASE("http backend gives up after the attempt budget") {
  FakeProvider provider({500, 500, 500, 500});
  HttpBackend backend(provider.options(), [](auto) {});
  CHECK(backend_error_of([&] { backend.complete(request_for("hi")); }) == BackendErrc::Network);
  CHECK(provider.calls() == 3);
}

TEST_CASE("http backend does not retry auth failures") {
  FakeProvider provider({401});
  HttpBackend backend(provider.options(), [](auto) { FAIL("should not sleep"); });
  CHECK(backend_error_of([&] { backend.complete(request_for("hi")); }) == BackendErrc::Auth);
  CHECK(provider.calls() == 1);
}

TEST_CASE("http backend reports unreachable providers as network errors") {
  HttpBackendOptions options;
  options.base_url = "http://127.0.0.1:1/v1";
  options.api_key = "k";
  options.attempts = 2;
  options.timeout = std::chrono::milliseconds(500);
  HttpBackend backend(options, [](auto) {});
  CHECK(backend_error_of([&] { backend.complete(request_for("hi")); }) == BackendErrc::Network);
}

TEST_CASE("provider embedder") {
  FakeProvider provider({});
  ProviderEmbedder embedder(provider.options(), "embed-model", 3);
  const auto v = embedder.embed("text");
  REQUIRE(v.size() == 3);
  CHECK(v[1] == 0.25);
  ProviderEmbedder wrong(provider.options(), "embed-model", 4);
  CHECK_THROWS(wrong.embed("text"));
}

TEST_CASE("options from the environment") {
  ::unsetenv("PROVIDER_API_KEY");
  CHECK(backend_error_of([] { options_from_env(); }) == BackendErrc::Auth);
  ::setenv("PROVIDER_API_KEY", "abc", 1);
  ::setenv("PROVIDER_BASE_URL", "http://localhost:1234/v1", 1);
  const auto options = options_from_env();
  CHECK(options.api_key == "abc");
  CHECK(options.base_url == "http://localhost:1234/v1");
  ::unsetenv("PROVIDER_API_KEY");
  ::unsetenv("PROVIDER_BASE_URL");
}
