#include <gtest/gtest.h>

#include <atomic>
#include <memory>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "frugalhop/metrics.hpp"
#include "frugalhop/remote.hpp"
#include "frugalhop/rollout.hpp"

namespace {

using namespace fhop;

// In-process server speaking both wire protocols.
class TestServer {
 public:
  TestServer() {
    server_.Post("/search", [this](const httplib::Request& req, httplib::Response& res) {
      ++search_calls;
      if (fail_next_with_status) {
        res.status = *fail_next_with_status;
        fail_next_with_status.reset();
        return;
      }
      if (malformed_next) {
        malformed_next = false;
        res.set_content("{not json", "application/json");
        return;
      }
      auto body = nlohmann::json::parse(req.body);
      last_query = body.at("query").get<std::string>();
      last_k = body.at("k").get<int>();
      nlohmann::json docs = nlohmann::json::array();
      // served deliberately out of score order; the client re-sorts
      docs.push_back({{"doc_id", "r2"}, {"title", "Remote Two"}, {"text", "beta"},
                      {"score", 0.5}});
      docs.push_back({{"doc_id", "r1"}, {"title", "Remote One"}, {"text", "alpha"},
                      {"score", 0.9}});
      docs.push_back({{"doc_id", "r3"}, {"title", "Remote Three"}, {"text", "gamma"},
                      {"score", 0.1}});
      res.set_content(nlohmann::json{{"docs", docs}}.dump(), "application/json");
    });
    server_.Post("/v1/step", [this](const httplib::Request& req, httplib::Response& res) {
      ++step_calls;
      if (fail_next_with_status) {
        res.status = *fail_next_with_status;
        fail_next_with_status.reset();
        return;
      }
      auto body = nlohmann::json::parse(req.body);
      last_temperature = body.at("temperature").get<double>();
      last_max_tokens = body.at("max_tokens").get<int>();
      last_prompt = body.at("messages")[0].at("content").get<std::string>();
      auto it = req.headers.find("Authorization");
      last_auth = it == req.headers.end() ? "" : it->second;
      res.set_content(nlohmann::json{{"text", canned_text}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~TestServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> search_calls{0};
  std::atomic<int> step_calls{0};
  std::optional<int> fail_next_with_status;
  bool malformed_next = false;
  std::string canned_text = "Thought: remote Action: Search[remote query]";
  std::string last_query, last_prompt, last_auth;
  int last_k = 0;
  double last_temperature = -1.0;
  int last_max_tokens = 0;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(RemoteRetriever, SuccessSortsAndTruncates) {
  TestServer server;
  RemoteRetriever retriever(server.url());
  auto result = retriever.retrieve("test query", 2);
  ASSERT_TRUE(result.ok) << result.error;
  EXPECT_EQ(server.last_query, "test query");
  EXPECT_EQ(server.last_k, 2);
  ASSERT_EQ(result.docs.hits.size(), 2u);
  EXPECT_EQ(result.docs.hits[0].doc.doc_id, "r1");  // re-sorted by score
  EXPECT_EQ(result.docs.hits[1].doc.doc_id, "r2");
}

TEST(RemoteRetriever, Non2xxIsFailure) {
  TestServer server;
  server.fail_next_with_status = 500;
  RemoteRetriever retriever(server.url());
  auto result = retriever.retrieve("q", 3);
  EXPECT_FALSE(result.ok);
  EXPECT_NE(result.error.find("500"), std::string::npos);
}

TEST(RemoteRetriever, MalformedBodyIsFailure) {
  TestServer server;
  server.malformed_next = true;
  RemoteRetriever retriever(server.url());
  EXPECT_FALSE(retriever.retrieve("q", 3).ok);
}

TEST(RemoteRetriever, UnreachableHostIsFailure) {
  RemoteRetriever retriever("http://127.0.0.1:1", 1);
  EXPECT_FALSE(retriever.retrieve("q", 3).ok);
}

TEST(RemotePolicy, StepRoundTrip) {
  TestServer server;
  RemotePolicyBackend backend(server.url(), "test-model", 0.7, 128);
  StepRequest req{"q1", "p", "question", 1, "rendered prompt here"};
  auto completion = backend.complete(req);
  ASSERT_TRUE(completion.ok);
  EXPECT_EQ(completion.text, server.canned_text);
  EXPECT_EQ(server.last_prompt, "rendered prompt here");
  EXPECT_DOUBLE_EQ(server.last_temperature, 0.7);
  EXPECT_EQ(server.last_max_tokens, 128);

  auto p = parse_step(completion.text);
  EXPECT_TRUE(p.parse_ok);
  EXPECT_EQ(p.search_query, "remote query");
}

TEST(RemotePolicy, FailureSurfacesAsNotOk) {
  TestServer server;
  server.fail_next_with_status = 503;
  RemotePolicyBackend backend(server.url());
  EXPECT_FALSE(backend.complete({"q", "p", "?", 1, "x"}).ok);

  RemotePolicyBackend unreachable("http://127.0.0.1:1", "", 0.0, 16, 1);
  EXPECT_FALSE(unreachable.answer("q", "prompt").ok);
}

TEST(RemotePolicy, ApiKeyHeaderPassThrough) {
  TestServer server;
  ::setenv("REMOTE_POLICY_API_KEY", "sekret", 1);
  RemotePolicyBackend backend(server.url());
  ::unsetenv("REMOTE_POLICY_API_KEY");
  ASSERT_TRUE(backend.answer("q", "p").ok);
  EXPECT_EQ(server.last_auth, "Bearer sekret");
}

TEST(RemotePolicy, GeneratorSmokeWithComputableMatch) {
  TestServer server;
  server.canned_text = "The film was directed by Mara Voss.";
  auto index = std::make_shared<RetrieverIndex>(RetrieverIndex::build({
      {"d1", "Starfall", "starfall is a film directed by mara voss"},
      {"d2", "Noise", "unrelated text"},
  }));
  IndexRetriever retriever(index);

  auto steps = std::make_shared<ScriptedBackend>();
  steps->add_steps("q1", {"Thought: find it Action: Search[starfall film]",
                          "Thought: done Action: Finish[]"});
  Policy policy{steps, PromptSet{"p", "", {}}, true};
  QAExample ex;
  ex.id = "q1";
  ex.question = "Who directed Starfall?";
  ex.gold_answers = {"Mara Voss"};
  ex.gold_titles = {"Starfall"};
  Rollout r = run_rollout(ex, policy, retriever, {6, 2, false, true});

  Policy remote_gen{std::make_shared<RemotePolicyBackend>(server.url()),
                    PromptSet{"g", "", {}}, true};
  const std::string answer = generate_answer(r, remote_gen);
  EXPECT_FALSE(answer.empty());
  EXPECT_DOUBLE_EQ(match_score(answer, ex.gold_answers), 1.0);
  EXPECT_NE(server.last_prompt.find("Question: Who directed Starfall?"), std::string::npos);
}

TEST(RemoteRetriever, ConcurrentCallsDoNotInterleave) {
  TestServer server;
  RemoteRetriever retriever(server.url());
  std::atomic<int> failures{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&] {
      for (int i = 0; i < 5; ++i) {
        auto result = retriever.retrieve("q", 3);
        if (!result.ok || result.docs.hits.size() != 3) ++failures;
      }
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(server.search_calls.load(), 20);
}

}  // namespace
