#pragma once

#include <cstdlib>
#include <memory>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "frugalhop/policy.hpp"
#include "frugalhop/retrieval.hpp"

namespace fhop {

namespace detail {

// host[:port] with optional scheme; httplib::Client accepts the joined form.
inline std::string strip_trailing_slash(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

}  // namespace detail

// Client for the remote retriever wire protocol:
//   POST /search {"query": str, "k": int}
//     -> {"docs": [{"doc_id", "title", "text", "score"}, ...]}
// Any transport or schema failure surfaces as ok = false (a failed
// retrieval, penalized by the format reward). A fresh connection per call
// keeps concurrent workers independent.
class RemoteRetriever : public Retriever {
 public:
  explicit RemoteRetriever(std::string base_url, int timeout_seconds = 10)
      : base_url_(detail::strip_trailing_slash(std::move(base_url))),
        timeout_seconds_(timeout_seconds) {}

  RetrievalResult retrieve(const std::string& query, int k) const override {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);

    nlohmann::json body{{"query", query}, {"k", k}};
    auto res = client.Post("/search", body.dump(), "application/json");
    if (!res) return {false, "retriever unreachable: " + base_url_, {}};
    if (res->status < 200 || res->status >= 300)
      return {false, "retriever returned HTTP " + std::to_string(res->status), {}};

    RetrievedSet set;
    set.query = query;
    set.k = k;
    try {
      nlohmann::json j = nlohmann::json::parse(res->body);
      for (const auto& d : j.at("docs")) {
        ScoredDoc hit;
        hit.doc.doc_id = d.at("doc_id").get<std::string>();
        hit.doc.title = d.at("title").get<std::string>();
        hit.doc.text = d.at("text").get<std::string>();
        hit.score = d.value("score", 0.0);
        set.hits.push_back(std::move(hit));
      }
    } catch (const nlohmann::json::exception& e) {
      return {false, std::string("malformed retriever response: ") + e.what(), {}};
    }
    std::stable_sort(set.hits.begin(), set.hits.end(), [](const auto& a, const auto& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc.doc_id < b.doc.doc_id;
    });
    if (static_cast<int>(set.hits.size()) > k) set.hits.resize(k);
    return {true, "", std::move(set)};
  }

 private:
  std::string base_url_;
  int timeout_seconds_;
};

// Client for the remote policy wire protocol:
//   POST /v1/step {"messages": [{"role", "content"}], "temperature",
//                  "max_tokens"} -> {"text": str}
// Timeouts and non-2xx responses surface as ok = false, which the engine
// records as a parse-failed hop.
class RemotePolicyBackend : public PolicyBackend {
 public:
  RemotePolicyBackend(std::string base_url, std::string model = "", double temperature = 0.0,
                      int max_tokens = 256, int timeout_seconds = 30)
      : base_url_(detail::strip_trailing_slash(std::move(base_url))),
        model_(std::move(model)),
        temperature_(temperature),
        max_tokens_(max_tokens),
        timeout_seconds_(timeout_seconds) {
    if (const char* key = std::getenv("REMOTE_POLICY_API_KEY")) api_key_ = key;
  }

  Completion complete(const StepRequest& req) override { return post_step(req.prompt); }

  Completion answer(const std::string&, const std::string& prompt) override {
    return post_step(prompt);
  }

 private:
  Completion post_step(const std::string& prompt) const {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    nlohmann::json body{
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", temperature_},
        {"max_tokens", max_tokens_}};
    if (!model_.empty()) body["model"] = model_;

    auto res = client.Post("/v1/step", headers, body.dump(), "application/json");
    if (!res) return {"", false};
    if (res->status < 200 || res->status >= 300) return {"", false};
    try {
      nlohmann::json j = nlohmann::json::parse(res->body);
      return {j.at("text").get<std::string>(), true};
    } catch (const nlohmann::json::exception&) {
      return {"", false};
    }
  }

  std::string base_url_;
  std::string model_;
  double temperature_;
  int max_tokens_;
  int timeout_seconds_;
  std::string api_key_;
};

}  // namespace fhop
