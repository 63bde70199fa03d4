#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/text.hpp"

namespace fhop {

struct EvidenceSentence {
  std::string title;
  std::string sentence;
};

// One benchmark question: the query Q, its reference answers, the gold
// document titles recall is measured against, and per-title evidence
// sentences for support F1.
struct QAExample {
  std::string id;
  std::string question;
  std::vector<std::string> gold_answers;   // non-empty
  std::set<std::string> gold_titles;       // may be empty for answer-only sets
  std::vector<EvidenceSentence> gold_evidence;
  std::optional<int> hop_count;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::string text;
};

struct Dataset {
  std::vector<QAExample> examples;
  std::string split_name;

  const QAExample* find(const std::string& id) const {
    for (const auto& ex : examples)
      if (ex.id == id) return &ex;
    return nullptr;
  }
};

namespace detail {

inline nlohmann::json parse_jsonl_line(const std::string& line, std::size_t lineno) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("line " + std::to_string(lineno) + ": malformed JSON: " + e.what());
  }
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                           std::size_t lineno) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError("line " + std::to_string(lineno) + ": missing field \"" + key + "\"");
  return *it;
}

}  // namespace detail

// Dataset JSONL, one object per line:
//   {"id", "question", "answers": [..], "gold_titles": [..],
//    "evidence": [{"title", "sentence"}, ..], "hops": int?}
inline Dataset load_dataset(const std::string& path, std::optional<std::size_t> limit = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);

  Dataset ds;
  ds.split_name = std::filesystem::path(path).stem().string();
  std::unordered_set<std::string> seen_ids;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (limit && ds.examples.size() >= *limit) break;

    nlohmann::json obj = detail::parse_jsonl_line(line, lineno);
    QAExample ex;
    try {
      ex.id = detail::require_field(obj, "id", lineno).get<std::string>();
      ex.question = detail::require_field(obj, "question", lineno).get<std::string>();
      for (const auto& a : detail::require_field(obj, "answers", lineno))
        ex.gold_answers.push_back(a.get<std::string>());
      if (obj.contains("gold_titles"))
        for (const auto& t : obj["gold_titles"]) ex.gold_titles.insert(t.get<std::string>());
      if (obj.contains("evidence"))
        for (const auto& e : obj["evidence"])
          ex.gold_evidence.push_back(
              {e.at("title").get<std::string>(), e.at("sentence").get<std::string>()});
      if (obj.contains("hops") && !obj["hops"].is_null()) {
        int hops = obj["hops"].get<int>();
        if (hops <= 0)
          throw ValidationError("line " + std::to_string(lineno) + ": \"hops\" must be positive");
        ex.hop_count = hops;
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": bad field type: " + e.what());
    }
    if (ex.gold_answers.empty())
      throw ValidationError("line " + std::to_string(lineno) + ": \"answers\" must be non-empty");
    if (!seen_ids.insert(ex.id).second)
      throw ValidationError("line " + std::to_string(lineno) + ": duplicate id \"" + ex.id + "\"");
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

// Corpus JSONL: {"doc_id", "title", "text"}.
inline std::vector<Document> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);

  std::vector<Document> docs;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json obj = detail::parse_jsonl_line(line, lineno);
    Document d;
    try {
      d.doc_id = detail::require_field(obj, "doc_id", lineno).get<std::string>();
      d.title = detail::require_field(obj, "title", lineno).get<std::string>();
      d.text = detail::require_field(obj, "text", lineno).get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": bad field type: " + e.what());
    }
    if (d.title.empty())
      throw ValidationError("line " + std::to_string(lineno) + ": empty title");
    if (!seen_ids.insert(d.doc_id).second)
      throw ValidationError("line " + std::to_string(lineno) + ": duplicate doc_id \"" +
                            d.doc_id + "\"");
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace fhop
