#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/qa.hpp"
#include "frugalhop/text.hpp"

namespace fhop {

struct ScoredDoc {
  Document doc;
  double score = 0.0;
};

// Result of one search: hits sorted by score descending, ties broken by
// ascending doc_id, never more than k, no duplicate doc_ids.
struct RetrievedSet {
  std::string query;
  std::vector<ScoredDoc> hits;
  int k = 0;

  std::vector<std::string> doc_ids() const {
    std::vector<std::string> ids;
    ids.reserve(hits.size());
    for (const auto& h : hits) ids.push_back(h.doc.doc_id);
    return ids;
  }
};

struct Posting {
  std::int32_t doc = 0;  // ordinal into documents()
  std::int32_t tf = 0;
};

// Immutable Okapi BM25 inverted index. Documents are indexed over
// "title text"; idf = ln((N - df + 0.5)/(df + 0.5) + 1).
class RetrieverIndex {
 public:
  static RetrieverIndex build(std::vector<Document> corpus, double k1 = 1.2, double b = 0.75) {
    if (corpus.empty()) throw ValidationError("cannot build index from an empty corpus");
    if (!(k1 > 0.0)) throw ValidationError("k1 must be > 0");
    if (b < 0.0 || b > 1.0) throw ValidationError("b must be in [0, 1]");

    RetrieverIndex idx;
    idx.k1_ = k1;
    idx.b_ = b;
    idx.docs_ = std::move(corpus);
    idx.doc_lengths_.resize(idx.docs_.size());

    std::unordered_map<std::string, std::int32_t> seen_ids;
    double total_len = 0.0;
    for (std::int32_t d = 0; d < static_cast<std::int32_t>(idx.docs_.size()); ++d) {
      const Document& doc = idx.docs_[d];
      if (!seen_ids.emplace(doc.doc_id, d).second)
        throw ValidationError("duplicate doc_id in corpus: \"" + doc.doc_id + "\"");
      auto tokens = tokenize_for_index(doc.title + " " + doc.text);
      idx.doc_lengths_[d] = static_cast<std::int32_t>(tokens.size());
      total_len += static_cast<double>(tokens.size());
      std::unordered_map<std::string, std::int32_t> tf;
      for (auto& t : tokens) ++tf[t];
      for (auto& [term, count] : tf) idx.postings_[term].push_back({d, count});
    }
    idx.avg_doc_length_ = total_len / static_cast<double>(idx.docs_.size());
    idx.id_to_ordinal_ = std::move(seen_ids);
    return idx;
  }

  const std::vector<Document>& documents() const { return docs_; }
  const std::unordered_map<std::string, std::vector<Posting>>& postings() const {
    return postings_;
  }
  const std::vector<std::int32_t>& doc_lengths() const { return doc_lengths_; }
  double avg_doc_length() const { return avg_doc_length_; }
  double k1() const { return k1_; }
  double b() const { return b_; }
  int doc_count() const { return static_cast<int>(docs_.size()); }

  int document_frequency(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : static_cast<int>(it->second.size());
  }

  const Document* find_doc(const std::string& doc_id) const {
    auto it = id_to_ordinal_.find(doc_id);
    return it == id_to_ordinal_.end() ? nullptr : &docs_[it->second];
  }

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::unordered_map<std::string, std::int32_t> id_to_ordinal_;
  std::vector<std::int32_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  double k1_ = 1.2;
  double b_ = 0.75;
};

// Top-k BM25 search. Query tokens keep multiset semantics (a repeated term
// contributes once per occurrence). Deterministic: ties broken by doc_id.
inline RetrievedSet search(const RetrieverIndex& index, const std::string& query, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");

  const double n = static_cast<double>(index.doc_count());
  std::unordered_map<std::int32_t, double> scores;
  for (const auto& term : tokenize_for_index(query)) {
    auto it = index.postings().find(term);
    if (it == index.postings().end()) continue;
    const double df = static_cast<double>(it->second.size());
    const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
    for (const Posting& p : it->second) {
      const double tf = static_cast<double>(p.tf);
      const double len = static_cast<double>(index.doc_lengths()[p.doc]);
      const double denom =
          tf + index.k1() * (1.0 - index.b() + index.b() * len / index.avg_doc_length());
      scores[p.doc] += idf * tf * (index.k1() + 1.0) / denom;
    }
  }

  std::vector<std::pair<std::int32_t, double>> ranked(scores.begin(), scores.end());
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return index.documents()[a.first].doc_id < index.documents()[b.first].doc_id;
  });

  RetrievedSet out;
  out.query = query;
  out.k = k;
  for (const auto& [ordinal, score] : ranked) {
    if (static_cast<int>(out.hits.size()) >= k) break;
    out.hits.push_back({index.documents()[ordinal], score});
  }
  return out;
}

// Drop hits whose doc_id is already in the accumulated context. Order, query
// and k are preserved.
inline RetrievedSet dedup_against_context(const RetrievedSet& hits,
                                          const std::set<std::string>& seen_ids) {
  RetrievedSet out;
  out.query = hits.query;
  out.k = hits.k;
  for (const auto& h : hits.hits)
    if (!seen_ids.count(h.doc.doc_id)) out.hits.push_back(h);
  return out;
}

struct RetrievalResult {
  bool ok = true;
  std::string error;
  RetrievedSet docs;
};

// Pluggable retriever: local BM25 index or a remote endpoint. Implementations
// must be safe to call from many workers at once.
class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual RetrievalResult retrieve(const std::string& query, int k) const = 0;
};

class IndexRetriever : public Retriever {
 public:
  explicit IndexRetriever(std::shared_ptr<const RetrieverIndex> index)
      : index_(std::move(index)) {}

  RetrievalResult retrieve(const std::string& query, int k) const override {
    return {true, "", search(*index_, query, k)};
  }

  const RetrieverIndex& index() const { return *index_; }

 private:
  std::shared_ptr<const RetrieverIndex> index_;
};

// On-disk layout: <dir>/corpus.jsonl (docs in ordinal order) plus
// <dir>/meta.json with the BM25 parameters. Postings are rebuilt on load.
inline void save_index(const RetrieverIndex& index, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto corpus_path = std::filesystem::path(dir) / "corpus.jsonl";
  std::ofstream out(corpus_path);
  if (!out) throw IoError("cannot write " + corpus_path.string());
  for (const auto& d : index.documents()) {
    nlohmann::json j{{"doc_id", d.doc_id}, {"title", d.title}, {"text", d.text}};
    out << j.dump() << "\n";
  }
  nlohmann::json meta{{"format", 1},
                      {"k1", index.k1()},
                      {"b", index.b()},
                      {"doc_count", index.doc_count()}};
  const auto meta_path = std::filesystem::path(dir) / "meta.json";
  std::ofstream mout(meta_path);
  if (!mout) throw IoError("cannot write " + meta_path.string());
  mout << meta.dump(2) << "\n";
}

inline RetrieverIndex load_index(const std::string& dir) {
  const auto meta_path = std::filesystem::path(dir) / "meta.json";
  std::ifstream min(meta_path);
  if (!min) throw IoError("cannot open " + meta_path.string());
  nlohmann::json meta;
  try {
    min >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad index meta.json: " + std::string(e.what()));
  }
  auto docs = load_corpus((std::filesystem::path(dir) / "corpus.jsonl").string());
  auto index = RetrieverIndex::build(std::move(docs), meta.value("k1", 1.2),
                                     meta.value("b", 0.75));
  if (meta.contains("doc_count") && meta["doc_count"].get<int>() != index.doc_count())
    throw ValidationError("index dir corrupt: doc_count mismatch");
  return index;
}

}  // namespace fhop
