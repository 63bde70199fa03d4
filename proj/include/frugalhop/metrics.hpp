#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "frugalhop/errors.hpp"
#include "frugalhop/qa.hpp"
#include "frugalhop/text.hpp"

namespace fhop {

// Word-level F1 over token multisets: F1 = 2*TP / (2*TP + FP + FN).
// Both sides empty -> 1; exactly one side empty -> 0.
inline double token_f1(const std::vector<std::string>& pred,
                       const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int tp = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++tp;
    }
  }
  if (tp == 0) return 0.0;
  const int fp = static_cast<int>(pred.size()) - tp;
  const int fn = static_cast<int>(gold.size()) - tp;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

// Max word-level F1 of the normalized prediction over the gold answers.
inline double answer_f1(const std::string& prediction, const std::vector<std::string>& golds) {
  if (golds.empty()) throw ValidationError("answer_f1 requires at least one gold answer");
  const auto pred_tokens = answer_tokens(prediction);
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, token_f1(pred_tokens, answer_tokens(g)));
  return best;
}

inline double exact_match(const std::string& prediction, const std::vector<std::string>& golds) {
  if (golds.empty()) throw ValidationError("exact_match requires at least one gold answer");
  const std::string pred = normalize_answer(prediction);
  for (const auto& g : golds)
    if (pred == normalize_answer(g)) return 1.0;
  return 0.0;
}

// 1 if any normalized gold answer is a substring of the normalized prediction.
inline double match_score(const std::string& prediction, const std::vector<std::string>& golds) {
  if (golds.empty()) throw ValidationError("match_score requires at least one gold answer");
  const std::string pred = normalize_answer(prediction);
  for (const auto& g : golds) {
    const std::string gn = normalize_answer(g);
    if (!gn.empty() && pred.find(gn) != std::string::npos) return 1.0;
    if (gn.empty() && pred.empty()) return 1.0;
  }
  return 0.0;
}

// Fraction of gold document titles present in the context, by normalized
// title equality.
inline double doc_recall(const std::set<std::string>& context_titles,
                         const std::set<std::string>& gold_titles) {
  if (gold_titles.empty()) throw ValidationError("doc_recall requires non-empty gold titles");
  const auto gold = normalize_title_set(gold_titles);
  const auto ctx = normalize_title_set(context_titles);
  int hit = 0;
  for (const auto& t : gold)
    if (ctx.count(t)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(gold.size());
}

// Mean over gold evidence sentences of the best word-level F1 against any
// retrieved document's text.
inline double support_f1(const std::vector<Document>& context_docs,
                         const std::vector<EvidenceSentence>& gold_evidence) {
  if (gold_evidence.empty())
    throw ValidationError("support_f1 requires non-empty gold evidence");
  if (context_docs.empty()) return 0.0;

  std::vector<std::vector<std::string>> doc_tokens;
  doc_tokens.reserve(context_docs.size());
  for (const auto& d : context_docs) doc_tokens.push_back(answer_tokens(d.text));

  double total = 0.0;
  for (const auto& ev : gold_evidence) {
    const auto ev_tokens = answer_tokens(ev.sentence);
    double best = 0.0;
    for (const auto& dt : doc_tokens) best = std::max(best, token_f1(ev_tokens, dt));
    total += best;
  }
  return total / static_cast<double>(gold_evidence.size());
}

struct AnswerScores {
  double f1 = 0.0;
  double em = 0.0;
  double match = 0.0;
};

struct RetrievalScores {
  double recall = 0.0;
  double support_f1 = 0.0;
  int searches = 0;
};

struct TradeoffScores {
  double answer = 0.0;
  double retrieval = 0.0;
};

// %Tradeoff formulas over fraction-valued metrics and the mean search count.
inline TradeoffScores tradeoff_metrics(double f1, double em, double match, double recall,
                                       double sup_f1, double mean_searches) {
  if (!(mean_searches > 0.0)) throw ValidationError("tradeoff metrics require mean searches > 0");
  TradeoffScores t;
  t.answer = 100.0 * (f1 + em + match) / (3.0 * mean_searches);
  t.retrieval = 100.0 * (recall + sup_f1) / (2.0 * mean_searches);
  return t;
}

}  // namespace fhop
