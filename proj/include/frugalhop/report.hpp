#pragma once

#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/metrics.hpp"
#include "frugalhop/rollout.hpp"

namespace fhop {

struct ExampleReport {
  std::string example_id;
  AnswerScores answer;
  RetrievalScores retrieval;
  bool has_evidence = false;
};

// Run-level aggregation. Metric aggregates are stored as fractions in [0, 1];
// the JSON report multiplies them by 100.
struct RunReport {
  std::vector<ExampleReport> examples;
  int n = 0;
  double f1 = 0.0;
  double em = 0.0;
  double match = 0.0;
  double recall = 0.0;
  double support_f1 = 0.0;
  double searches = 0.0;
  double tradeoff_answer = 0.0;
  double tradeoff_retrieval = 0.0;
};

// Score every rollout against its dataset example and aggregate. Rollouts
// without an answer are scored as empty predictions. Support F1 averages
// over examples that provide evidence sentences.
inline RunReport evaluate_run(const std::vector<Rollout>& rollouts, const Dataset& dataset) {
  std::unordered_map<std::string, const QAExample*> by_id;
  for (const auto& ex : dataset.examples) by_id[ex.id] = &ex;

  RunReport report;
  int evidence_n = 0;
  for (const auto& r : rollouts) {
    auto it = by_id.find(r.example_id);
    if (it == by_id.end())
      throw ValidationError("rollout example_id not in dataset: " + r.example_id);
    const QAExample& ex = *it->second;
    if (ex.gold_titles.empty())
      throw ValidationError("example " + ex.id + " has no gold titles; cannot compute recall");

    ExampleReport er;
    er.example_id = r.example_id;
    const std::string prediction = r.answer.value_or("");
    er.answer.f1 = answer_f1(prediction, ex.gold_answers);
    er.answer.em = exact_match(prediction, ex.gold_answers);
    er.answer.match = match_score(prediction, ex.gold_answers);
    er.retrieval.recall = doc_recall(r.context_titles(), ex.gold_titles);
    er.retrieval.searches = r.h_term;
    if (!ex.gold_evidence.empty()) {
      er.retrieval.support_f1 = support_f1(r.context_documents(), ex.gold_evidence);
      er.has_evidence = true;
      ++evidence_n;
    }

    report.f1 += er.answer.f1;
    report.em += er.answer.em;
    report.match += er.answer.match;
    report.recall += er.retrieval.recall;
    report.support_f1 += er.retrieval.support_f1;
    report.searches += er.retrieval.searches;
    report.examples.push_back(std::move(er));
  }

  report.n = static_cast<int>(report.examples.size());
  if (report.n == 0) throw ValidationError("evaluate_run: no rollouts to score");
  report.f1 /= report.n;
  report.em /= report.n;
  report.match /= report.n;
  report.recall /= report.n;
  report.support_f1 = evidence_n > 0 ? report.support_f1 / evidence_n : 0.0;
  report.searches /= report.n;
  if (report.searches > 0.0) {
    auto t = tradeoff_metrics(report.f1, report.em, report.match, report.recall,
                              report.support_f1, report.searches);
    report.tradeoff_answer = t.answer;
    report.tradeoff_retrieval = t.retrieval;
  }
  return report;
}

inline nlohmann::json report_to_json(const RunReport& r) {
  return nlohmann::json{{"n", r.n},
                        {"f1", 100.0 * r.f1},
                        {"em", 100.0 * r.em},
                        {"match", 100.0 * r.match},
                        {"recall", 100.0 * r.recall},
                        {"support_f1", 100.0 * r.support_f1},
                        {"searches", r.searches},
                        {"tradeoff_answer", r.tradeoff_answer},
                        {"tradeoff_retrieval", r.tradeoff_retrieval}};
}

inline void write_report_csv(const std::string& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "example_id,f1,em,match,recall,support_f1,searches\n";
  char buf[256];
  for (const auto& e : report.examples) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n", e.example_id.c_str(),
                  e.answer.f1, e.answer.em, e.answer.match, e.retrieval.recall,
                  e.retrieval.support_f1, e.retrieval.searches);
    out << buf;
  }
}

}  // namespace fhop
