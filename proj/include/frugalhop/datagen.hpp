#pragma once

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/parallel.hpp"
#include "frugalhop/policy.hpp"
#include "frugalhop/retrieval.hpp"
#include "frugalhop/rollout.hpp"

namespace fhop {

enum class SftSource { NoFinish, WithFinish };

inline const char* sft_source_name(SftSource s) {
  return s == SftSource::NoFinish ? "no_finish" : "with_finish";
}

struct Candidate {
  int prompt_index = 0;  // position in the prompt list (tie-break key)
  std::string prompt_id;
  StepProposal proposal;
  RetrievedSet retrieved;  // post-dedup against the shared context
  double recall_gain = 0.0;
};

// All candidates proposed for one hop from the same shared context.
struct CandidateSet {
  int hop_index = 0;
  std::set<std::string> context_titles;  // normalized, before this hop
  double context_recall = 0.0;
  std::vector<Candidate> candidates;
};

struct SftRecord {
  std::string example_id;
  int hop_index = 0;
  std::string input_text;   // render_react_prompt of the prefix
  std::string target_text;  // serialize_step of the chosen proposal
  SftSource source = SftSource::NoFinish;
};

namespace detail {

inline double recall_of(const std::set<std::string>& titles,
                        const std::set<std::string>& gold_normalized) {
  if (gold_normalized.empty()) return 0.0;
  int hit = 0;
  for (const auto& t : gold_normalized)
    if (titles.count(t)) ++hit;
  return static_cast<double>(hit) / static_cast<double>(gold_normalized.size());
}

}  // namespace detail

// Index of the candidate maximizing recall of (context union candidate docs),
// ties broken by lowest prompt index. Recall is recomputed from the stored
// context rather than trusting the cached gains.
inline std::size_t select_best_candidate(const CandidateSet& set,
                                         const std::set<std::string>& gold_titles) {
  if (set.candidates.empty())
    throw ValidationError("select_best_candidate: empty candidate set");
  const auto gold = normalize_title_set(gold_titles);
  std::size_t best = 0;
  double best_recall = -1.0;
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    std::set<std::string> merged = set.context_titles;
    for (const auto& h : set.candidates[i].retrieved.hits)
      merged.insert(normalize_title(h.doc.title));
    const double r = detail::recall_of(merged, gold);
    if (r > best_recall + 1e-12) {
      best_recall = r;
      best = i;
    }
  }
  return best;
}

struct GreedyRunResult {
  Rollout rollout;
  std::vector<CandidateSet> candidate_sets;  // one per executed hop
  std::vector<SftRecord> records;            // one per executed hop
};

// One best-of-n greedy run (Algorithm 1's dataset-generation loop): at every
// hop each prompt proposes a step, the proposal with the highest context
// recall wins and extends the shared context.
inline GreedyRunResult greedy_best_of_n_run(const QAExample& question,
                                            const std::vector<PromptSet>& prompts,
                                            std::shared_ptr<PolicyBackend> backend,
                                            const Retriever& retriever,
                                            const RolloutConfig& config, bool allow_finish) {
  config.validate();
  if (prompts.empty()) throw ValidationError("datagen requires at least one prompt set");

  GreedyRunResult result;
  Rollout& r = result.rollout;
  r.example_id = question.id;
  r.question = question.question;
  r.budget = config.budget;
  r.initial_retrieved = config.initial_retrieval;
  r.count_initial = config.count_initial_in_searches;

  const auto gold = normalize_title_set(question.gold_titles);
  std::set<std::string> context_titles;
  std::vector<HistoryStep> history;

  if (config.initial_retrieval) {
    RetrievalResult res = retriever.retrieve(question.question, config.k);
    if (res.ok) {
      r.initial_docs = res.docs;
      HistoryStep step;
      for (const auto& h : r.initial_docs.hits) {
        r.context_ids.insert(h.doc.doc_id);
        context_titles.insert(normalize_title(h.doc.title));
        step.docs.push_back(h.doc);
      }
      history.push_back(std::move(step));
    } else {
      history.push_back(HistoryStep{});
    }
  }

  r.terminated_by = StopCause::Budget;
  for (int h = 1; h <= config.budget; ++h) {
    CandidateSet cs;
    cs.hop_index = h;
    cs.context_titles = context_titles;
    cs.context_recall = detail::recall_of(context_titles, gold);

    std::vector<std::string> inputs(prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) {
      inputs[i] = render_react_prompt(question.question, history, prompts[i]);
      Policy policy{backend, prompts[i], allow_finish};
      StepProposal prop =
          policy.propose_step(question.id, question.question, h, inputs[i]);
      if (!prop.parse_ok) continue;  // unusable candidate

      Candidate cand;
      cand.prompt_index = static_cast<int>(i);
      cand.prompt_id = prompts[i].id;
      cand.proposal = prop;
      if (prop.action == StepAction::Search) {
        RetrievalResult res = retriever.retrieve(prop.search_query, config.k);
        if (!res.ok) continue;  // failed retrieval; drop the candidate
        cand.retrieved = dedup_against_context(res.docs, r.context_ids);
      }
      std::set<std::string> merged = context_titles;
      for (const auto& hit : cand.retrieved.hits)
        merged.insert(normalize_title(hit.doc.title));
      cand.recall_gain = detail::recall_of(merged, gold) - cs.context_recall;
      cs.candidates.push_back(std::move(cand));
    }
    if (cs.candidates.empty()) break;  // nothing usable this hop

    const std::size_t sel = select_best_candidate(cs, question.gold_titles);
    const Candidate& chosen = cs.candidates[sel];

    SftRecord record;
    record.example_id = question.id;
    record.hop_index = h;
    record.input_text = inputs[chosen.prompt_index];
    record.target_text = serialize_step(chosen.proposal);
    record.source = allow_finish ? SftSource::WithFinish : SftSource::NoFinish;
    result.records.push_back(std::move(record));

    HopRecord hop;
    hop.hop_index = h;
    hop.proposal = chosen.proposal;
    hop.retrieved = chosen.retrieved;
    hop.retrieval_ok = true;
    r.hops.push_back(hop);

    if (chosen.proposal.action == StepAction::Finish) {
      result.candidate_sets.push_back(std::move(cs));
      r.terminated_by = StopCause::Finish;
      break;
    }

    HistoryStep step;
    step.thought = chosen.proposal.thought;
    step.action = StepAction::Search;
    step.query = chosen.proposal.search_query;
    for (const auto& hit : chosen.retrieved.hits) {
      r.context_ids.insert(hit.doc.doc_id);
      context_titles.insert(normalize_title(hit.doc.title));
      step.docs.push_back(hit.doc);
    }
    history.push_back(std::move(step));
    result.candidate_sets.push_back(std::move(cs));
  }

  int searches = 0;
  for (const auto& hop : r.hops)
    if (Rollout::is_search_op(hop)) ++searches;
  r.h_term = searches +
             ((config.initial_retrieval && config.count_initial_in_searches) ? 1 : 0);
  return result;
}

struct DatagenQuestionResult {
  std::string example_id;
  GreedyRunResult no_finish;
  GreedyRunResult with_finish;
  SftSource source = SftSource::NoFinish;  // which run feeds the SFT export
};

struct DatagenResult {
  std::vector<DatagenQuestionResult> questions;
  std::vector<SftRecord> records;
  int no_finish_sourced = 0;
  int with_finish_sourced = 0;
  std::vector<std::string> skipped;  // questions with zero usable hops
};

// Stage-1 dataset generation: both runs per question, then a seeded
// per-question draw decides which run's records are emitted (probability
// `mixture` for the NO_FINISH run).
inline DatagenResult generate_dataset(const Dataset& train,
                                      const std::vector<PromptSet>& prompts,
                                      std::shared_ptr<PolicyBackend> backend,
                                      const Retriever& retriever, const RolloutConfig& config,
                                      double mixture, std::uint64_t seed,
                                      int concurrency = 1) {
  if (train.examples.empty()) throw ValidationError("datagen requires a non-empty dataset");
  if (mixture < 0.0 || mixture > 1.0)
    throw ValidationError("mixture must be in [0, 1]");
  if (prompts.empty()) throw ValidationError("datagen requires at least one prompt set");

  // Source draws are fixed up front so concurrency cannot affect them.
  std::mt19937_64 rng(splitmix64(seed ^ 0x6d697874757265ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SftSource> sources(train.examples.size());
  for (auto& s : sources)
    s = unit(rng) < mixture ? SftSource::NoFinish : SftSource::WithFinish;

  std::vector<DatagenQuestionResult> per_question(train.examples.size());
  parallel_for(train.examples.size(), concurrency, [&](std::size_t i) {
    const QAExample& ex = train.examples[i];
    DatagenQuestionResult q;
    q.example_id = ex.id;
    q.no_finish = greedy_best_of_n_run(ex, prompts, backend, retriever, config,
                                       /*allow_finish=*/false);
    q.with_finish = greedy_best_of_n_run(ex, prompts, backend, retriever, config,
                                         /*allow_finish=*/true);
    q.source = sources[i];
    per_question[i] = std::move(q);
  });

  DatagenResult result;
  for (auto& q : per_question) {
    const GreedyRunResult& chosen =
        q.source == SftSource::NoFinish ? q.no_finish : q.with_finish;
    if (chosen.records.empty()) {
      std::cerr << "warning: question " << q.example_id
                << " produced no usable hops; skipped\n";
      result.skipped.push_back(q.example_id);
    } else {
      if (q.source == SftSource::NoFinish)
        ++result.no_finish_sourced;
      else
        ++result.with_finish_sourced;
      for (const auto& rec : chosen.records) result.records.push_back(rec);
    }
    result.questions.push_back(std::move(q));
  }
  return result;
}

// SFT JSONL: {"example_id", "hop", "input", "target", "source"}.
inline std::size_t export_sft_jsonl(const std::vector<SftRecord>& records,
                                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& r : records) {
    nlohmann::json j{{"example_id", r.example_id},
                     {"hop", r.hop_index},
                     {"input", r.input_text},
                     {"target", r.target_text},
                     {"source", sft_source_name(r.source)}};
    out << j.dump() << "\n";
  }
  return records.size();
}

inline std::vector<SftRecord> load_sft_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<SftRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j = detail::parse_jsonl_line(line, lineno);
    SftRecord r;
    try {
      r.example_id = j.at("example_id").get<std::string>();
      r.hop_index = j.at("hop").get<int>();
      r.input_text = j.at("input").get<std::string>();
      r.target_text = j.at("target").get<std::string>();
      const std::string src = j.at("source").get<std::string>();
      if (src == "no_finish")
        r.source = SftSource::NoFinish;
      else if (src == "with_finish")
        r.source = SftSource::WithFinish;
      else
        throw ValidationError("line " + std::to_string(lineno) + ": bad source " + src);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace fhop
