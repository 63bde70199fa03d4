#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/metrics.hpp"
#include "frugalhop/policy.hpp"
#include "frugalhop/qa.hpp"
#include "frugalhop/retrieval.hpp"

namespace fhop {

enum class StopCause { Finish, Budget };

struct HopRecord {
  int hop_index = 0;          // 1-based
  StepProposal proposal;
  RetrievedSet retrieved;     // post-dedup; empty for FINISH and failed hops
  bool retrieval_ok = false;  // transport outcome; FINISH hops count as ok
};

// The full record of one retrieve-and-reason loop over a question.
struct Rollout {
  std::string example_id;
  std::string question;
  RetrievedSet initial_docs;       // D_0; empty when initial retrieval is off
  bool initial_retrieved = false;  // whether D_0 = R(Q) was performed
  bool count_initial = true;       // whether D_0 counts as a search operation
  std::vector<HopRecord> hops;
  int h_term = 0;  // executed search operations (the latency metric)
  StopCause terminated_by = StopCause::Budget;
  int budget = 0;
  std::set<std::string> context_ids;
  std::optional<std::string> answer;

  // True for hops that issued a retrieval: well-formed SEARCH actions,
  // including ones whose transport failed.
  static bool is_search_op(const HopRecord& h) {
    return h.proposal.parse_ok && h.proposal.action == StepAction::Search;
  }

  std::vector<Document> context_documents() const {
    std::vector<Document> docs;
    for (const auto& h : initial_docs.hits) docs.push_back(h.doc);
    for (const auto& hop : hops)
      for (const auto& h : hop.retrieved.hits) docs.push_back(h.doc);
    return docs;
  }

  std::set<std::string> context_titles() const {
    std::set<std::string> titles;
    for (const auto& d : context_documents()) titles.insert(d.title);
    return titles;
  }
};

struct RolloutConfig {
  int budget = 6;                    // B
  int k = 3;                         // documents per search
  bool initial_retrieval = false;    // D_0 = R(Q) when true
  bool count_initial_in_searches = true;

  void validate() const {
    if (budget < 1) throw ValidationError("budget must be >= 1 (B >= 1)");
    if (k < 1) throw ValidationError("k must be >= 1");
  }
};

// Run the budgeted retrieve-and-reason loop for one question. Transport and
// parse failures never abort the loop; they are recorded on the hop and
// penalized by the format reward downstream.
inline Rollout run_rollout(const QAExample& question, const Policy& policy,
                           const Retriever& retriever, const RolloutConfig& config) {
  config.validate();

  Rollout r;
  r.example_id = question.id;
  r.question = question.question;
  r.budget = config.budget;
  r.initial_retrieved = config.initial_retrieval;
  r.count_initial = config.count_initial_in_searches;

  std::vector<HistoryStep> history;
  if (config.initial_retrieval) {
    RetrievalResult res = retriever.retrieve(question.question, config.k);
    if (res.ok) {
      r.initial_docs = res.docs;
      for (const auto& h : r.initial_docs.hits) r.context_ids.insert(h.doc.doc_id);
    }
    HistoryStep step;
    for (const auto& h : r.initial_docs.hits) step.docs.push_back(h.doc);
    history.push_back(std::move(step));
  }

  r.terminated_by = StopCause::Budget;
  for (int h = 1; h <= config.budget; ++h) {
    const std::string prompt = render_react_prompt(question.question, history, policy.prompts);
    StepProposal prop = policy.propose_step(question.id, question.question, h, prompt);

    HopRecord hop;
    hop.hop_index = h;
    hop.proposal = prop;

    if (!prop.parse_ok) {
      hop.retrieval_ok = false;
      r.hops.push_back(std::move(hop));
      continue;  // failed hops are not rendered into later prompts
    }

    if (prop.action == StepAction::Finish) {
      hop.retrieval_ok = true;
      r.hops.push_back(std::move(hop));
      r.terminated_by = StopCause::Finish;
      break;
    }

    RetrievalResult res = retriever.retrieve(prop.search_query, config.k);
    HistoryStep step;
    step.thought = prop.thought;
    step.action = StepAction::Search;
    step.query = prop.search_query;
    if (res.ok) {
      hop.retrieved = dedup_against_context(res.docs, r.context_ids);
      for (const auto& hit : hop.retrieved.hits) {
        r.context_ids.insert(hit.doc.doc_id);
        step.docs.push_back(hit.doc);
      }
      hop.retrieval_ok = true;
    } else {
      hop.retrieval_ok = false;
    }
    r.hops.push_back(hop);
    history.push_back(std::move(step));
  }

  int searches = 0;
  for (const auto& hop : r.hops)
    if (Rollout::is_search_op(hop)) ++searches;
  r.h_term = searches +
             ((config.initial_retrieval && config.count_initial_in_searches) ? 1 : 0);
  return r;
}

// Document recall over context prefixes, one element per counted search
// operation (D_0 first when it counts). Non-decreasing by construction.
inline std::vector<double> recall_trajectory(const Rollout& rollout,
                                             const std::set<std::string>& gold_titles) {
  if (gold_titles.empty())
    throw ValidationError("recall_trajectory requires non-empty gold titles");
  const auto gold = normalize_title_set(gold_titles);

  std::set<std::string> titles;
  auto recall_now = [&]() {
    int hit = 0;
    for (const auto& t : gold)
      if (titles.count(t)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(gold.size());
  };

  std::vector<double> traj;
  if (rollout.initial_retrieved) {
    for (const auto& h : rollout.initial_docs.hits)
      titles.insert(normalize_title(h.doc.title));
    if (rollout.count_initial) traj.push_back(recall_now());
  }
  for (const auto& hop : rollout.hops) {
    if (!Rollout::is_search_op(hop)) continue;
    for (const auto& h : hop.retrieved.hits) titles.insert(normalize_title(h.doc.title));
    traj.push_back(recall_now());
  }
  return traj;
}

// Render the accumulated context into an answer prompt and invoke the
// generator backend once. The raw answer text is returned unnormalized.
inline std::string generate_answer(const Rollout& rollout, const Policy& generator) {
  const std::string prompt =
      render_answer_prompt(rollout.question, rollout.context_documents());
  Completion c = generator.answer(rollout.example_id, prompt);
  if (!c.ok) throw TransportError("answer generation failed for " + rollout.example_id);
  return c.text;
}

// --- wire format ------------------------------------------------------------
// One rollout per line:
//   {"example_id", "h_term", "terminated_by", "hops": [{"thought", "action",
//    "query", "doc_ids": [...], "retrieval_ok"}], "initial_doc_ids": [...],
//    "answer"?}
// Actions serialize as "search" / "finish"; hops whose output failed to parse
// serialize as "invalid".

inline nlohmann::json rollout_to_json(const Rollout& r) {
  nlohmann::json hops = nlohmann::json::array();
  for (const auto& hop : r.hops) {
    nlohmann::json h;
    h["thought"] = hop.proposal.thought;
    if (!hop.proposal.parse_ok)
      h["action"] = "invalid";
    else
      h["action"] = hop.proposal.action == StepAction::Finish ? "finish" : "search";
    h["query"] = hop.proposal.search_query;
    h["doc_ids"] = hop.retrieved.doc_ids();
    h["retrieval_ok"] = hop.retrieval_ok;
    hops.push_back(std::move(h));
  }
  nlohmann::json j;
  j["example_id"] = r.example_id;
  j["h_term"] = r.h_term;
  j["terminated_by"] = r.terminated_by == StopCause::Finish ? "finish" : "budget";
  j["hops"] = std::move(hops);
  j["initial_doc_ids"] = r.initial_docs.doc_ids();
  if (r.answer) j["answer"] = *r.answer;
  return j;
}

using DocLookup = std::function<std::optional<Document>(const std::string&)>;

inline Rollout rollout_from_json(const nlohmann::json& j, const DocLookup& lookup) {
  Rollout r;
  try {
    r.example_id = j.at("example_id").get<std::string>();
    r.h_term = j.at("h_term").get<int>();
    const std::string cause = j.at("terminated_by").get<std::string>();
    if (cause != "finish" && cause != "budget")
      throw ValidationError("bad terminated_by: " + cause);
    r.terminated_by = cause == "finish" ? StopCause::Finish : StopCause::Budget;

    auto hydrate = [&](const std::string& doc_id) {
      auto doc = lookup(doc_id);
      if (!doc) throw ValidationError("unknown doc_id in rollout file: " + doc_id);
      return *doc;
    };

    for (const auto& id : j.at("initial_doc_ids")) {
      r.initial_docs.hits.push_back({hydrate(id.get<std::string>()), 0.0});
      r.context_ids.insert(id.get<std::string>());
    }

    int hop_index = 0;
    for (const auto& h : j.at("hops")) {
      HopRecord hop;
      hop.hop_index = ++hop_index;
      hop.proposal.thought = h.at("thought").get<std::string>();
      const std::string action = h.at("action").get<std::string>();
      if (action == "invalid") {
        hop.proposal.parse_ok = false;
      } else if (action == "finish") {
        hop.proposal.parse_ok = true;
        hop.proposal.action = StepAction::Finish;
      } else if (action == "search") {
        hop.proposal.parse_ok = true;
        hop.proposal.action = StepAction::Search;
        hop.proposal.search_query = h.at("query").get<std::string>();
      } else {
        throw ValidationError("bad hop action: " + action);
      }
      hop.proposal.raw_text = serialize_step(hop.proposal);
      hop.retrieval_ok = h.at("retrieval_ok").get<bool>();
      for (const auto& id : h.at("doc_ids")) {
        hop.retrieved.hits.push_back({hydrate(id.get<std::string>()), 0.0});
        r.context_ids.insert(id.get<std::string>());
      }
      r.hops.push_back(std::move(hop));
    }
    if (j.contains("answer")) r.answer = j["answer"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad rollout record: ") + e.what());
  }

  // Infer whether D_0 counted as a search from the stored h_term. An
  // initial retrieval that returned nothing (failed transport or no hits)
  // still counts, so h_term = searches + 1 implies it was performed.
  int searches = 0;
  for (const auto& hop : r.hops)
    if (Rollout::is_search_op(hop)) ++searches;
  if (r.h_term == searches + 1) {
    r.initial_retrieved = true;
    r.count_initial = true;
  } else if (r.h_term == searches) {
    r.initial_retrieved = !r.initial_docs.hits.empty();
    r.count_initial = false;
  } else {
    throw ValidationError("rollout record for " + r.example_id +
                          " has h_term inconsistent with its hops");
  }
  return r;
}

inline void save_rollouts_jsonl(const std::string& path, const std::vector<Rollout>& rollouts) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& r : rollouts) out << rollout_to_json(r).dump() << "\n";
}

inline std::vector<Rollout> load_rollouts_jsonl(const std::string& path,
                                                const DocLookup& lookup) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rollout file: " + path);
  std::vector<Rollout> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    out.push_back(rollout_from_json(detail::parse_jsonl_line(line, lineno), lookup));
  }
  return out;
}

}  // namespace fhop
