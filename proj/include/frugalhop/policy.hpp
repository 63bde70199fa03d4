#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "frugalhop/qa.hpp"
#include "frugalhop/text.hpp"

namespace fhop {

enum class StepAction { Search, Finish };

// One (thought, action, search query) triplet proposed by the policy.
// parse_ok = false marks output that did not contain a well-formed action;
// such hops are treated as failed retrievals by the reward.
struct StepProposal {
  std::string thought;
  StepAction action = StepAction::Search;
  std::string search_query;  // set iff action == Search
  std::string raw_text;
  bool parse_ok = false;
};

struct PromptSet {
  std::string id;
  std::string instruction;
  std::vector<std::string> demos;  // serialized example rollouts, hop format below
};

// Extract the first "Thought:" and the first well-formed
// "Action: Search[...]" / "Action: Finish[]" from raw model output.
// Trailing text after the action is ignored. An empty query inside
// Search[] is not well-formed.
inline StepProposal parse_step(const std::string& raw) {
  StepProposal p;
  p.raw_text = raw;

  static const std::string kAction = "Action:";
  std::size_t pos = 0;
  std::size_t action_at = std::string::npos;
  while ((pos = raw.find(kAction, pos)) != std::string::npos) {
    std::size_t cur = pos + kAction.size();
    while (cur < raw.size() && (raw[cur] == ' ' || raw[cur] == '\t')) ++cur;
    if (raw.compare(cur, 7, "Search[") == 0) {
      const std::size_t open = cur + 7;
      const std::size_t close = raw.find(']', open);
      if (close != std::string::npos) {
        const std::string query = trim(raw.substr(open, close - open));
        if (!query.empty()) {
          p.action = StepAction::Search;
          p.search_query = query;
          p.parse_ok = true;
          action_at = pos;
          break;
        }
      }
    } else if (raw.compare(cur, 7, "Finish[") == 0) {
      const std::size_t open = cur + 7;
      const std::size_t close = raw.find(']', open);
      if (close != std::string::npos && trim(raw.substr(open, close - open)).empty()) {
        p.action = StepAction::Finish;
        p.parse_ok = true;
        action_at = pos;
        break;
      }
    }
    pos += kAction.size();
  }
  if (!p.parse_ok) return p;

  static const std::string kThought = "Thought:";
  const std::size_t tpos = raw.find(kThought);
  if (tpos != std::string::npos) {
    const std::size_t tstart = tpos + kThought.size();
    const std::size_t tend = (action_at != std::string::npos && action_at >= tstart)
                                 ? action_at
                                 : raw.size();
    p.thought = trim(raw.substr(tstart, tend - tstart));
  }
  return p;
}

// Canonical serialization of one step; parse_step() round-trips it.
inline std::string serialize_step(const StepProposal& p) {
  std::string out = "Thought: " + p.thought + "\n";
  if (p.action == StepAction::Finish)
    out += "Action: Finish[]";
  else
    out += "Action: Search[" + p.search_query + "]";
  return out;
}

// One rendered context entry: the documents observed in that hop and, except
// for the initial-retrieval entry, the (thought, action, query) that hop took.
struct HistoryStep {
  std::vector<Document> docs;
  std::string thought;
  std::optional<StepAction> action;
  std::string query;
};

namespace detail {

inline void render_observation(std::string& out, const std::vector<Document>& docs) {
  out += "Observation:\n";
  if (docs.empty()) {
    out += "(none)\n";
    return;
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out += "[" + std::to_string(i + 1) + "] " + docs[i].title + " | " + docs[i].text + "\n";
  }
}

inline void render_history_blocks(std::string& out, const std::vector<HistoryStep>& history) {
  for (const auto& step : history) {
    render_observation(out, step.docs);
    if (step.action) {
      out += "Thought: " + step.thought + "\n";
      if (*step.action == StepAction::Finish)
        out += "Action: Finish[]\n";
      else
        out += "Action: Search[" + step.query + "]\n";
    }
  }
}

}  // namespace detail

// Deterministic ReAct prompt: instruction, demos, question, one block per
// history entry (Observation, then Thought/Action), ending with the cue for
// the next thought.
inline std::string render_react_prompt(const std::string& question,
                                       const std::vector<HistoryStep>& history,
                                       const PromptSet& prompts) {
  std::string out;
  if (!prompts.instruction.empty()) out += prompts.instruction + "\n\n";
  for (const auto& demo : prompts.demos) out += demo + "\n\n";
  out += "Question: " + question + "\n";
  detail::render_history_blocks(out, history);
  out += "Thought:";
  return out;
}

inline std::string render_answer_prompt(const std::string& question,
                                        const std::vector<Document>& context_docs) {
  std::string out = "Answer the question using the retrieved evidence.\n\nEvidence:\n";
  if (context_docs.empty()) {
    out += "(none)\n";
  } else {
    for (std::size_t i = 0; i < context_docs.size(); ++i)
      out += "[" + std::to_string(i + 1) + "] " + context_docs[i].title + " | " +
             context_docs[i].text + "\n";
  }
  out += "\nQuestion: " + question + "\nAnswer:";
  return out;
}

// Demo serialization shares the exact hop format of render_react_prompt.
inline std::string serialize_demo(const std::string& question,
                                  const std::vector<HistoryStep>& history,
                                  const std::string& answer) {
  std::string out = "Question: " + question + "\n";
  detail::render_history_blocks(out, history);
  out += "Answer: " + answer;
  return out;
}

struct StepRequest {
  std::string example_id;
  std::string prompt_id;
  std::string question;
  int hop_index = 0;  // 1-based
  std::string prompt;
};

struct Completion {
  std::string text;
  bool ok = true;  // false on transport failure
};

// Step generator backend. complete() produces the raw text a step is parsed
// from; answer() produces the final answer for a rendered answer prompt.
// Implementations must tolerate concurrent calls.
class PolicyBackend {
 public:
  virtual ~PolicyBackend() = default;
  virtual Completion complete(const StepRequest& req) = 0;
  virtual Completion answer(const std::string& example_id, const std::string& prompt) = 0;
};

// Replays a fixed trace table: (example_id[, prompt_id]) x hop -> raw step
// text. A lookup miss yields an empty completion, which parses as a failed
// hop.
class ScriptedBackend : public PolicyBackend {
 public:
  void add_steps(const std::string& example_id, std::vector<std::string> steps) {
    steps_[example_id] = std::move(steps);
  }
  void add_steps_for_prompt(const std::string& example_id, const std::string& prompt_id,
                            std::vector<std::string> steps) {
    prompt_steps_[example_id + "\x1f" + prompt_id] = std::move(steps);
  }
  void add_answer(const std::string& example_id, std::string answer) {
    answers_[example_id] = std::move(answer);
  }
  void set_default_answer(std::string answer) { default_answer_ = std::move(answer); }

  Completion complete(const StepRequest& req) override {
    const std::vector<std::string>* steps = nullptr;
    auto pit = prompt_steps_.find(req.example_id + "\x1f" + req.prompt_id);
    if (pit != prompt_steps_.end()) {
      steps = &pit->second;
    } else {
      auto it = steps_.find(req.example_id);
      if (it != steps_.end()) steps = &it->second;
    }
    if (!steps || req.hop_index < 1 ||
        static_cast<std::size_t>(req.hop_index) > steps->size())
      return {"", true};
    return {(*steps)[req.hop_index - 1], true};
  }

  Completion answer(const std::string& example_id, const std::string&) override {
    auto it = answers_.find(example_id);
    if (it != answers_.end()) return {it->second, true};
    return {default_answer_, true};
  }

 private:
  std::map<std::string, std::vector<std::string>> steps_;
  std::map<std::string, std::vector<std::string>> prompt_steps_;
  std::map<std::string, std::string> answers_;
  std::string default_answer_;
};

// Seeded mock policy: finishes with a per-hop probability, otherwise issues a
// query drawn from a vocabulary (or derived from the question). Bit
// reproducible: the RNG stream depends only on (seed, example_id, hop).
class StochasticMockBackend : public PolicyBackend {
 public:
  StochasticMockBackend(std::uint64_t seed, std::vector<double> finish_prob_per_hop,
                        std::vector<std::string> query_vocab = {})
      : seed_(seed),
        finish_prob_(std::move(finish_prob_per_hop)),
        vocab_(std::move(query_vocab)) {}

  StochasticMockBackend(std::uint64_t seed, double finish_prob,
                        std::vector<std::string> query_vocab = {})
      : StochasticMockBackend(seed, std::vector<double>{finish_prob},
                              std::move(query_vocab)) {}

  Completion complete(const StepRequest& req) override {
    std::mt19937_64 rng(stream_seed(req.example_id, req.hop_index));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p = prob_for_hop(req.hop_index);
    if (unit(rng) < p)
      return {"Thought: the gathered evidence looks sufficient\nAction: Finish[]", true};
    std::string query;
    if (vocab_.empty()) {
      query = req.question + " hop " + std::to_string(req.hop_index);
    } else {
      query = vocab_[rng() % vocab_.size()];
      if (vocab_.size() > 1 && unit(rng) < 0.5) query += " " + vocab_[rng() % vocab_.size()];
    }
    return {"Thought: looking for more evidence\nAction: Search[" + query + "]", true};
  }

  Completion answer(const std::string& example_id, const std::string&) override {
    return {"mock answer for " + example_id, true};
  }

 private:
  double prob_for_hop(int hop) const {
    if (finish_prob_.empty()) return 0.0;
    const std::size_t i = std::min<std::size_t>(hop >= 1 ? hop - 1 : 0, finish_prob_.size() - 1);
    return finish_prob_[i];
  }

  std::uint64_t stream_seed(const std::string& example_id, int hop) const {
    return splitmix64(seed_ ^ fnv1a(example_id) ^
                      (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(hop + 1)));
  }

  std::uint64_t seed_;
  std::vector<double> finish_prob_;
  std::vector<std::string> vocab_;
};

// A backend bound to a prompt set plus the FINISH gate. With
// allow_finish = false a FINISH proposal is rewritten to a SEARCH for the
// original question (exploration mode never terminates early).
struct Policy {
  std::shared_ptr<PolicyBackend> backend;
  PromptSet prompts;
  bool allow_finish = true;

  StepProposal propose_step(const std::string& example_id, const std::string& question,
                            int hop_index, const std::string& rendered_prompt) const {
    StepRequest req{example_id, prompts.id, question, hop_index, rendered_prompt};
    Completion c = backend->complete(req);
    StepProposal p;
    if (!c.ok) {
      p.raw_text = c.text;
      p.parse_ok = false;
      return p;
    }
    p = parse_step(c.text);
    if (p.parse_ok && p.action == StepAction::Finish && !allow_finish) {
      p.action = StepAction::Search;
      p.search_query = question;
    }
    return p;
  }

  Completion answer(const std::string& example_id, const std::string& prompt) const {
    return backend->answer(example_id, prompt);
  }
};

}  // namespace fhop
