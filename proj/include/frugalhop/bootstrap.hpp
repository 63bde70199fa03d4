#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "frugalhop/errors.hpp"
#include "frugalhop/metrics.hpp"
#include "frugalhop/policy.hpp"
#include "frugalhop/rollout.hpp"

namespace fhop {

struct BootstrapConfig {
  int candidate_count = 15;
  int keep = 4;
  int demos_per_candidate = 4;
  double validation_fraction = 0.2;  // tail slice of the seed examples
  std::uint64_t seed = 0;
};

// Candidate score for one evaluated trace; the default mirrors the
// bootstrap objective: answer EM plus answer-in-retrieved-passages.
using TraceScorer =
    std::function<double(const QAExample&, const Rollout&, const std::string& answer)>;

inline bool answer_in_passages(const QAExample& example, const Rollout& rollout) {
  for (const auto& gold : example.gold_answers) {
    const std::string g = normalize_answer(gold);
    if (g.empty()) continue;
    for (const auto& doc : rollout.context_documents())
      if (normalize_answer(doc.text).find(g) != std::string::npos) return true;
  }
  return false;
}

inline double em_plus_passage_match(const QAExample& example, const Rollout& rollout,
                                    const std::string& answer) {
  return exact_match(answer, example.gold_answers) +
         (answer_in_passages(example, rollout) ? 1.0 : 0.0);
}

namespace detail {

inline std::vector<HistoryStep> rollout_history(const Rollout& r) {
  std::vector<HistoryStep> history;
  if (r.initial_retrieved) {
    HistoryStep step;
    for (const auto& h : r.initial_docs.hits) step.docs.push_back(h.doc);
    history.push_back(std::move(step));
  }
  for (const auto& hop : r.hops) {
    if (!hop.proposal.parse_ok) continue;
    HistoryStep step;
    step.thought = hop.proposal.thought;
    step.action = hop.proposal.action;
    step.query = hop.proposal.search_query;
    for (const auto& h : hop.retrieved.hits) step.docs.push_back(h.doc);
    history.push_back(std::move(step));
  }
  return history;
}

}  // namespace detail

// Harvest demos from the pipeline's own successful traces (answer EM = 1),
// assemble `candidate_count` randomized demo subsets, score each on the
// validation slice, and keep the best `keep` (ties broken by candidate
// index).
inline std::vector<PromptSet> bootstrap_prompts(const Policy& policy,
                                                std::shared_ptr<PolicyBackend> generator,
                                                const Dataset& seed_examples,
                                                const Retriever& retriever,
                                                const RolloutConfig& rollout_config,
                                                const BootstrapConfig& config,
                                                TraceScorer scorer = em_plus_passage_match) {
  if (seed_examples.examples.empty())
    throw ValidationError("bootstrap requires seed examples");
  if (config.keep < 1 || config.candidate_count < 1)
    throw ValidationError("bootstrap counts must be >= 1");
  if (config.keep > config.candidate_count)
    throw ValidationError("keep must be <= candidate_count");

  Policy gen_policy{generator ? generator : policy.backend, policy.prompts, true};

  // Pass 1: run the pipeline on every seed example and harvest demos from
  // traces whose answer was exactly right.
  std::vector<std::string> demos;
  for (const auto& ex : seed_examples.examples) {
    Rollout r = run_rollout(ex, policy, retriever, rollout_config);
    std::string answer;
    try {
      answer = generate_answer(r, gen_policy);
    } catch (const TransportError&) {
      continue;
    }
    if (exact_match(answer, ex.gold_answers) == 1.0)
      demos.push_back(serialize_demo(ex.question, detail::rollout_history(r), answer));
  }
  if (demos.empty())
    throw ValidationError(
        "bootstrap harvested no successful traces; use a stronger policy backend");

  // Candidate demo subsets, one seeded shuffle per candidate.
  std::vector<PromptSet> candidates;
  for (int c = 0; c < config.candidate_count; ++c) {
    std::mt19937_64 rng(splitmix64(config.seed ^ (0xb00757261ULL + c)));
    std::vector<std::string> pool = demos;
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t take =
        std::min<std::size_t>(pool.size(), std::max(1, config.demos_per_candidate));
    PromptSet ps;
    ps.id = "cand-" + std::to_string(c);
    ps.instruction = policy.prompts.instruction;
    ps.demos.assign(pool.begin(), pool.begin() + take);
    candidates.push_back(std::move(ps));
  }

  // Validation slice: the tail of the seed examples.
  const std::size_t n = seed_examples.examples.size();
  std::size_t slice =
      static_cast<std::size_t>(std::ceil(config.validation_fraction * static_cast<double>(n)));
  slice = std::max<std::size_t>(1, std::min(slice, n));
  const std::size_t first = n - slice;

  std::vector<std::pair<double, int>> ranked;  // (-score, index) for stable ordering
  for (int c = 0; c < config.candidate_count; ++c) {
    Policy cand_policy{policy.backend, candidates[c], policy.allow_finish};
    double total = 0.0;
    for (std::size_t i = first; i < n; ++i) {
      const QAExample& ex = seed_examples.examples[i];
      Rollout r = run_rollout(ex, cand_policy, retriever, rollout_config);
      std::string answer;
      try {
        answer = generate_answer(r, gen_policy);
      } catch (const TransportError&) {
        continue;
      }
      total += scorer(ex, r, answer);
    }
    ranked.push_back({-(total / static_cast<double>(slice)), c});
  }
  std::sort(ranked.begin(), ranked.end());

  std::vector<PromptSet> kept;
  for (int i = 0; i < config.keep; ++i) kept.push_back(candidates[ranked[i].second]);
  return kept;
}

}  // namespace fhop
