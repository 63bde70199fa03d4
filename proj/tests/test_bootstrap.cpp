#include <gtest/gtest.h>

#include <memory>

#include "frugalhop/bootstrap.hpp"

namespace {

using namespace fhop;

std::shared_ptr<const RetrieverIndex> boot_index() {
  return std::make_shared<RetrieverIndex>(RetrieverIndex::build({
      {"d1", "Iron Works", "the iron works produced rails for the valley line"},
      {"d2", "Valley Line", "the valley line was a railway finished in 1884"},
      {"d3", "Foot Notes", "an unrelated page about shoes"},
  }));
}

Dataset seed_dataset(int n) {
  Dataset ds;
  for (int i = 0; i < n; ++i) {
    QAExample ex;
    ex.id = "s" + std::to_string(i);
    ex.question = "When was the valley line finished?";
    ex.gold_answers = {"1884"};
    ex.gold_titles = {"Valley Line"};
    ds.examples.push_back(ex);
  }
  return ds;
}

std::shared_ptr<ScriptedBackend> good_backend(int n) {
  auto backend = std::make_shared<ScriptedBackend>();
  for (int i = 0; i < n; ++i) {
    const std::string id = "s" + std::to_string(i);
    backend->add_steps(id, {"Thought: railway Action: Search[valley line railway]",
                            "Thought: done Action: Finish[]"});
    backend->add_answer(id, "1884");
  }
  return backend;
}

TEST(Bootstrap, KeepsRequestedCountWithIndexTieBreak) {
  const int n = 10;
  auto backend = good_backend(n);
  Policy policy{backend, PromptSet{"base", "Answer step by step.", {}}, true};
  IndexRetriever retriever(boot_index());
  BootstrapConfig cfg;
  cfg.candidate_count = 15;
  cfg.keep = 4;
  cfg.seed = 5;

  auto kept = bootstrap_prompts(policy, nullptr, seed_dataset(n), retriever,
                                {6, 2, false, true}, cfg);
  ASSERT_EQ(kept.size(), 4u);
  // scripted backend ignores prompt content -> all candidates tie -> first 4 by index
  EXPECT_EQ(kept[0].id, "cand-0");
  EXPECT_EQ(kept[1].id, "cand-1");
  EXPECT_EQ(kept[2].id, "cand-2");
  EXPECT_EQ(kept[3].id, "cand-3");
  for (const auto& ps : kept) {
    EXPECT_EQ(ps.instruction, "Answer step by step.");
    EXPECT_FALSE(ps.demos.empty());
    EXPECT_NE(ps.demos[0].find("Question:"), std::string::npos);
    EXPECT_NE(ps.demos[0].find("Answer: 1884"), std::string::npos);
  }
}

TEST(Bootstrap, SingleCandidateSingleKeep) {
  const int n = 4;
  Policy policy{good_backend(n), PromptSet{"base", "", {}}, true};
  IndexRetriever retriever(boot_index());
  BootstrapConfig cfg;
  cfg.candidate_count = 1;
  cfg.keep = 1;
  auto kept = bootstrap_prompts(policy, nullptr, seed_dataset(n), retriever,
                                {6, 2, false, true}, cfg);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].id, "cand-0");
}

TEST(Bootstrap, NoSuccessfulTracesErrors) {
  const int n = 5;
  auto backend = std::make_shared<ScriptedBackend>();
  for (int i = 0; i < n; ++i) {
    backend->add_steps("s" + std::to_string(i),
                       {"Thought: hm Action: Search[shoes]", "Thought: done Action: Finish[]"});
    backend->add_answer("s" + std::to_string(i), "wrong answer");
  }
  Policy policy{backend, PromptSet{"base", "", {}}, true};
  IndexRetriever retriever(boot_index());
  BootstrapConfig cfg;
  cfg.candidate_count = 3;
  cfg.keep = 1;
  try {
    bootstrap_prompts(policy, nullptr, seed_dataset(n), retriever, {6, 2, false, true}, cfg);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("stronger"), std::string::npos);
  }
}

TEST(Bootstrap, ValidatesCounts) {
  Policy policy{good_backend(2), PromptSet{"base", "", {}}, true};
  IndexRetriever retriever(boot_index());
  BootstrapConfig cfg;
  cfg.candidate_count = 2;
  cfg.keep = 3;
  EXPECT_THROW(bootstrap_prompts(policy, nullptr, seed_dataset(2), retriever,
                                 {6, 2, false, true}, cfg),
               ValidationError);
}

TEST(Bootstrap, AnswerInPassagesScorer) {
  QAExample ex;
  ex.gold_answers = {"1884"};
  Rollout r;
  HopRecord hop;
  hop.proposal.parse_ok = true;
  hop.proposal.action = StepAction::Search;
  hop.retrieved.hits.push_back({{"d2", "Valley Line", "a railway finished in 1884"}, 1.0});
  hop.retrieval_ok = true;
  r.hops.push_back(hop);
  EXPECT_TRUE(answer_in_passages(ex, r));
  EXPECT_DOUBLE_EQ(em_plus_passage_match(ex, r, "1884"), 2.0);
  EXPECT_DOUBLE_EQ(em_plus_passage_match(ex, r, "1885"), 1.0);

  Rollout empty;
  EXPECT_FALSE(answer_in_passages(ex, empty));
  EXPECT_DOUBLE_EQ(em_plus_passage_match(ex, empty, "no"), 0.0);
}

}  // namespace
