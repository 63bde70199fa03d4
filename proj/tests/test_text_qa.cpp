#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "frugalhop/qa.hpp"
#include "frugalhop/text.hpp"

namespace {

using namespace fhop;

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

TEST(NormalizeAnswer, DropsPunctuationCaseAndArticles) {
  EXPECT_EQ(normalize_answer("The Cat!"), "cat");
  EXPECT_EQ(normalize_answer(""), "");
  EXPECT_EQ(normalize_answer("An  apple a day"), "apple day");
}

TEST(NormalizeAnswer, Idempotent) {
  std::mt19937 rng(42);
  const std::string alphabet = "aA zZ.,!?-'the an a THE  ";
  for (int i = 0; i < 200; ++i) {
    std::string s;
    const int len = static_cast<int>(rng() % 40);
    for (int j = 0; j < len; ++j) s.push_back(alphabet[rng() % alphabet.size()]);
    const std::string once = normalize_answer(s);
    EXPECT_EQ(normalize_answer(once), once) << "input: " << s;
  }
}

TEST(NormalizeTitle, CaseFoldAndCollapseOnly) {
  EXPECT_EQ(normalize_title("Toyota Prius"), "toyota prius");
  EXPECT_EQ(normalize_title("  A  Bridge  "), "a bridge");
  EXPECT_EQ(normalize_title("X"), "x");
  EXPECT_EQ(normalize_title("St. Mary's!"), "st. mary's!");  // punctuation kept
}

TEST(NormalizeTitle, IdempotentAndOrderPreserving) {
  std::mt19937 rng(7);
  const std::vector<std::string> words = {"Alpha", "beta", "GAMMA", "d.e", "42"};
  for (int i = 0; i < 100; ++i) {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 5);
    for (int j = 0; j < len; ++j) {
      for (unsigned k = 0; k < 1 + rng() % 3; ++k) s.push_back(' ');
      s += words[rng() % words.size()];
    }
    const std::string once = normalize_title(s);
    EXPECT_EQ(normalize_title(once), once);
    // token order preserved
    auto raw = split_whitespace(s);
    auto norm = split_whitespace(once);
    ASSERT_EQ(raw.size(), norm.size());
    for (std::size_t j = 0; j < raw.size(); ++j) EXPECT_EQ(normalize_title(raw[j]), norm[j]);
  }
}

TEST(TokenizeForIndex, LowercaseAlnumRuns) {
  EXPECT_EQ(tokenize_for_index("The Cat-sat, twice!"),
            (std::vector<std::string>{"the", "cat", "sat", "twice"}));
  EXPECT_TRUE(tokenize_for_index("  ...  ").empty());
}

TEST(LoadDataset, LoadsValidFile) {
  const std::string path = write_temp(
      "fhop_ds_valid.jsonl",
      R"({"id":"q1","question":"Who?","answers":["Alice"],"gold_titles":["Doc A"],"evidence":[{"title":"Doc A","sentence":"Alice did it."}],"hops":2})"
      "\n"
      R"({"id":"q2","question":"What?","answers":["Rock","Stone"],"gold_titles":["Doc B","Doc C"]})"
      "\n"
      R"({"id":"q3","question":"Where?","answers":["Paris"]})"
      "\n");
  Dataset ds = load_dataset(path);
  ASSERT_EQ(ds.examples.size(), 3u);
  EXPECT_EQ(ds.examples[0].id, "q1");
  EXPECT_EQ(ds.examples[0].question, "Who?");
  EXPECT_EQ(ds.examples[0].gold_answers.size(), 1u);
  EXPECT_EQ(ds.examples[0].hop_count.value(), 2);
  EXPECT_EQ(ds.examples[1].gold_titles.size(), 2u);
  EXPECT_FALSE(ds.examples[2].hop_count.has_value());

  Dataset limited = load_dataset(path, 2);
  EXPECT_EQ(limited.examples.size(), 2u);

  // deterministic ingestion
  Dataset again = load_dataset(path);
  ASSERT_EQ(again.examples.size(), ds.examples.size());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    EXPECT_EQ(again.examples[i].id, ds.examples[i].id);
    EXPECT_EQ(again.examples[i].question, ds.examples[i].question);
    EXPECT_EQ(again.examples[i].gold_titles, ds.examples[i].gold_titles);
  }
}

TEST(LoadDataset, ThousandLineFileWithMatchingLimit) {
  const auto path = std::filesystem::temp_directory_path() / "fhop_ds_1000.jsonl";
  {
    std::ofstream out(path);
    for (int i = 0; i < 1000; ++i)
      out << R"({"id":"q)" << i << R"(","question":"n )" << i
          << R"(?","answers":["a)" << i << R"("]})"
          << "\n";
  }
  Dataset ds = load_dataset(path.string(), 1000);
  EXPECT_EQ(ds.examples.size(), 1000u);
  EXPECT_EQ(ds.examples[999].id, "q999");
}

TEST(LoadDataset, MissingQuestionNamesLine) {
  const std::string path = write_temp(
      "fhop_ds_missing.jsonl",
      R"({"id":"q1","question":"Who?","answers":["Alice"]})"
      "\n"
      R"({"id":"q2","answers":["Bob"]})"
      "\n");
  try {
    load_dataset(path);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("question"), std::string::npos);
  }
}

TEST(LoadDataset, EmptyAnswersRejected) {
  const std::string path =
      write_temp("fhop_ds_empty_answers.jsonl", R"({"id":"q1","question":"?","answers":[]})"
                                                "\n");
  EXPECT_THROW(load_dataset(path), ValidationError);
}

TEST(LoadDataset, DuplicateIdRejected) {
  const std::string path = write_temp("fhop_ds_dup.jsonl",
                                      R"({"id":"q1","question":"?","answers":["x"]})"
                                      "\n"
                                      R"({"id":"q1","question":"?","answers":["y"]})"
                                      "\n");
  EXPECT_THROW(load_dataset(path), ValidationError);
}

TEST(LoadDataset, MissingFileIsIoError) {
  EXPECT_THROW(load_dataset("/nonexistent/nope.jsonl"), IoError);
}

TEST(LoadCorpus, LoadsAndValidates) {
  const std::string path = write_temp("fhop_corpus.jsonl",
                                      R"({"doc_id":"d1","title":"Doc A","text":"alpha beta"})"
                                      "\n"
                                      R"({"doc_id":"d2","title":"Doc B","text":"gamma"})"
                                      "\n");
  auto docs = load_corpus(path);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].doc_id, "d1");

  const std::string dup = write_temp("fhop_corpus_dup.jsonl",
                                     R"({"doc_id":"d1","title":"A","text":"x"})"
                                     "\n"
                                     R"({"doc_id":"d1","title":"B","text":"y"})"
                                     "\n");
  EXPECT_THROW(load_corpus(dup), ValidationError);
}

}  // namespace
