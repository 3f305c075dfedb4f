#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ibaudit/auditor.hpp"
#include "support.hpp"

namespace {

using namespace ibaudit;
using testing_support::corpus_of;
using testing_support::engineered_corpus;

const Pattern& clariq() {
  static const Pattern p = parse_pattern("[Are|Would|Do] you");
  return p;
}

TEST(Coverage, SixOfTen) {
  auto c = engineered_corpus(10, 6, "Do you like it", "Where is the park", "c");
  EXPECT_EQ(coverage(clariq(), c).str(), "60.0");
  const auto counts = coverage_counts(clariq(), c);
  EXPECT_EQ(counts.matched, 6u);
  EXPECT_EQ(counts.total, 10u);
}

TEST(Coverage, AllMatch) {
  auto c = corpus_of({"Are you ok", "Do you know", "Would you go"});
  EXPECT_EQ(coverage(clariq(), c).str(), "100.0");
}

TEST(Coverage, DurationQuestions) {
  auto c = corpus_of({"how long did Jack play basketball?", "how long did he do his homework?",
                      "how long did it take for him to get the Visa?"});
  EXPECT_EQ(coverage(parse_pattern("How long AUX"), c).str(), "100.0");
}

TEST(Coverage, EmptyCorpusIsAnError) { EXPECT_THROW(coverage(clariq(), Corpus{"e", {}}), Error); }

TEST(Audit, ClariqAmplified) {
  auto ins = engineered_corpus(18, 13, "Do you like it", "Where is the park", "ins");
  auto train = engineered_corpus(8566, 7286, "Are you looking for a site", "What is the weather", "train");
  auto test = engineered_corpus(4499, 4006, "Would you like a map", "Show me news", "test");
  const auto r = audit(clariq(), ins, &train, &test);
  EXPECT_EQ(r.instructions.pct.str(), "72.2");
  ASSERT_TRUE(r.train && r.test);
  EXPECT_EQ(r.train->pct.str(), "85.1");
  EXPECT_EQ(r.test->pct.str(), "89.0");
  EXPECT_TRUE(r.amplified_train);
  EXPECT_TRUE(r.amplified_test);
}

TEST(Audit, InstructionsOnly) {
  auto ins = engineered_corpus(18, 13, "Do you like it", "Where is the park", "ins");
  const auto r = audit(clariq(), ins);
  EXPECT_FALSE(r.train.has_value());
  EXPECT_FALSE(r.test.has_value());
  EXPECT_FALSE(r.amplified_train);
  EXPECT_FALSE(r.amplified_test);
}

TEST(Audit, CosmosNotAmplified) {
  auto what = parse_pattern("What AUX");
  auto ins = engineered_corpus(8, 7, "What may happen next", "Why did he leave", "ins");
  auto train = engineered_corpus(1000, 451, "What's a possible reason", "Why did he leave", "train");
  const auto r = audit(what, ins, &train);
  EXPECT_EQ(r.instructions.pct.str(), "87.5");
  EXPECT_EQ(r.train->pct.str(), "45.1");
  EXPECT_FALSE(r.amplified_train);
}

TEST(Audit, FlagsCompareRoundedFigures) {
  // 2/3 rounds to 66.7 and 667/1000 is 66.7 too: not amplified even though
  // 0.667 > 0.6666...
  auto ins = engineered_corpus(3, 2, "Do you like it", "Where is the park", "ins");
  auto train = engineered_corpus(1000, 667, "Do you like it", "Where is the park", "train");
  EXPECT_FALSE(audit(clariq(), ins, &train).amplified_train);
  auto more = engineered_corpus(1000, 668, "Do you like it", "Where is the park", "train");
  EXPECT_TRUE(audit(clariq(), ins, &more).amplified_train);
}

TEST(Audit, Margin) {
  auto ins = engineered_corpus(10, 5, "Do you like it", "Where is the park", "ins");
  auto train = engineered_corpus(10, 6, "Do you like it", "Where is the park", "train");
  EXPECT_TRUE(audit(clariq(), ins, &train, nullptr, {{}, 5.0}).amplified_train);
  EXPECT_FALSE(audit(clariq(), ins, &train, nullptr, {{}, 10.0}).amplified_train);
}

TEST(Audit, EmptyInstructionsPropagate) {
  auto train = corpus_of({"Do you"});
  EXPECT_THROW(audit(clariq(), Corpus{"ins", {}}, &train), Error);
}

TEST(DeviationWarnings, InformationalOnly) {
  auto ins = engineered_corpus(18, 13, "Do you like it", "Where is the park", "ins");
  auto train = engineered_corpus(100, 80, "Do you like it", "Where is the park", "train");
  const auto r = audit(clariq(), ins, &train);
  const auto w = deviation_warnings(r, {72.2, 85.1, 89.0});
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("train coverage 80.0"), std::string::npos);
  EXPECT_TRUE(deviation_warnings(r, {72.2, 81.0, std::nullopt}).empty());
  EXPECT_TRUE(deviation_warnings(r, {74.2, 82.0, 1.0}).empty());
  EXPECT_EQ(deviation_warnings(r, {74.3, std::nullopt, std::nullopt}).size(), 1u);
}

TEST(CoverageProperties, PermutationInvariant) {
  std::mt19937 rng(4);
  const std::vector<std::string> pieces{"do you", "are we", "would they", "you do", "did you", "x"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> texts;
    for (std::size_t i = 0, n = 1 + rng() % 30; i < n; ++i)
      texts.push_back(pieces[rng() % pieces.size()] + " " + pieces[rng() % pieces.size()]);
    const auto before = coverage(clariq(), corpus_of(texts));
    std::shuffle(texts.begin(), texts.end(), rng);
    EXPECT_EQ(coverage(clariq(), corpus_of(texts)), before);
  }
}

TEST(CoverageProperties, MonotoneInAddedRecords) {
  std::mt19937 rng(6);
  std::vector<std::string> texts{"where is it"};
  for (int step = 0; step < 300; ++step) {
    const auto before = coverage(clariq(), corpus_of(texts));
    const bool hit = rng() & 1;
    texts.push_back(hit ? "would you go" : "they went home");
    const auto after = coverage(clariq(), corpus_of(texts));
    if (hit)
      ASSERT_GE(after, before);
    else
      ASSERT_LE(after, before);
  }
}

// --- diversity ---------------------------------------------------------------

TEST(Diversity, OneFamily) {
  const auto r = diversity(tokenize_all(std::vector<std::string>{
      "How long did the war last?", "How long did the meeting last?", "How long did the storm last?",
      "How long did his speech last?", "How long did the film last?"}));
  EXPECT_EQ(r.unique_pattern_count, 1u);
  EXPECT_EQ(r.patterns.size(), 1u);
}

TEST(Diversity, SingleResponse) {
  const auto r = diversity(tokenize_all(std::vector<std::string>{"Which team won the cup?"}));
  EXPECT_EQ(r.unique_pattern_count, 1u);
}

std::vector<std::string> four_families(std::mt19937& rng) {
  const auto& vocab = testing_support::distractor_vocab();
  const std::vector<std::string> prefixes{"which team won", "how many points", "in what country",
                                          "who scored first"};
  std::vector<std::string> out;
  for (int i = 0; i < 20; ++i) {
    std::string t = prefixes[static_cast<std::size_t>(i % 4)];
    for (int k = 0; k < 3; ++k) t += " " + vocab[rng() % vocab.size()];
    out.push_back(t + "?");
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

TEST(Diversity, FourPlantedFamilies) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = diversity(tokenize_all(four_families(rng)));
    EXPECT_EQ(r.unique_pattern_count, 4u);
    ASSERT_EQ(r.patterns.size(), 4u);
    for (std::size_t i = 0; i < r.patterns.size(); ++i)
      for (std::size_t j = i + 1; j < r.patterns.size(); ++j)
        EXPECT_FALSE(try_merge(r.patterns[i].pattern.elements, r.patterns[j].pattern.elements));
  }
}

TEST(Diversity, EmptyInputIsAnError) {
  EXPECT_THROW(diversity(std::vector<TokenizedText>{}), Error);
}

// --- diverse sampling --------------------------------------------------------

TEST(DiverseSample, OnePerFamily) {
  auto pool = corpus_of({"how long did it rain", "how long did it snow", "which team won the cup",
                         "which team won the game", "where can we eat lunch", "where can we eat dinner"});
  auto ids = suggest_diverse_sample(pool, 3);
  EXPECT_EQ(ids, (std::vector<std::string>{"r0", "r2", "r4"}));
}

TEST(DiverseSample, WholePool) {
  auto pool = corpus_of({"a b", "c d e", "a b c"});
  auto ids = suggest_diverse_sample(pool, 3);
  EXPECT_EQ(ids, (std::vector<std::string>{"r1", "r2", "r0"}));
  EXPECT_TRUE(suggest_diverse_sample(pool, 0).empty());
}

TEST(DiverseSample, DuplicateChosenLast) {
  auto pool = corpus_of({"how long did it rain", "which team won the cup", "how long did it rain",
                         "where can we eat"});
  auto ids = suggest_diverse_sample(pool, 4);
  EXPECT_EQ(ids.back(), "r2");
}

TEST(DiverseSample, KTooLarge) {
  EXPECT_THROW(suggest_diverse_sample(corpus_of({"a b"}), 2), Error);
}

TEST(DiverseSampleProperties, GreedyPrefix) {
  std::mt19937 rng(77);
  const std::vector<std::string> words{"how", "long", "did", "it", "rain", "which", "team", "won", "is", "the"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> texts;
    for (std::size_t i = 0, n = 1 + rng() % 15; i < n; ++i) {
      std::string t;
      for (std::size_t k = 0, m = 1 + rng() % 6; k < m; ++k) t += words[rng() % words.size()] + " ";
      texts.push_back(t);
    }
    auto pool = corpus_of(texts);
    const auto full = suggest_diverse_sample(pool, pool.size());
    for (std::size_t k = 0; k <= pool.size(); ++k) {
      const auto part = suggest_diverse_sample(pool, k);
      ASSERT_TRUE(std::equal(part.begin(), part.end(), full.begin()));
    }
  }
}

}  // namespace
