#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ibaudit/corpus.hpp"
#include "support.hpp"

namespace {

using namespace ibaudit;
using testing_support::read_file;
using testing_support::ScratchDir;

const std::string kCanonical =
    "{\"answers\":[\"Jack\"],\"id\":\"q1\",\"text\":\"Who played?\"}\n"
    "{\"answers\":[],\"context\":\"It rained.\",\"id\":\"q2\",\"text\":\"Did it rain?\"}\n"
    "{\"answers\":[\"two\",\"2\"],\"id\":\"q3\",\"meta\":{\"split\":\"dev\"},\"text\":\"How many?\"}\n";

TEST(LoadCorpus, ThreeWellFormedLines) {
  ScratchDir dir("corpus");
  auto c = load_corpus(dir.write("train.jsonl", kCanonical));
  EXPECT_EQ(c.label, "train");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.records[0].id, "q1");
  EXPECT_EQ(c.records[1].answers.size(), 0u);
  EXPECT_EQ(c.records[1].meta["context"], "It rained.");
  EXPECT_EQ(c.records[2].answers, (std::vector<std::string>{"two", "2"}));
}

TEST(LoadCorpus, DuplicateIdNamesLine) {
  std::string text;
  for (int i = 1; i <= 6; ++i)
    text += "{\"id\":\"r" + std::to_string(i) + "\",\"text\":\"t\",\"answers\":[]}\n";
  text += "{\"id\":\"r3\",\"text\":\"t\",\"answers\":[]}\n";
  ScratchDir dir("dup");
  const auto path = dir.write("c.jsonl", text);
  try {
    load_corpus(path);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find(":7:"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("duplicate id"), std::string::npos);
  }
}

TEST(LoadCorpus, MalformedLines) {
  auto expect_line = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      parse_corpus(in, "c", "c.jsonl");
      ADD_FAILURE() << text;
    } catch (const DataError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };
  const std::string ok = "{\"id\":\"a\",\"text\":\"t\",\"answers\":[]}\n";
  expect_line(ok + "{not json}\n", 2);
  expect_line(ok + "{\"text\":\"t\",\"answers\":[]}\n", 2);
  expect_line(ok + "{\"id\":\"b\",\"answers\":[]}\n", 2);
  expect_line(ok + "{\"id\":\"b\",\"text\":\"t\"}\n", 2);
  expect_line(ok + "{\"id\":\"b\",\"text\":\"\",\"answers\":[]}\n", 2);
  expect_line(ok + "{\"id\":\"b\",\"text\":\"t\",\"answers\":[3]}\n", 2);
  expect_line("[1,2]\n", 1);
  EXPECT_THROW(load_corpus("/nonexistent/path.jsonl"), DataError);
}

TEST(LoadCorpus, Adapters) {
  std::istringstream in(
      "{\"id\":7,\"question\":\"Who?\",\"answer\":\"me\"}\n"
      "\n"
      "{\"id\":\"s\",\"question\":\"Where?\",\"context\":\"c\",\"answers\":[{\"text\":\"here\",\"answer_start\":0}]}\n");
  auto c = parse_corpus(in, "x");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.records[0].id, "7");
  EXPECT_EQ(c.records[0].text, "Who?");
  EXPECT_EQ(c.records[0].answers, (std::vector<std::string>{"me"}));
  EXPECT_EQ(c.records[1].answers, (std::vector<std::string>{"here"}));
  EXPECT_EQ(c.records[1].meta["context"], "c");
}

TEST(SaveCorpus, RoundTripIsByteIdentical) {
  ScratchDir dir("rt");
  auto c = load_corpus(dir.write("in.jsonl", kCanonical));
  const auto out = dir.path() / "out.jsonl";
  save_corpus(c, out);
  EXPECT_EQ(read_file(out), kCanonical);
  auto again = load_corpus(out);
  ASSERT_EQ(again.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(again.records[i], c.records[i]);
}

TEST(SaveCorpus, RoundTripPreservesUnicode) {
  auto c = testing_support::corpus_of({"Quintanilla-P\xC3\xA9rez?", "Tab\there \"quoted\""});
  c.records[0].answers = {"\xE2\x86\x93"};
  std::stringstream buf;
  write_corpus(c, buf);
  auto back = parse_corpus(buf, "c");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.records[0], c.records[0]);
  EXPECT_EQ(back.records[1], c.records[1]);
}

TEST(MakeCorpus, EnforcesInvariants) {
  EXPECT_THROW(testing_support::corpus_of({"a", ""}), DataError);
  std::vector<DatasetRecord> recs{{"x", "a", {}, json::object()}, {"x", "b", {}, json::object()}};
  EXPECT_THROW(make_corpus("c", recs), DataError);
}

TEST(LoadLines, AssignsIdsAndSkipsBlanks) {
  std::istringstream in("how long did Jack play?\n\n  \nhow long did he wait?\r\n");
  auto c = parse_lines(in, "ins");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.records[0].id, "line-1");
  EXPECT_EQ(c.records[1].id, "line-4");
  EXPECT_EQ(c.records[1].text, "how long did he wait?");
}

TEST(LoadAny, DispatchesOnExtension) {
  ScratchDir dir("any");
  EXPECT_EQ(load_any(dir.write("a.jsonl", kCanonical)).size(), 3u);
  EXPECT_EQ(load_any(dir.write("a.txt", "one\ntwo\n")).records[1].text, "two");
}

TEST(SplitStats, Percentages) {
  auto s = split_stats(7286, 1280);
  EXPECT_EQ(s.total, 8566u);
  EXPECT_EQ(s.pattern_pct.str(), "85.1");
  EXPECT_EQ(s.nopattern_pct.str(), "14.9");
  EXPECT_EQ(split_stats(48422, 28987).pattern_pct.str(), "62.6");
  EXPECT_EQ(split_stats(6, 4).pattern_pct.str(), "60.0");
  EXPECT_EQ(split_stats(3, 0).nopattern_pct.str(), "0.0");
  EXPECT_EQ(split_stats(3, 0).pattern_pct.str(), "100.0");
  EXPECT_EQ(split_stats(0, 0).pattern_pct.str(), "0.0");
}

TEST(Percentage, RoundsHalfUp) {
  EXPECT_EQ(Percentage::of(1, 8).str(), "12.5");
  EXPECT_EQ(Percentage::of(1, 16).str(), "6.3");   // 6.25
  EXPECT_EQ(Percentage::of(1, 3).str(), "33.3");
  EXPECT_EQ(Percentage::of(2, 3).str(), "66.7");
  EXPECT_EQ(Percentage::round(0.05).str(), "0.1");
  EXPECT_EQ(Percentage::round(23.15).str(), "23.2");
  EXPECT_EQ(Percentage::round(-0.05).str(), "-0.1");
  EXPECT_THROW(Percentage::of(1, 0), std::domain_error);
}

TEST(SaveSplit, WritesThreeFiles) {
  ScratchDir dir("split");
  std::vector<std::string> texts;
  for (int i = 0; i < 10; ++i) texts.push_back("q" + std::to_string(i));
  auto all = testing_support::corpus_of(texts);
  Corpus p{"p", {all.records.begin(), all.records.begin() + 6}};
  Corpus np{"np", {all.records.begin() + 6, all.records.end()}};
  auto paths = save_split(p, np, dir.path() / "out", "train");
  EXPECT_EQ(paths.pattern.filename(), "train.pattern");
  EXPECT_EQ(paths.nopattern.filename(), "train.nopattern");
  EXPECT_EQ(load_corpus(paths.pattern).size(), 6u);
  EXPECT_EQ(load_corpus(paths.nopattern).size(), 4u);
  auto stats = json::parse(read_file(paths.stats));
  EXPECT_EQ(stats["total"], 10);
  EXPECT_EQ(stats["pattern_count"], 6);
  EXPECT_DOUBLE_EQ(stats["pattern_pct"].get<double>(), 60.0);
  EXPECT_EQ(stats["nopattern_count"], 4);
  EXPECT_DOUBLE_EQ(stats["nopattern_pct"].get<double>(), 40.0);
}

TEST(SaveSplit, EmptyNonPatternSide) {
  ScratchDir dir("split0");
  auto p = testing_support::corpus_of({"a", "b"});
  auto paths = save_split(p, Corpus{"np", {}}, dir.path(), "s");
  auto stats = json::parse(read_file(paths.stats));
  EXPECT_DOUBLE_EQ(stats["pattern_pct"].get<double>(), 100.0);
  EXPECT_DOUBLE_EQ(stats["nopattern_pct"].get<double>(), 0.0);
  EXPECT_EQ(read_file(paths.nopattern), "");
}

TEST(SaveSplit, OverlapRejected) {
  ScratchDir dir("overlap");
  auto a = testing_support::corpus_of({"a", "b"});
  auto b = testing_support::corpus_of({"c"});
  EXPECT_THROW(save_split(a, b, dir.path(), "s"), DataError);
}

TEST(Predictions, ParseAndErrors) {
  std::istringstream in("q1\tJack\nq2\t\n\nq3\tthe red car\n");
  auto p = parse_predictions(in, "seed1");
  EXPECT_EQ(p.seed_label, "seed1");
  ASSERT_EQ(p.entries.size(), 3u);
  EXPECT_EQ(p.entries["q2"], "");
  EXPECT_EQ(p.entries["q3"], "the red car");

  std::istringstream notab("q1 Jack\n");
  EXPECT_THROW(parse_predictions(notab, "s"), DataError);
  std::istringstream dup("q1\ta\nq1\tb\n");
  try {
    parse_predictions(dup, "s", "p.tsv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Predictions, SeedLabelFromFileStem) {
  ScratchDir dir("pred");
  EXPECT_EQ(load_predictions(dir.write("seed42.tsv", "a\tb\n")).seed_label, "seed42");
  EXPECT_EQ(load_predictions(dir.write("x.tsv", "a\tb\n"), "s1").seed_label, "s1");
}

}  // namespace
