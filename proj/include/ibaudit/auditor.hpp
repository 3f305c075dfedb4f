#pragma once

// Instruction-bias statistics: how often a pattern occurs in instructions
// and collected data, how varied a set of responses is, and which pool
// examples to show annotators next.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ibaudit/corpus.hpp"
#include "ibaudit/errors.hpp"
#include "ibaudit/miner.hpp"
#include "ibaudit/pattern.hpp"
#include "ibaudit/stats.hpp"

namespace ibaudit {

struct Coverage {
  std::size_t matched = 0;
  std::size_t total = 0;
  Percentage pct;
};

inline Coverage coverage_counts(const Pattern& pattern, const Corpus& corpus,
                                MatchOptions opts = {}) {
  if (corpus.empty()) throw Error("coverage of an empty corpus ('" + corpus.label + "')");
  Coverage c;
  c.total = corpus.size();
  for (const auto& rec : corpus.records)
    if (match(pattern, std::string_view(rec.text), opts).matched) ++c.matched;
  c.pct = Percentage::of(c.matched, c.total);
  return c;
}

/// Share of records matched, in percent, one decimal, rounded half-up.
inline Percentage coverage(const Pattern& pattern, const Corpus& corpus, MatchOptions opts = {}) {
  return coverage_counts(pattern, corpus, opts).pct;
}

struct CoverageReport {
  std::string pattern_name;
  std::string pattern_dsl;
  Coverage instructions;
  std::optional<Coverage> train;
  std::optional<Coverage> test;
  bool amplified_train = false;
  bool amplified_test = false;
};

struct AuditOptions {
  MatchOptions match;
  // A split counts as amplified when its rounded coverage exceeds the
  // instruction coverage by more than this many points.
  double amplification_margin = 0.0;
};

inline bool amplified(Percentage data, Percentage instructions, double margin) {
  return data > instructions &&
         static_cast<double>(data.tenths() - instructions.tenths()) > margin * 10.0;
}

inline CoverageReport audit(const Pattern& pattern, const Corpus& instructions,
                            const Corpus* train = nullptr, const Corpus* test = nullptr,
                            const AuditOptions& opts = {}) {
  CoverageReport r;
  r.pattern_name = pattern.name;
  r.pattern_dsl = pattern.source;
  r.instructions = coverage_counts(pattern, instructions, opts.match);
  if (train != nullptr) {
    r.train = coverage_counts(pattern, *train, opts.match);
    r.amplified_train = amplified(r.train->pct, r.instructions.pct, opts.amplification_margin);
  }
  if (test != nullptr) {
    r.test = coverage_counts(pattern, *test, opts.match);
    r.amplified_test = amplified(r.test->pct, r.instructions.pct, opts.amplification_margin);
  }
  return r;
}

/// Reference coverage figures to compare a report against.
struct CoverageReference {
  std::optional<double> instructions;
  std::optional<double> train;
  std::optional<double> test;
};

/// Human-readable warnings for every column deviating from the reference by
/// more than `tolerance` points. Never fatal.
inline std::vector<std::string> deviation_warnings(const CoverageReport& report,
                                                   const CoverageReference& ref,
                                                   double tolerance = 2.0) {
  std::vector<std::string> out;
  auto check = [&](const char* column, const std::optional<Coverage>& got,
                   const std::optional<double>& want) {
    if (!got || !want) return;
    const double diff = got->pct.value() - *want;
    if (std::abs(diff) > tolerance + 1e-9)
      out.push_back(std::string(column) + " coverage " + got->pct.str() + " deviates from reference " +
                    Percentage::round(*want).str() + " by more than " +
                    Percentage::round(tolerance).str() + " points");
  };
  check("instructions", report.instructions, ref.instructions);
  check("train", report.train, ref.train);
  check("test", report.test, ref.test);
  return out;
}

// --- diversity -----------------------------------------------------------

struct DiversityReport {
  std::size_t unique_pattern_count = 0;
  std::vector<PatternCandidate> patterns;  // one representative per family
};

namespace detail {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

/// Counts pattern families in free-form responses.
///
/// All n-grams are mined with support 1 and merged to a fixed point. Two
/// responses belong to the same family when some merged candidate occurs in
/// both; each family is represented by its best-supported candidate.
inline DiversityReport diversity(std::span<const TokenizedText> responses, MinerConfig config = {}) {
  if (responses.empty()) throw Error("no responses given");
  config.min_support_count = 1;
  const auto grams = extract_ngrams(responses, config);
  const auto cands = merge_candidates(grams, responses.size(), config);

  detail::DisjointSets sets(responses.size());
  for (const auto& c : cands)
    for (std::size_t k = 1; k < c.examples.size(); ++k) sets.unite(c.examples[0], c.examples[k]);

  // merge_candidates returns candidates best-first, so the first candidate
  // seen for a family is its representative.
  DiversityReport report;
  std::set<std::size_t> seen;
  for (const auto& c : cands) {
    if (min_word_count(c.pattern.elements) < 2) continue;
    if (seen.insert(sets.find(c.examples.front())).second) report.patterns.push_back(c);
  }
  report.unique_pattern_count = report.patterns.size();
  return report;
}

// --- diverse sampling ----------------------------------------------------

/// Generalized bigrams of a text, AUX-generalized, as "w1 w2" strings.
inline std::set<std::string> generalized_bigrams(const TokenizedText& text) {
  const auto units = generalize(text);
  std::set<std::string> out;
  for (std::size_t i = 0; i + 1 < units.size(); ++i) out.insert(units[i] + ' ' + units[i + 1]);
  return out;
}

/// Greedily picks `k` records, each time the one adding the most generalized
/// bigrams not yet covered; ties go to the earlier record.
inline std::vector<std::string> suggest_diverse_sample(const Corpus& pool, std::size_t k) {
  if (k > pool.size())
    throw Error("sample size " + std::to_string(k) + " exceeds pool size " +
                std::to_string(pool.size()));
  std::vector<std::set<std::string>> grams;
  grams.reserve(pool.size());
  for (const auto& rec : pool.records) grams.push_back(generalized_bigrams(tokenize(rec.text)));

  std::set<std::string> covered;
  std::vector<char> taken(pool.size(), 0);
  std::vector<std::string> out;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t best = pool.size(), best_gain = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (taken[i]) continue;
      const auto gain = static_cast<std::size_t>(std::count_if(
          grams[i].begin(), grams[i].end(), [&](const auto& g) { return !covered.contains(g); }));
      if (best == pool.size() || gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    taken[best] = 1;
    covered.insert(grams[best].begin(), grams[best].end());
    out.push_back(pool.records[best].id);
  }
  return out;
}

}  // namespace ibaudit
