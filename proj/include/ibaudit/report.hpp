#pragma once

// Markdown and JSON renderings of every report the tool produces.
//
// Markdown tables keep the column order used in the published tables so rows
// can be compared by eye; JSON carries the same numbers for scripts.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ibaudit/auditor.hpp"
#include "ibaudit/corpus.hpp"
#include "ibaudit/evaluator.hpp"
#include "ibaudit/miner.hpp"

namespace ibaudit {

/// Escapes the characters that would break a Markdown table cell.
inline std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

// --- mining --------------------------------------------------------------

inline json candidate_json(const PatternCandidate& c, std::span<const std::string> ids = {}) {
  json j;
  j["pattern"] = c.dsl();
  j["support_count"] = c.support_count();
  j["support_fraction"] = c.support_fraction();
  j["support_pct"] = Percentage::of(c.support_count(), c.total_examples).value();
  if (!ids.empty()) {
    json ex = json::array();
    for (auto i : c.examples) ex.push_back(ids[i]);
    j["examples"] = std::move(ex);
  }
  return j;
}

inline json mining_json(const MiningResult& r, std::span<const std::string> ids = {}) {
  json j;
  j["total_examples"] = r.total_examples;
  j["dominant"] = candidate_json(r.dominant, ids);
  json all = json::array();
  for (const auto& c : r.candidates) all.push_back(candidate_json(c, ids));
  j["candidates"] = std::move(all);
  return j;
}

inline std::string mining_markdown(const MiningResult& r) {
  std::ostringstream out;
  out << "Dominant pattern: `" << r.dominant.dsl() << "` (" << r.dominant.support_count() << "/"
      << r.total_examples << " examples, "
      << Percentage::of(r.dominant.support_count(), r.total_examples).str() << "%)\n\n";
  out << "| Pattern | Support | % Ins. |\n";
  out << "|---|---:|---:|\n";
  for (const auto& c : r.candidates)
    out << "| " << md_cell(c.dsl()) << " | " << c.support_count() << " | "
        << Percentage::of(c.support_count(), c.total_examples).str() << " |\n";
  return out.str();
}

// --- coverage ------------------------------------------------------------

inline json coverage_json(const CoverageReport& r) {
  json j;
  j["pattern"] = r.pattern_name;
  j["dsl"] = r.pattern_dsl;
  auto col = [](const Coverage& c) {
    return json{{"pct", c.pct.value()}, {"matched", c.matched}, {"total", c.total}};
  };
  j["instructions"] = col(r.instructions);
  j["pct_instructions"] = r.instructions.pct.value();
  if (r.train) {
    j["train"] = col(*r.train);
    j["pct_train"] = r.train->pct.value();
    j["amplified_train"] = r.amplified_train;
  }
  if (r.test) {
    j["test"] = col(*r.test);
    j["pct_test"] = r.test->pct.value();
    j["amplified_test"] = r.amplified_test;
  }
  return j;
}

/// One table, one row per report. Columns for train/test appear when the
/// first report has them.
inline std::string coverage_markdown(std::span<const CoverageReport> reports) {
  std::ostringstream out;
  const bool train = !reports.empty() && reports.front().train.has_value();
  const bool test = !reports.empty() && reports.front().test.has_value();
  out << "| Pattern | % Ins. |";
  if (train) out << " % S_train |";
  if (test) out << " % S_test |";
  out << "\n|---|---:|";
  if (train) out << "---:|";
  if (test) out << "---:|";
  out << "\n";
  for (const auto& r : reports) {
    out << "| " << md_cell(r.pattern_dsl) << " | " << r.instructions.pct.str() << " |";
    if (train) out << " " << (r.train ? r.train->pct.str() : "-") << " |";
    if (test) out << " " << (r.test ? r.test->pct.str() : "-") << " |";
    out << "\n";
  }
  return out.str();
}

// --- split ---------------------------------------------------------------

inline std::string split_markdown(const std::string& label, const SplitStats& s) {
  std::ostringstream out;
  out << "| Split | Total | S^p | S^-p |\n";
  out << "|---|---:|---:|---:|\n";
  out << "| " << md_cell(label) << " | " << s.total << " | " << s.pattern_count << " ("
      << s.pattern_pct.str() << "%) | " << s.nopattern_count << " (" << s.nopattern_pct.str()
      << "%) |\n";
  return out.str();
}

// --- gap -----------------------------------------------------------------

inline json gap_json(const GapReport& r) {
  json j;
  j["pattern"] = r.pattern_name;
  j["f1_pattern"] = r.f1_pattern.rounded().value();
  j["f1_nopattern"] = r.f1_nopattern.rounded().value();
  j["rel_gap_pct"] = r.rel_gap.value();
  j["direction"] = ascii_arrow(r.direction);
  j["seeds_used"] = r.seeds_used;
  j["pattern_count"] = r.pattern_count;
  j["nopattern_count"] = r.nopattern_count;
  return j;
}

inline std::string gap_cell(const GapReport& r) {
  return r.rel_gap.str() + "% " + unicode_arrow(r.direction);
}

inline std::string gap_markdown(std::span<const GapReport> reports) {
  std::ostringstream out;
  out << "| Pattern | S_test^p | S_test^-p | Gap |\n";
  out << "|---|---:|---:|---:|\n";
  for (const auto& r : reports)
    out << "| " << md_cell(r.pattern_name) << " | " << r.f1_pattern.rounded().str() << " | "
        << r.f1_nopattern.rounded().str() << " | " << gap_cell(r) << " |\n";
  return out.str();
}

// --- diversity and sampling ----------------------------------------------

inline json diversity_json(const DiversityReport& r) {
  json j;
  j["unique_pattern_count"] = r.unique_pattern_count;
  json pats = json::array();
  for (const auto& c : r.patterns) pats.push_back(candidate_json(c));
  j["patterns"] = std::move(pats);
  return j;
}

inline std::string diversity_markdown(const DiversityReport& r) {
  std::ostringstream out;
  out << "Unique patterns: " << r.unique_pattern_count << "\n\n";
  out << "| Pattern | Responses |\n";
  out << "|---|---:|\n";
  for (const auto& c : r.patterns)
    out << "| " << md_cell(c.dsl()) << " | " << c.support_count() << " |\n";
  return out.str();
}

inline json sample_json(const std::vector<std::string>& ids) { return json{{"sample", ids}}; }

inline std::string sample_markdown(const Corpus& pool, const std::vector<std::string>& ids) {
  std::map<std::string, const DatasetRecord*> by_id;
  for (const auto& r : pool.records) by_id[r.id] = &r;
  std::ostringstream out;
  out << "| # | Id | Text |\n";
  out << "|---:|---|---|\n";
  for (std::size_t i = 0; i < ids.size(); ++i)
    out << "| " << i + 1 << " | " << md_cell(ids[i]) << " | " << md_cell(by_id.at(ids[i])->text)
        << " |\n";
  return out.str();
}

}  // namespace ibaudit
