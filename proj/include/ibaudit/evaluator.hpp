#pragma once

// Token-level F1 over prediction files and the pattern / non-pattern gap.

#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ibaudit/corpus.hpp"
#include "ibaudit/errors.hpp"
#include "ibaudit/pattern.hpp"
#include "ibaudit/splitter.hpp"
#include "ibaudit/stats.hpp"
#include "ibaudit/text.hpp"

namespace ibaudit {

/// An F1 value on the 0..100 scale.
class F1Score {
 public:
  constexpr F1Score() = default;
  explicit F1Score(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 100.0))
      throw std::domain_error("F1 score outside [0, 100]: " + std::to_string(value));
  }
  double value() const { return value_; }
  Percentage rounded() const { return Percentage::round(value_); }
  auto operator<=>(const F1Score&) const = default;

 private:
  double value_ = 0.0;
};

/// Extractive-QA answer normalization: lowercase, delete ASCII punctuation,
/// drop the articles a/an/the, split on whitespace.
inline std::vector<std::string> normalize_answer(std::string_view text) {
  std::string lowered = to_lower(to_nfc(text));
  std::string stripped;
  stripped.reserve(lowered.size());
  for (char c : lowered) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::ispunct(u)) continue;
    stripped.push_back(c);
  }
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < stripped.size()) {
    while (i < stripped.size() && std::isspace(static_cast<unsigned char>(stripped[i]))) ++i;
    std::size_t j = i;
    while (j < stripped.size() && !std::isspace(static_cast<unsigned char>(stripped[j]))) ++j;
    if (j > i) {
      std::string w = stripped.substr(i, j - i);
      if (w != "a" && w != "an" && w != "the") tokens.push_back(std::move(w));
    }
    i = j;
  }
  return tokens;
}

/// F1 in [0, 1] between two normalized token lists. Both empty scores 1.
inline double token_f1_unit(const std::vector<std::string>& pred,
                            const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred.empty() && gold.empty() ? 1.0 : 0.0;
  std::map<std::string_view, long> counts;
  for (const auto& g : gold) ++counts[g];
  long common = 0;
  for (const auto& p : pred) {
    auto it = counts.find(p);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

/// Best F1 of the prediction against any gold answer, times 100. With no
/// gold answers the item is unanswerable: 100 iff the prediction is empty
/// after normalization.
inline F1Score token_f1(std::string_view prediction, std::span<const std::string> golds) {
  const auto pred = normalize_answer(prediction);
  if (golds.empty()) return F1Score(pred.empty() ? 100.0 : 0.0);
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, token_f1_unit(pred, normalize_answer(g)));
  return F1Score(best * 100.0);
}

inline F1Score token_f1(std::string_view prediction, std::initializer_list<std::string> golds) {
  std::vector<std::string> v(golds);
  return token_f1(prediction, std::span<const std::string>(v));
}

/// Mean F1 over the corpus for each seed, then the mean over seeds.
inline F1Score eval_subset(std::span<const PredictionSet> predictions, const Corpus& corpus) {
  if (predictions.empty()) throw Error("no prediction sets given");
  if (corpus.empty()) throw Error("cannot score an empty subset ('" + corpus.label + "')");
  double seed_sum = 0.0;
  for (const auto& seed : predictions) {
    double sum = 0.0;  // accumulated in corpus order
    for (const auto& rec : corpus.records) {
      auto it = seed.entries.find(rec.id);
      if (it == seed.entries.end())
        throw DataError("missing prediction for id '" + rec.id + "' in seed '" + seed.seed_label + "'");
      sum += token_f1(it->second, rec.answers).value();
    }
    seed_sum += sum / static_cast<double>(corpus.size());
  }
  return F1Score(std::min(100.0, seed_sum / static_cast<double>(predictions.size())));
}

enum class GapDirection { down, up };

inline const char* ascii_arrow(GapDirection d) { return d == GapDirection::down ? "down" : "up"; }
inline const char* unicode_arrow(GapDirection d) {
  return d == GapDirection::down ? "\xE2\x86\x93" : "\xE2\x86\x91";  // ↓ ↑
}

struct GapReport {
  std::string pattern_name;
  F1Score f1_pattern;
  F1Score f1_nopattern;
  Percentage rel_gap;  // 100 * |p - np| / p, one decimal
  GapDirection direction = GapDirection::down;
  std::size_t seeds_used = 0;
  std::size_t pattern_count = 0;
  std::size_t nopattern_count = 0;
};

/// Relative gap of the non-pattern score against the pattern score.
inline GapReport gap(F1Score f1_pattern, F1Score f1_nopattern) {
  if (f1_pattern.value() <= 0.0) throw Error("gap undefined: pattern-side F1 is zero");
  GapReport r;
  r.f1_pattern = f1_pattern;
  r.f1_nopattern = f1_nopattern;
  const double diff = std::abs(f1_pattern.value() - f1_nopattern.value());
  r.rel_gap = Percentage::round(100.0 * diff / f1_pattern.value());
  r.direction = f1_nopattern < f1_pattern ? GapDirection::down : GapDirection::up;
  return r;
}

/// Splits the gold corpus by pattern, scores each side, and reports the gap.
inline GapReport evalgap(std::span<const PredictionSet> predictions, const Corpus& gold,
                         const Pattern& pattern, MatchOptions opts = {}) {
  std::set<std::string_view> ids;
  for (const auto& rec : gold.records) ids.insert(rec.id);
  for (const auto& seed : predictions)
    for (const auto& [id, _] : seed.entries)
      if (!ids.contains(id))
        throw DataError("prediction id '" + id + "' in seed '" + seed.seed_label +
                        "' is not in the gold corpus");

  const auto parts = split(gold, pattern, {}, opts);
  if (parts.pattern_subset.empty()) throw Error("no gold record matches the pattern");
  if (parts.nopattern_subset.empty()) throw Error("every gold record matches the pattern");

  GapReport r = gap(eval_subset(predictions, parts.pattern_subset),
                    eval_subset(predictions, parts.nopattern_subset));
  r.pattern_name = pattern.name;
  r.seeds_used = predictions.size();
  r.pattern_count = parts.pattern_subset.size();
  r.nopattern_count = parts.nopattern_subset.size();
  return r;
}

}  // namespace ibaudit
