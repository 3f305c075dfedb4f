#pragma once

// Dominant-pattern mining over a handful of instruction examples.
//
// Pipeline: count AUX-generalized n-grams by distinct example, drop those
// below the support threshold, then repeatedly absorb sub-patterns into
// longer ones with equal support and merge pairs that differ in a single
// position into an alternation, until nothing changes. The candidate with
// the highest support wins.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ibaudit/errors.hpp"
#include "ibaudit/pattern.hpp"
#include "ibaudit/text.hpp"

namespace ibaudit {

struct MinerConfig {
  std::size_t n_min = 2;
  std::size_t n_max = 5;
  std::size_t min_support_count = 2;
  // Minimum number of identical positions two candidates must share before
  // the differing position is merged into an alternation.
  std::size_t merge_overlap = 1;
  // Break support ties towards shorter patterns instead of longer ones.
  bool prefer_shorter = false;

  void validate() const {
    if (n_min < 2) throw Error("n_min must be at least 2");
    if (n_max < n_min) throw Error("n_max must not be smaller than n_min");
  }
};

/// Contiguous n-gram whose auxiliaries were replaced by the AUX slot.
/// Units are normalized words; the AUX slot is spelled "AUX", which no
/// lowercased token can collide with.
struct GeneralizedNGram {
  std::vector<std::string> units;

  std::size_t n() const { return units.size(); }
  auto operator<=>(const GeneralizedNGram&) const = default;
};

struct NGramCount {
  GeneralizedNGram gram;
  std::vector<std::size_t> examples;  // sorted distinct example indices

  std::size_t count() const { return examples.size(); }
};

struct PatternCandidate {
  Pattern pattern;
  std::vector<std::size_t> examples;  // sorted distinct example indices
  std::size_t total_examples = 0;

  std::size_t support_count() const { return examples.size(); }
  double support_fraction() const {
    return total_examples == 0 ? 0.0
                               : static_cast<double>(examples.size()) /
                                     static_cast<double>(total_examples);
  }
  std::string dsl() const { return to_dsl(pattern.elements); }
};

/// Replaces each AUX member (and the clitic "'s") with the AUX slot.
inline std::vector<std::string> generalize(const TokenizedText& text) {
  std::vector<std::string> out;
  out.reserve(text.size());
  const auto& aux = aux_class();
  for (const auto& t : text.tokens)
    out.push_back(aux.accepts(t.norm) ? std::string(kAuxClassName) : t.norm);
  return out;
}

inline std::vector<PatternElement> to_elements(const GeneralizedNGram& gram) {
  std::vector<PatternElement> out;
  for (const auto& u : gram.units) {
    if (u == kAuxClassName)
      out.emplace_back(ClassSlot{std::string(kAuxClassName)});
    else
      out.emplace_back(Literal{u});
  }
  return out;
}

/// Every contiguous generalized n-gram with n in [n_min, n_max], with the
/// set of examples that contain it. Sorted by gram.
inline std::vector<NGramCount> extract_ngrams(std::span<const TokenizedText> examples,
                                              const MinerConfig& config) {
  config.validate();
  std::map<GeneralizedNGram, std::vector<std::size_t>> table;
  for (std::size_t ex = 0; ex < examples.size(); ++ex) {
    const auto units = generalize(examples[ex]);
    for (std::size_t n = config.n_min; n <= config.n_max && n <= units.size(); ++n) {
      for (std::size_t i = 0; i + n <= units.size(); ++i) {
        GeneralizedNGram g{{units.begin() + static_cast<std::ptrdiff_t>(i),
                            units.begin() + static_cast<std::ptrdiff_t>(i + n)}};
        auto& ids = table[std::move(g)];
        if (ids.empty() || ids.back() != ex) ids.push_back(ex);
      }
    }
  }
  std::vector<NGramCount> out;
  out.reserve(table.size());
  for (auto& [gram, ids] : table) out.push_back({gram, std::move(ids)});
  return out;
}

namespace detail {

inline std::vector<std::size_t> union_sorted(const std::vector<std::size_t>& a,
                                             const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool contains_run(std::span<const PatternElement> hay, std::span<const PatternElement> needle) {
  if (needle.size() >= hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

// Options a differing stretch contributes to an alternation: an existing
// alternation's options, or one non-empty run of literals.
inline std::optional<std::vector<WordSeq>> as_options(std::span<const PatternElement> part) {
  if (part.empty()) return std::nullopt;
  if (part.size() == 1)
    if (const auto* alt = std::get_if<Alternation>(&part[0])) return alt->options;
  WordSeq words;
  for (const auto& el : part) {
    const auto* lit = std::get_if<Literal>(&el);
    if (lit == nullptr) return std::nullopt;
    words.push_back(lit->word);
  }
  return std::vector<WordSeq>{std::move(words)};
}

}  // namespace detail

/// Merges two candidates that agree everywhere except one position, turning
/// that position into an alternation. The differing stretch of either side
/// may be several literal words ("how old" against "how"). Returns nothing
/// when the pair does not qualify.
inline std::optional<std::vector<PatternElement>> try_merge(std::span<const PatternElement> a,
                                                            std::span<const PatternElement> b,
                                                            std::size_t merge_overlap = 1) {
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) return std::nullopt;
  const std::size_t shortest = std::min(a.size(), b.size());
  if (shortest == 0) return std::nullopt;
  std::size_t prefix = 0;
  while (prefix < shortest && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < shortest - prefix && a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
    ++suffix;

  // One side lies wholly inside the shared context: widen the differing
  // stretch by one shared position so both sides are non-empty.
  if (prefix + suffix == shortest) {
    if (prefix > 0)
      --prefix;
    else
      --suffix;
  }
  if (prefix + suffix < std::max<std::size_t>(1, merge_overlap)) return std::nullopt;

  auto opts_a = detail::as_options(a.subspan(prefix, a.size() - prefix - suffix));
  auto opts_b = detail::as_options(b.subspan(prefix, b.size() - prefix - suffix));
  if (!opts_a || !opts_b) return std::nullopt;

  Alternation alt{std::move(*opts_a)};
  alt.options.insert(alt.options.end(), opts_b->begin(), opts_b->end());
  canonicalize(alt);
  if (alt.options.size() < 2) return std::nullopt;

  std::vector<PatternElement> merged(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(prefix));
  merged.emplace_back(std::move(alt));
  merged.insert(merged.end(), a.end() - static_cast<std::ptrdiff_t>(suffix), a.end());
  return merged;
}

namespace detail {

inline PatternCandidate make_candidate(std::vector<PatternElement> elements,
                                       std::vector<std::size_t> examples, std::size_t total) {
  std::string dsl = to_dsl(elements);
  return PatternCandidate{Pattern{dsl, std::move(elements), dsl}, std::move(examples), total};
}

// Canonical processing order: support, then length, then text.
inline bool merge_order(const PatternCandidate& x, const PatternCandidate& y) {
  if (x.support_count() != y.support_count()) return x.support_count() > y.support_count();
  if (x.pattern.elements.size() != y.pattern.elements.size())
    return x.pattern.elements.size() > y.pattern.elements.size();
  return x.pattern.source < y.pattern.source;
}

// Folds duplicate element sequences together (union of support).
inline void dedupe(std::vector<PatternCandidate>& cands) {
  std::sort(cands.begin(), cands.end(),
            [](const auto& x, const auto& y) { return x.pattern.source < y.pattern.source; });
  std::vector<PatternCandidate> out;
  for (auto& c : cands) {
    if (!out.empty() && out.back().pattern.elements == c.pattern.elements)
      out.back().examples = union_sorted(out.back().examples, c.examples);
    else
      out.push_back(std::move(c));
  }
  cands = std::move(out);
}

// Removes candidates contained in a longer candidate with equal support.
inline bool absorb(std::vector<PatternCandidate>& cands) {
  std::vector<char> drop(cands.size(), 0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = 0; j < cands.size() && !drop[i]; ++j) {
      if (i == j || cands[i].support_count() != cands[j].support_count()) continue;
      if (contains_run(cands[j].pattern.elements, cands[i].pattern.elements)) drop[i] = 1;
    }
  }
  std::size_t k = 0;
  bool changed = false;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (drop[i]) {
      changed = true;
      continue;
    }
    if (k != i) cands[k] = std::move(cands[i]);
    ++k;
  }
  cands.resize(k);
  return changed;
}

inline bool merge_pass(std::vector<PatternCandidate>& cands, std::size_t merge_overlap) {
  std::sort(cands.begin(), cands.end(), merge_order);
  bool changed = false;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size();) {
      auto merged = try_merge(cands[i].pattern.elements, cands[j].pattern.elements, merge_overlap);
      if (!merged) {
        ++j;
        continue;
      }
      cands[i] = make_candidate(std::move(*merged),
                                union_sorted(cands[i].examples, cands[j].examples),
                                cands[i].total_examples);
      cands.erase(cands.begin() + static_cast<std::ptrdiff_t>(j));
      changed = true;
      j = i + 1;
    }
  }
  return changed;
}

}  // namespace detail

/// Keeps n-grams reaching `min_support_count`, then absorbs and merges to a
/// fixed point. `total_examples` is the denominator for support fractions.
inline std::vector<PatternCandidate> merge_candidates(std::span<const NGramCount> ngrams,
                                                      std::size_t total_examples,
                                                      const MinerConfig& config) {
  std::vector<PatternCandidate> cands;
  for (const auto& g : ngrams) {
    if (g.count() < std::max<std::size_t>(1, config.min_support_count)) continue;
    cands.push_back(detail::make_candidate(to_elements(g.gram), g.examples, total_examples));
  }
  detail::dedupe(cands);
  while (true) {
    bool changed = detail::absorb(cands);
    changed = detail::merge_pass(cands, config.merge_overlap) || changed;
    detail::dedupe(cands);
    if (!changed) break;
  }
  std::sort(cands.begin(), cands.end(), detail::merge_order);
  return cands;
}

/// Highest support wins; ties go to the longer pattern (shorter with
/// `prefer_shorter`), then to the lexicographically smaller DSL text.
inline PatternCandidate select_dominant(std::span<const PatternCandidate> candidates,
                                        const MinerConfig& config) {
  const PatternCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (c.support_count() < std::max<std::size_t>(1, config.min_support_count)) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    if (c.support_count() != best->support_count()) {
      if (c.support_count() > best->support_count()) best = &c;
      continue;
    }
    const auto lc = c.pattern.elements.size(), lb = best->pattern.elements.size();
    if (lc != lb) {
      if (config.prefer_shorter ? lc < lb : lc > lb) best = &c;
      continue;
    }
    if (c.dsl() < best->dsl()) best = &c;
  }
  if (best == nullptr)
    throw NoDominantPatternError("no pattern occurs in at least " +
                                 std::to_string(config.min_support_count) + " examples");
  return *best;
}

struct MiningResult {
  PatternCandidate dominant;
  std::vector<PatternCandidate> candidates;  // all at or above the threshold
  std::size_t total_examples = 0;
};

inline MiningResult mine(std::span<const TokenizedText> examples, const MinerConfig& config) {
  if (examples.empty()) throw Error("no instruction examples given");
  const auto grams = extract_ngrams(examples, config);
  auto cands = merge_candidates(grams, examples.size(), config);
  auto dominant = select_dominant(cands, config);
  return MiningResult{std::move(dominant), std::move(cands), examples.size()};
}

inline PatternCandidate mine_dominant_pattern(std::span<const TokenizedText> examples,
                                              const MinerConfig& config = {}) {
  return mine(examples, config).dominant;
}

inline std::vector<TokenizedText> tokenize_all(std::span<const std::string> texts) {
  std::vector<TokenizedText> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(tokenize(t));
  return out;
}

}  // namespace ibaudit
