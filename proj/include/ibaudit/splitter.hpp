#pragma once

// Partitions a corpus into the records that carry a pattern and the rest.

#include <span>
#include <string>
#include <vector>

#include "ibaudit/corpus.hpp"
#include "ibaudit/pattern.hpp"

namespace ibaudit {

struct SplitResult {
  std::string pattern_name;
  Corpus pattern_subset;    // records matching the pattern
  Corpus nopattern_subset;  // records matching neither the pattern nor an exclusion
  Corpus excluded;          // non-matching records caught by an exclusion pattern

  SplitStats stats() const {
    return split_stats(pattern_subset.size(), nopattern_subset.size());
  }
};

/// Classifies each record on its text. Order is preserved inside each side.
///
/// `exclusions` lets secondary patterns be pulled out of the non-pattern
/// side; with none given, the two subsets exactly partition the corpus.
inline SplitResult split(const Corpus& corpus, const Pattern& pattern,
                         std::span<const Pattern> exclusions = {}, MatchOptions opts = {}) {
  SplitResult out;
  out.pattern_name = pattern.name;
  out.pattern_subset.label = corpus.label + ".pattern";
  out.nopattern_subset.label = corpus.label + ".nopattern";
  out.excluded.label = corpus.label + ".excluded";

  for (const auto& rec : corpus.records) {
    const auto norms = tokenize(rec.text).norms();
    if (match_norms(pattern.elements, norms, opts).matched) {
      out.pattern_subset.records.push_back(rec);
      continue;
    }
    bool excluded = false;
    for (const auto& ex : exclusions) {
      if (match_norms(ex.elements, norms, opts).matched) {
        excluded = true;
        break;
      }
    }
    (excluded ? out.excluded : out.nopattern_subset).records.push_back(rec);
  }
  return out;
}

}  // namespace ibaudit
