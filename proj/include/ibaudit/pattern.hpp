#pragma once

// Lexical pattern templates: parsing, rendering and matching.
//
// Notation (whitespace separates elements):
//   word              literal, matched case-insensitively
//   [a|b c|_]         alternation of word sequences; `_` is the empty branch
//   AUX               auxiliary-verb slot
//   ...               gap of zero or more tokens
//   a b / c d         whole-pattern alternatives of plain word sequences

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ibaudit/corpus.hpp"
#include "ibaudit/errors.hpp"
#include "ibaudit/text.hpp"

namespace ibaudit {

using WordSeq = std::vector<std::string>;

struct Literal {
  std::string word;
  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

struct Alternation {
  std::vector<WordSeq> options;  // sorted and unique; may hold one empty seq
  bool operator==(const Alternation&) const = default;
  auto operator<=>(const Alternation&) const = default;
};

struct ClassSlot {
  std::string class_name;
  bool operator==(const ClassSlot&) const = default;
  auto operator<=>(const ClassSlot&) const = default;
};

struct Gap {
  bool operator==(const Gap&) const = default;
  auto operator<=>(const Gap&) const = default;
};

using PatternElement = std::variant<Literal, Alternation, ClassSlot, Gap>;

struct Pattern {
  std::string name;
  std::vector<PatternElement> elements;
  std::string source;  // DSL text it was parsed from
};

struct MatchResult {
  bool matched = false;
  std::optional<std::pair<std::size_t, std::size_t>> span;  // [start, end)

  bool operator==(const MatchResult&) const = default;
};

struct MatchOptions {
  bool anchor_start = false;  // only spans starting at token 0
};

/// Extra alternatives for single words, applied when a pattern is compiled.
using SynonymTable = std::map<std::string, std::vector<WordSeq>, std::less<>>;

// --- rendering -----------------------------------------------------------

inline std::string join_words(const WordSeq& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

inline std::string to_dsl(const PatternElement& el) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return e.word;
        } else if constexpr (std::is_same_v<T, ClassSlot>) {
          return e.class_name;
        } else if constexpr (std::is_same_v<T, Gap>) {
          return "...";
        } else {
          std::string out = "[";
          for (std::size_t i = 0; i < e.options.size(); ++i) {
            if (i) out += '|';
            out += e.options[i].empty() ? "_" : join_words(e.options[i]);
          }
          return out + "]";
        }
      },
      el);
}

/// Canonical DSL text for a sequence of elements.
inline std::string to_dsl(std::span<const PatternElement> elements) {
  std::string out;
  for (const auto& el : elements) {
    if (!out.empty()) out += ' ';
    out += to_dsl(el);
  }
  return out;
}

/// Fewest tokens any match of `elements` can cover.
inline std::size_t min_word_count(std::span<const PatternElement> elements) {
  std::size_t n = 0;
  for (const auto& el : elements) {
    if (std::holds_alternative<Literal>(el) || std::holds_alternative<ClassSlot>(el)) {
      ++n;
    } else if (const auto* alt = std::get_if<Alternation>(&el)) {
      std::size_t shortest = SIZE_MAX;
      for (const auto& o : alt->options) shortest = std::min(shortest, o.size());
      n += shortest == SIZE_MAX ? 0 : shortest;
    }
  }
  return n;
}

/// Sorts and de-duplicates alternation options in place.
inline void canonicalize(Alternation& alt) {
  std::sort(alt.options.begin(), alt.options.end());
  alt.options.erase(std::unique(alt.options.begin(), alt.options.end()), alt.options.end());
}

// --- validation ----------------------------------------------------------

/// Throws PatternSyntaxError unless `elements` form a well-formed pattern.
inline void validate_elements(std::span<const PatternElement> elements) {
  if (elements.empty()) throw PatternSyntaxError("pattern is empty");
  if (std::holds_alternative<Gap>(elements.front()))
    throw PatternSyntaxError("pattern cannot start with a gap");
  if (std::holds_alternative<Gap>(elements.back()))
    throw PatternSyntaxError("pattern cannot end with a gap");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& el = elements[i];
    if (i > 0 && std::holds_alternative<Gap>(el) && std::holds_alternative<Gap>(elements[i - 1]))
      throw PatternSyntaxError("adjacent gaps");
    if (const auto* lit = std::get_if<Literal>(&el); lit && lit->word.empty())
      throw PatternSyntaxError("empty literal");
    if (const auto* slot = std::get_if<ClassSlot>(&el);
        slot && find_word_class(slot->class_name) == nullptr)
      throw PatternSyntaxError("unknown word class '" + slot->class_name + "'");
    if (const auto* alt = std::get_if<Alternation>(&el)) {
      if (alt->options.size() < 2)
        throw PatternSyntaxError("alternation needs at least two distinct options");
      auto empties = std::count_if(alt->options.begin(), alt->options.end(),
                                   [](const WordSeq& o) { return o.empty(); });
      if (empties > 1) throw PatternSyntaxError("alternation has more than one empty option");
    }
  }
  if (min_word_count(elements) < 2)
    throw PatternSyntaxError("pattern must span at least two words");
}

// --- parsing -------------------------------------------------------------

namespace detail {

enum class DslKind { word, group, gap, slash };

struct DslToken {
  DslKind kind;
  std::string text;  // word text or raw bracket contents
};

inline bool starts_gap(std::string_view s, std::size_t i) {
  return s.compare(i, 3, "...") == 0 || s.compare(i, 3, "\xE2\x80\xA6") == 0;  // U+2026
}

inline std::vector<DslToken> lex_dsl(std::string_view s) {
  std::vector<DslToken> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
    } else if (starts_gap(s, i)) {
      out.push_back({DslKind::gap, {}});
      i += 3;
    } else if (c == '[') {
      const auto close = s.find_first_of("[]", i + 1);
      if (close == std::string_view::npos || s[close] == '[')
        throw PatternSyntaxError("unbalanced '[' at offset " + std::to_string(i));
      out.push_back({DslKind::group, std::string(s.substr(i + 1, close - i - 1))});
      i = close + 1;
    } else if (c == ']') {
      throw PatternSyntaxError("unbalanced ']' at offset " + std::to_string(i));
    } else if (c == '|') {
      throw PatternSyntaxError("'|' outside brackets at offset " + std::to_string(i));
    } else if (c == '/') {
      out.push_back({DslKind::slash, {}});
      ++i;
    } else {
      std::size_t j = i;
      while (j < s.size() && std::string_view(" \t\r\n[]|/").find(s[j]) == std::string_view::npos &&
             !starts_gap(s, j))
        ++j;
      out.push_back({DslKind::word, std::string(s.substr(i, j - i))});
      i = j;
    }
  }
  return out;
}

inline std::string dsl_word(std::string_view raw) {
  std::string w = normalize_word(raw);
  if (w.empty())
    throw PatternSyntaxError("'" + std::string(raw) + "' is not a word");
  return w;
}

inline WordSeq split_words(std::string_view text) {
  WordSeq out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

inline Alternation parse_group(const std::string& body) {
  Alternation alt;
  std::size_t start = 0;
  while (true) {
    const auto bar = body.find('|', start);
    const std::string part = body.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
    const WordSeq raw = split_words(part);
    if (raw.empty()) throw PatternSyntaxError("empty alternation option in [" + body + "]");
    if (raw.size() == 1 && raw[0] == "_") {
      alt.options.emplace_back();
    } else {
      WordSeq words;
      for (const auto& w : raw) {
        if (w == "_") throw PatternSyntaxError("'_' must stand alone in an option");
        if (find_word_class(w) != nullptr)
          throw PatternSyntaxError("word class '" + w + "' not allowed inside brackets");
        words.push_back(dsl_word(w));
      }
      alt.options.push_back(std::move(words));
    }
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  auto empties = std::count_if(alt.options.begin(), alt.options.end(),
                               [](const WordSeq& o) { return o.empty(); });
  if (empties > 1) throw PatternSyntaxError("more than one empty option in [" + body + "]");
  canonicalize(alt);
  return alt;
}

inline void add_synonyms(Alternation& alt, const SynonymTable& synonyms) {
  const auto original = alt.options;
  for (const auto& opt : original) {
    if (opt.size() != 1) continue;
    if (auto it = synonyms.find(opt[0]); it != synonyms.end())
      alt.options.insert(alt.options.end(), it->second.begin(), it->second.end());
  }
  canonicalize(alt);
}

inline std::vector<PatternElement> expand_synonyms(std::vector<PatternElement> elements,
                                                   const SynonymTable& synonyms) {
  for (auto& el : elements) {
    if (const auto* lit = std::get_if<Literal>(&el)) {
      if (auto it = synonyms.find(lit->word); it != synonyms.end()) {
        Alternation alt{{WordSeq{lit->word}}};
        alt.options.insert(alt.options.end(), it->second.begin(), it->second.end());
        canonicalize(alt);
        if (alt.options.size() >= 2) el = std::move(alt);
      }
    } else if (auto* alt = std::get_if<Alternation>(&el)) {
      add_synonyms(*alt, synonyms);
    }
  }
  return elements;
}

}  // namespace detail

/// Compiles DSL text into a pattern. Literals are lowercased; when a
/// synonym table is given, its alternatives are folded into literals and
/// single-word alternation options.
inline Pattern parse_pattern(std::string_view dsl_text, std::string name = {},
                             const SynonymTable* synonyms = nullptr) {
  using detail::DslKind;
  if (dsl_text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw PatternSyntaxError("pattern text is empty");
  const auto tokens = detail::lex_dsl(dsl_text);

  std::vector<PatternElement> elements;
  const bool has_slash = std::any_of(tokens.begin(), tokens.end(),
                                     [](const auto& t) { return t.kind == DslKind::slash; });
  if (has_slash) {
    // "when did / what time" is sugar for one alternation of word sequences.
    Alternation alt;
    WordSeq current;
    auto flush = [&] {
      if (current.empty()) throw PatternSyntaxError("empty alternative around '/'");
      alt.options.push_back(std::move(current));
      current.clear();
    };
    for (const auto& t : tokens) {
      if (t.kind == DslKind::slash) {
        flush();
      } else if (t.kind == DslKind::word && find_word_class(t.text) == nullptr) {
        current.push_back(detail::dsl_word(t.text));
      } else {
        throw PatternSyntaxError("'/' alternatives must be plain word sequences");
      }
    }
    flush();
    canonicalize(alt);
    elements.push_back(std::move(alt));
  } else {
    for (const auto& t : tokens) {
      switch (t.kind) {
        case DslKind::gap:
          elements.push_back(Gap{});
          break;
        case DslKind::group:
          elements.push_back(detail::parse_group(t.text));
          break;
        case DslKind::word:
          if (find_word_class(t.text) != nullptr) {
            elements.push_back(ClassSlot{t.text});
          } else {
            if (t.text == "_") throw PatternSyntaxError("'_' is only valid inside brackets");
            elements.push_back(Literal{detail::dsl_word(t.text)});
          }
          break;
        case DslKind::slash:
          break;
      }
    }
  }

  if (synonyms != nullptr) elements = detail::expand_synonyms(std::move(elements), *synonyms);
  validate_elements(elements);
  Pattern p{std::move(name), std::move(elements), std::string(dsl_text)};
  if (p.name.empty()) p.name = p.source;
  return p;
}

// --- matching ------------------------------------------------------------

namespace detail {

inline bool seq_matches_at(std::span<const std::string> norms, std::size_t pos,
                           const WordSeq& seq) {
  if (pos + seq.size() > norms.size()) return false;
  for (std::size_t k = 0; k < seq.size(); ++k)
    if (norms[pos + k] != seq[k]) return false;
  return true;
}

// Earliest end of a match of `elements` starting exactly at `start`.
inline std::optional<std::size_t> shortest_match_from(std::span<const PatternElement> elements,
                                                      std::span<const std::string> norms,
                                                      std::size_t start) {
  const std::size_t n = norms.size();
  std::vector<char> reach(n + 1, 0), next(n + 1, 0);
  reach[start] = 1;
  for (const auto& el : elements) {
    std::fill(next.begin(), next.end(), 0);
    bool any = false;
    if (std::holds_alternative<Gap>(el)) {
      for (std::size_t p = start; p <= n; ++p) {
        if (reach[p]) {
          std::fill(next.begin() + static_cast<std::ptrdiff_t>(p), next.end(), 1);
          any = true;
          break;
        }
      }
    } else {
      for (std::size_t p = start; p <= n; ++p) {
        if (!reach[p]) continue;
        if (const auto* lit = std::get_if<Literal>(&el)) {
          if (p < n && norms[p] == lit->word) next[p + 1] = any = true;
        } else if (const auto* slot = std::get_if<ClassSlot>(&el)) {
          const WordClass* cls = find_word_class(slot->class_name);
          if (p < n && cls && cls->accepts(norms[p])) next[p + 1] = any = true;
        } else if (const auto* alt = std::get_if<Alternation>(&el)) {
          for (const auto& opt : alt->options)
            if (seq_matches_at(norms, p, opt)) next[p + opt.size()] = any = true;
        }
      }
    }
    if (!any) return std::nullopt;
    std::swap(reach, next);
  }
  for (std::size_t e = start + 1; e <= n; ++e)
    if (reach[e]) return e;
  return std::nullopt;
}

}  // namespace detail

/// Leftmost, then shortest, span of `norms` matched by `elements`.
inline MatchResult match_norms(std::span<const PatternElement> elements,
                               std::span<const std::string> norms, MatchOptions opts = {}) {
  const std::size_t last_start = opts.anchor_start ? std::min<std::size_t>(1, norms.size())
                                                   : norms.size();
  for (std::size_t s = 0; s < last_start; ++s) {
    if (auto end = detail::shortest_match_from(elements, norms, s))
      return MatchResult{true, std::make_pair(s, *end)};
  }
  return MatchResult{};
}

inline MatchResult match(const Pattern& pattern, const TokenizedText& text,
                         MatchOptions opts = {}) {
  const auto norms = text.norms();
  return match_norms(pattern.elements, norms, opts);
}

inline MatchResult match(const Pattern& pattern, std::string_view text, MatchOptions opts = {}) {
  return match(pattern, tokenize(text), opts);
}

/// One result per record, in corpus order. Only the record text is examined.
inline std::vector<std::pair<std::string, MatchResult>> match_corpus(const Pattern& pattern,
                                                                     const Corpus& corpus,
                                                                     MatchOptions opts = {}) {
  std::vector<std::pair<std::string, MatchResult>> out;
  out.reserve(corpus.size());
  for (const auto& rec : corpus.records)
    out.emplace_back(rec.id, match(pattern, std::string_view(rec.text), opts));
  return out;
}

// --- files ---------------------------------------------------------------

/// Pattern file: `name<TAB>dsl` per line; `#` starts a comment line.
inline std::vector<Pattern> parse_pattern_file(std::istream& in, const std::string& source_name = {},
                                               const SynonymTable* synonyms = nullptr) {
  std::vector<Pattern> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("expected name<TAB>pattern", source_name, lineno);
    try {
      out.push_back(parse_pattern(line.substr(tab + 1), line.substr(0, tab), synonyms));
    } catch (const PatternSyntaxError& e) {
      throw DataError(e.what(), source_name, lineno);
    }
  }
  return out;
}

inline std::vector<Pattern> load_pattern_file(const fs::path& path,
                                              const SynonymTable* synonyms = nullptr) {
  auto in = open_input(path);
  return parse_pattern_file(in, path.string(), synonyms);
}

/// Synonym file: `word<TAB>alt one|alt two` per line; `#` comments.
inline SynonymTable parse_synonyms(std::istream& in, const std::string& source_name = {}) {
  SynonymTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("expected word<TAB>synonyms", source_name, lineno);
    const std::string key = normalize_word(line.substr(0, tab));
    if (key.empty()) throw DataError("empty key", source_name, lineno);
    std::string rest = line.substr(tab + 1);
    std::size_t start = 0;
    while (true) {
      const auto bar = rest.find('|', start);
      WordSeq words;
      for (const auto& w : detail::split_words(rest.substr(start, bar == std::string::npos ? std::string::npos : bar - start))) {
        auto norm = normalize_word(w);
        if (!norm.empty()) words.push_back(std::move(norm));
      }
      if (words.empty()) throw DataError("empty synonym", source_name, lineno);
      table[key].push_back(std::move(words));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
  }
  return table;
}

inline SynonymTable load_synonyms(const fs::path& path) {
  auto in = open_input(path);
  return parse_synonyms(in, path.string());
}

}  // namespace ibaudit
