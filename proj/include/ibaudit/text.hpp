#pragma once

// Tokenization, normalization and word classes shared by every other module.

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace ibaudit {

/// One word of input text.
///
/// `surface` is the source substring with edge punctuation removed and
/// `norm` is its lowercase form, which is what patterns are matched against.
/// The clitic "'s" (straight or curly apostrophe) always normalizes to "'s".
struct Token {
  std::string surface;
  std::string norm;
  std::size_t begin = 0;  // byte offset into TokenizedText::source
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

struct TokenizedText {
  std::vector<Token> tokens;
  std::string source;  // NFC-normalized input; token offsets index into it

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  std::vector<std::string> norms() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.norm);
    return out;
  }
};

/// A closed set of normalized words that a pattern slot can stand for.
///
/// `aliases` are extra forms a slot accepts during matching and mining
/// without being members of the class proper (AUX accepts the clitic "'s").
struct WordClass {
  std::string name;
  std::set<std::string, std::less<>> members;
  std::set<std::string, std::less<>> aliases;

  bool contains(std::string_view norm) const { return members.contains(norm); }
  bool accepts(std::string_view norm) const {
    return members.contains(norm) || aliases.contains(norm);
  }
};

inline constexpr std::string_view kAuxClassName = "AUX";
inline constexpr std::string_view kClitic = "'s";

inline const WordClass& aux_class() {
  static const WordClass aux{
      std::string(kAuxClassName),
      {"am", "is", "are", "was", "were", "has", "have", "had", "do", "does",
       "did", "will", "would", "can", "could", "may", "might", "shall",
       "should", "must"},
      {std::string(kClitic)}};
  return aux;
}

/// Looks up a built-in word class by name; nullptr when unknown.
inline const WordClass* find_word_class(std::string_view name) {
  if (name == kAuxClassName) return &aux_class();
  return nullptr;
}

inline bool is_member(const WordClass& cls, const Token& token) {
  return cls.contains(token.norm);
}

namespace detail {

inline bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

inline bool is_edge_punct(UChar32 c) {
  return (U_MASK(u_charType(c)) & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

inline bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

// Decodes the code point starting at `i`; advances `i` past it.
inline UChar32 next_code_point(std::string_view s, std::size_t& i) {
  UChar32 c = 0;
  int32_t pos = static_cast<int32_t>(i);
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), pos,
          static_cast<int32_t>(s.size()), c);
  i = static_cast<std::size_t>(pos);
  return c < 0 ? 0xFFFD : c;
}

// Start offset of the code point that ends at `end`.
inline std::size_t prev_boundary(std::string_view s, std::size_t end) {
  int32_t pos = static_cast<int32_t>(end);
  U8_BACK_1(reinterpret_cast<const uint8_t*>(s.data()), 0, pos);
  return static_cast<std::size_t>(pos);
}

inline UChar32 code_point_at(std::string_view s, std::size_t begin) {
  return next_code_point(s, begin);
}

// Shrinks [begin, end) so that it neither starts nor ends with punctuation.
inline void trim_punct(std::string_view s, std::size_t& begin, std::size_t& end) {
  while (begin < end) {
    std::size_t next = begin;
    if (!is_edge_punct(next_code_point(s, next))) break;
    begin = next;
  }
  while (end > begin) {
    std::size_t prev = prev_boundary(s, end);
    if (!is_edge_punct(code_point_at(s, prev))) break;
    end = prev;
  }
}

// Length in bytes of a trailing "'s" / "’s" clitic, or 0.
inline std::size_t clitic_suffix(std::string_view word) {
  static constexpr std::string_view straight = "'s";
  static constexpr std::string_view curly = "\xE2\x80\x99s";  // U+2019
  for (auto form : {straight, curly}) {
    if (word.size() >= form.size()) {
      auto tail = word.substr(word.size() - form.size());
      if (tail.substr(0, form.size() - 1) == form.substr(0, form.size() - 1) &&
          (tail.back() == 's' || tail.back() == 'S'))
        return form.size();
    }
  }
  return 0;
}

}  // namespace detail

inline std::string to_nfc(std::string_view text) {
  if (detail::is_ascii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString out = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

inline std::string to_lower(std::string_view text) {
  if (detail::is_ascii(text)) {
    std::string out(text);
    for (auto& c : out)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
  }
  auto u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

/// Normalized form of a single word: edge punctuation removed, lowercased.
/// Returns "" when nothing but punctuation remains.
inline std::string normalize_word(std::string_view word) {
  std::string nfc = to_nfc(word);
  std::size_t b = 0, e = nfc.size();
  if (e > 0 && detail::clitic_suffix(nfc) == e) return std::string(kClitic);
  detail::trim_punct(nfc, b, e);
  return to_lower(std::string_view(nfc).substr(b, e - b));
}

/// Splits text into word tokens.
///
/// Whitespace separates chunks; punctuation and symbols are peeled off both
/// ends of each chunk and punctuation-only chunks disappear. Inner hyphens
/// and apostrophes stay ("32-yard", "doesn't"), except that a trailing "'s"
/// becomes its own token.
inline TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  out.source = to_nfc(text);
  const std::string_view src = out.source;

  auto emit = [&](std::size_t b, std::size_t e) {
    if (b >= e) return;
    std::string surface(src.substr(b, e - b));
    out.tokens.push_back(Token{surface, to_lower(surface), b, e});
  };

  std::size_t i = 0;
  while (i < src.size()) {
    std::size_t next = i;
    if (detail::is_space(detail::next_code_point(src, next))) {
      i = next;
      continue;
    }
    std::size_t chunk_begin = i, chunk_end = i;
    while (chunk_end < src.size()) {
      std::size_t n = chunk_end;
      if (detail::is_space(detail::next_code_point(src, n))) break;
      chunk_end = n;
    }
    i = chunk_end;

    std::size_t b = chunk_begin, e = chunk_end;
    detail::trim_punct(src, b, e);

    // A detached clitic ("John 's") would otherwise lose its apostrophe.
    std::size_t rb = chunk_begin, re = chunk_end;
    while (re > rb) {
      std::size_t prev = detail::prev_boundary(src, re);
      if (!detail::is_edge_punct(detail::code_point_at(src, prev))) break;
      re = prev;
    }
    std::string_view raw = src.substr(rb, re - rb);
    if (!raw.empty() && detail::clitic_suffix(raw) == raw.size()) {
      out.tokens.push_back(Token{std::string(raw), std::string(kClitic), rb, re});
      continue;
    }

    std::string_view word = src.substr(b, e - b);
    if (std::size_t k = detail::clitic_suffix(word); k > 0 && k < word.size()) {
      std::size_t base_b = b, base_e = e - k;
      detail::trim_punct(src, base_b, base_e);
      emit(base_b, base_e);
      out.tokens.push_back(
          Token{std::string(src.substr(e - k, k)), std::string(kClitic), e - k, e});
      continue;
    }
    emit(b, e);
  }
  return out;
}

}  // namespace ibaudit
