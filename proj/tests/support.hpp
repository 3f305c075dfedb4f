#pragma once

// Fixtures shared by the unit and acceptance suites: synthetic corpora,
// the planted-pattern generator, and scratch directories.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ibaudit/corpus.hpp"
#include "oracles.hpp"

namespace testing_support {

namespace fs = std::filesystem;

inline ibaudit::Corpus corpus_of(const std::vector<std::string>& texts, const std::string& label = "c",
                                 const std::string& prefix = "r") {
  std::vector<ibaudit::DatasetRecord> recs;
  for (std::size_t i = 0; i < texts.size(); ++i)
    recs.push_back({prefix + std::to_string(i), texts[i], {}, ibaudit::json::object()});
  return ibaudit::make_corpus(label, std::move(recs));
}

/// `matching` texts from `hit` and the rest from `miss`, interleaved
/// deterministically, `total` records in all.
inline ibaudit::Corpus engineered_corpus(std::size_t total, std::size_t matching, const std::string& hit,
                                         const std::string& miss, const std::string& label) {
  std::vector<std::string> texts;
  texts.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    // Spread matches evenly: record i matches when floor((i+1)*m/t) grows.
    const bool is_hit = ((i + 1) * matching) / total != (i * matching) / total;
    texts.push_back((is_hit ? hit : miss) + " #" + std::to_string(i));
  }
  return corpus_of(texts, label);
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = fs::temp_directory_path() / ("ibaudit-" + tag + "-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- planted-pattern generator ------------------------------------------------

/// Pseudo-words built from consonant-vowel syllables. None collide with
/// English function words, auxiliaries, or the template words below.
inline const std::vector<std::string>& distractor_vocab() {
  static const std::vector<std::string> vocab = [] {
    static const char* cons[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
    static const char* vows[] = {"a", "e", "i", "o", "u"};
    std::vector<std::string> out;
    for (auto c1 : cons)
      for (auto v1 : vows)
        for (auto c2 : cons)
          for (auto v2 : vows)
            for (auto c3 : {"x", "q", "j"}) out.push_back(std::string(c1) + v1 + c2 + v2 + c3);
    return out;  // 14*5*14*5*3 = 14700 words ending in x/q/j
  }();
  return vocab;
}

struct PlantedSet {
  std::vector<std::string> texts;
  std::vector<std::string> planted_units;  // generalized, "AUX" for the slot
  std::string planted_dsl;
  std::size_t planted_count = 0;
};

inline const std::vector<std::vector<std::string>>& planted_templates() {
  static const std::vector<std::vector<std::string>> t{
      {"how", "long", "AUX"},     {"which", "team", "won"},   {"what", "AUX"},
      {"how", "many", "points"},  {"AUX", "you"},             {"who", "AUX", "the", "owner"},
      {"how", "often", "AUX"},    {"in", "which", "country"}, {"what", "AUX", "the", "name"},
      {"when", "did"},
  };
  return t;
}

/// 5-20 examples; the pattern is planted in 60-100% of them, surrounded by
/// distractor words. `n_examples`/`n_planted` override the random sizes.
inline PlantedSet make_planted(std::mt19937& rng, std::size_t n_examples = 0, std::size_t n_planted = 0) {
  const auto& vocab = distractor_vocab();
  const auto& aux = oracle::aux_words();
  const std::vector<std::string> aux_list(aux.begin(), aux.end());
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  PlantedSet set;
  set.planted_units = planted_templates()[pick(planted_templates().size())];
  // "when did" generalizes to "when AUX".
  for (auto& u : set.planted_units)
    if (aux.count(u)) u = "AUX";
  for (const auto& u : set.planted_units) set.planted_dsl += (set.planted_dsl.empty() ? "" : " ") + u;

  const std::size_t n = n_examples ? n_examples : 5 + pick(16);
  std::size_t k = n_planted;
  if (k == 0) {
    const auto lo = static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(n)));
    k = lo + pick(n - lo + 1);
  }
  set.planted_count = k;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::size_t> planted(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> words;
    if (planted.count(i)) {
      for (std::size_t j = pick(4); j > 0; --j) words.push_back(vocab[pick(vocab.size())]);
      for (const auto& u : set.planted_units) words.push_back(u == "AUX" ? aux_list[pick(aux_list.size())] : u);
      for (std::size_t j = 1 + pick(5); j > 0; --j) words.push_back(vocab[pick(vocab.size())]);
    } else {
      for (std::size_t j = 4 + pick(7); j > 0; --j) words.push_back(vocab[pick(vocab.size())]);
    }
    std::string text;
    for (std::size_t j = 0; j < words.size(); ++j) {
      std::string w = words[j];
      if (j == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      text += (j ? " " : "") + w;
    }
    set.texts.push_back(text + "?");
  }
  return set;
}

}  // namespace testing_support
