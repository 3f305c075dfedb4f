#pragma once

// Dataset records, corpora, prediction sets and their on-disk formats.
//
// Corpora are JSON Lines: one object per line with "id", "text" and
// "answers". Any other keys are carried through untouched. Canonical form is
// the compact dump with sorted keys, so load/save round-trips byte for byte.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "ibaudit/errors.hpp"
#include "ibaudit/stats.hpp"

namespace ibaudit {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct DatasetRecord {
  std::string id;
  std::string text;                  // the question/input patterns target
  std::vector<std::string> answers;  // gold answers; empty means unanswerable
  json meta = json::object();        // every other key, preserved verbatim

  bool operator==(const DatasetRecord&) const = default;
};

struct Corpus {
  std::string label;  // "train", "test", ...
  std::vector<DatasetRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

/// Builds a corpus, enforcing unique ids and non-empty text.
inline Corpus make_corpus(std::string label, std::vector<DatasetRecord> records) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].text.empty())
      throw DataError("record '" + records[i].id + "' has empty text", label, i + 1);
    if (!seen.insert(records[i].id).second)
      throw DataError("duplicate id '" + records[i].id + "'", label, i + 1);
  }
  return Corpus{std::move(label), std::move(records)};
}

namespace detail {

inline std::string id_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::invalid_argument("\"id\" must be a string or integer");
}

inline std::vector<std::string> parse_answers(const json& v) {
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
    return out;
  }
  if (!v.is_array()) throw std::invalid_argument("\"answers\" must be a list");
  for (const auto& a : v) {
    if (a.is_string())
      out.push_back(a.get<std::string>());
    else if (a.is_object() && a.contains("text") && a["text"].is_string())
      out.push_back(a["text"].get<std::string>());  // SQuAD-style {"text": ...}
    else
      throw std::invalid_argument("answer entries must be strings");
  }
  return out;
}

}  // namespace detail

/// Maps one JSON object onto a record. Accepts "question" for "text" and a
/// single "answer" string for "answers".
inline DatasetRecord record_from_json(const json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("record must be a JSON object");
  DatasetRecord rec;
  json rest = obj;

  if (!obj.contains("id")) throw std::invalid_argument("missing \"id\"");
  rec.id = detail::id_to_string(obj["id"]);
  rest.erase("id");

  if (obj.contains("text")) {
    if (!obj["text"].is_string()) throw std::invalid_argument("\"text\" must be a string");
    rec.text = obj["text"].get<std::string>();
    rest.erase("text");
  } else if (obj.contains("question") && obj["question"].is_string()) {
    rec.text = obj["question"].get<std::string>();
    rest.erase("question");
  } else {
    throw std::invalid_argument("missing \"text\"");
  }

  if (obj.contains("answers")) {
    rec.answers = detail::parse_answers(obj["answers"]);
    rest.erase("answers");
  } else if (obj.contains("answer")) {
    rec.answers = detail::parse_answers(obj["answer"]);
    rest.erase("answer");
  } else {
    throw std::invalid_argument("missing \"answers\"");
  }

  rec.meta = std::move(rest);
  return rec;
}

inline json record_to_json(const DatasetRecord& rec) {
  json obj = rec.meta.is_object() ? rec.meta : json::object();
  obj["id"] = rec.id;
  obj["text"] = rec.text;
  obj["answers"] = rec.answers;
  return obj;
}

inline Corpus parse_corpus(std::istream& in, std::string label,
                           const std::string& source_name = {}) {
  std::vector<DatasetRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    DatasetRecord rec;
    try {
      rec = record_from_json(json::parse(line));
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed JSON: ") + e.what(), source_name, lineno);
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what(), source_name, lineno);
    }
    if (rec.text.empty()) throw DataError("empty \"text\"", source_name, lineno);
    if (!seen.insert(rec.id).second)
      throw DataError("duplicate id '" + rec.id + "'", source_name, lineno);
    records.push_back(std::move(rec));
  }
  return Corpus{std::move(label), std::move(records)};
}

inline std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file", path.string());
  return in;
}

inline Corpus load_corpus(const fs::path& path, std::string label = {}) {
  auto in = open_input(path);
  if (label.empty()) label = path.stem().string();
  return parse_corpus(in, std::move(label), path.string());
}

inline void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& rec : corpus.records) out << record_to_json(rec).dump() << '\n';
}

inline void save_corpus(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file", path.string());
  write_corpus(corpus, out);
}

/// Reads a plain-text file with one example per line (blank lines skipped).
/// Record ids are `<prefix><line number>`.
inline Corpus parse_lines(std::istream& in, std::string label,
                          const std::string& id_prefix = "line-") {
  std::vector<DatasetRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    records.push_back(DatasetRecord{id_prefix + std::to_string(lineno), line, {}, json::object()});
  }
  return Corpus{std::move(label), std::move(records)};
}

inline Corpus load_lines(const fs::path& path, std::string label = {}) {
  auto in = open_input(path);
  if (label.empty()) label = path.stem().string();
  return parse_lines(in, std::move(label));
}

/// JSON Lines for `.jsonl`/`.json`, one example per line otherwise.
inline Corpus load_any(const fs::path& path, std::string label = {}) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json") return load_corpus(path, std::move(label));
  return load_lines(path, std::move(label));
}

// --- split outputs -------------------------------------------------------

struct SplitStats {
  std::size_t total = 0;
  std::size_t pattern_count = 0;
  std::size_t nopattern_count = 0;
  Percentage pattern_pct;
  Percentage nopattern_pct;
};

/// Counts and one-decimal shares of the two sides. An empty total gives 0/0.
inline SplitStats split_stats(std::size_t pattern_count, std::size_t nopattern_count) {
  SplitStats s;
  s.total = pattern_count + nopattern_count;
  s.pattern_count = pattern_count;
  s.nopattern_count = nopattern_count;
  if (s.total > 0) {
    s.pattern_pct = Percentage::of(pattern_count, s.total);
    s.nopattern_pct = Percentage::of(nopattern_count, s.total);
  }
  return s;
}

inline json to_json(const SplitStats& s) {
  json j;
  j["total"] = s.total;
  j["pattern_count"] = s.pattern_count;
  j["pattern_pct"] = s.pattern_pct.value();
  j["nopattern_count"] = s.nopattern_count;
  j["nopattern_pct"] = s.nopattern_pct.value();
  return j;
}

struct SplitPaths {
  fs::path pattern;
  fs::path nopattern;
  fs::path stats;
};

/// Writes `<stem>.pattern`, `<stem>.nopattern` (JSON Lines) and
/// `<stem>.stats.json` into `out_dir`.
inline SplitPaths save_split(const Corpus& with_pattern, const Corpus& without_pattern,
                             const fs::path& out_dir, const std::string& stem) {
  std::unordered_set<std::string> ids;
  for (const auto& r : with_pattern.records) ids.insert(r.id);
  for (const auto& r : without_pattern.records)
    if (ids.contains(r.id))
      throw DataError("id '" + r.id + "' appears in both subsets");

  fs::create_directories(out_dir);
  SplitPaths paths{out_dir / (stem + ".pattern"), out_dir / (stem + ".nopattern"),
                   out_dir / (stem + ".stats.json")};
  save_corpus(with_pattern, paths.pattern);
  save_corpus(without_pattern, paths.nopattern);

  std::ofstream out(paths.stats, std::ios::binary);
  if (!out) throw DataError("cannot write file", paths.stats.string());
  out << to_json(split_stats(with_pattern.size(), without_pattern.size())).dump(2) << '\n';
  return paths;
}

// --- predictions ---------------------------------------------------------

/// Model outputs for one training seed, keyed by record id.
struct PredictionSet {
  std::string seed_label;
  std::map<std::string, std::string> entries;
};

/// Parses `id<TAB>prediction` lines. An empty prediction is allowed.
inline PredictionSet parse_predictions(std::istream& in, std::string seed_label,
                                       const std::string& source_name = {}) {
  PredictionSet set{std::move(seed_label), {}};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError("expected id<TAB>prediction", source_name, lineno);
    std::string id = line.substr(0, tab);
    if (id.empty()) throw DataError("empty id", source_name, lineno);
    if (!set.entries.emplace(id, line.substr(tab + 1)).second)
      throw DataError("duplicate id '" + id + "'", source_name, lineno);
  }
  return set;
}

inline PredictionSet load_predictions(const fs::path& path, std::string seed_label = {}) {
  auto in = open_input(path);
  if (seed_label.empty()) seed_label = path.stem().string();
  return parse_predictions(in, std::move(seed_label), path.string());
}

}  // namespace ibaudit
