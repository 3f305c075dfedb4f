#pragma once

// Command-line front end: mine, audit, split, evalgap, diversity, sample.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ibaudit/auditor.hpp"
#include "ibaudit/corpus.hpp"
#include "ibaudit/evaluator.hpp"
#include "ibaudit/miner.hpp"
#include "ibaudit/pattern.hpp"
#include "ibaudit/report.hpp"
#include "ibaudit/splitter.hpp"

namespace ibaudit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PatternArgs {
  std::string dsl;
  std::string file;
  std::string name;
  std::string synonyms;
  bool anchor_start = false;
};

struct OutputArgs {
  std::string out_dir;
  std::string format = "md";
};

namespace detail {

inline void add_pattern_flags(CLI::App& cmd, PatternArgs& p) {
  cmd.add_option("--pattern", p.dsl, "Inline pattern, e.g. \"[Are|Would|Do] you\"");
  cmd.add_option("--pattern-file", p.file, "File of name<TAB>pattern lines")->check(CLI::ExistingFile);
  cmd.add_option("--pattern-name", p.name, "Pattern to use from --pattern-file (default: first)");
  cmd.add_option("--synonyms", p.synonyms, "Synonym table, word<TAB>alt|alt lines")->check(CLI::ExistingFile);
  cmd.add_flag("--anchor-start", p.anchor_start, "Only match at the start of the text");
}

inline void add_output_flags(CLI::App& cmd, OutputArgs& o) {
  cmd.add_option("--out", o.out_dir, "Directory for report files (Markdown and JSON)");
  cmd.add_option("--format", o.format, "Format printed to stdout")
      ->check(CLI::IsMember({"md", "json"}));
}

inline void add_miner_flags(CLI::App& cmd, MinerConfig& c, bool with_support) {
  cmd.add_option("--nmin", c.n_min, "Shortest n-gram length")->check(CLI::Range(2, 100));
  cmd.add_option("--nmax", c.n_max, "Longest n-gram length")->check(CLI::Range(2, 100));
  if (with_support) {
    cmd.add_option("--min-support", c.min_support_count, "Minimum number of supporting examples")
        ->check(CLI::PositiveNumber);
    cmd.add_flag("--prefer-shorter", c.prefer_shorter, "Break support ties towards shorter patterns");
  }
  cmd.add_option("--merge-overlap", c.merge_overlap, "Shared positions required to merge two patterns");
}

/// Patterns selected by --pattern / --pattern-file / --pattern-name.
inline std::vector<Pattern> resolve_patterns(const PatternArgs& p, bool all_from_file) {
  std::optional<SynonymTable> syn;
  if (!p.synonyms.empty()) syn = load_synonyms(p.synonyms);
  const SynonymTable* synp = syn ? &*syn : nullptr;

  if (!p.dsl.empty() && !p.file.empty()) throw UsageError("give either --pattern or --pattern-file");
  if (!p.dsl.empty()) {
    try {
      return {parse_pattern(p.dsl, p.name.empty() ? p.dsl : p.name, synp)};
    } catch (const PatternSyntaxError& e) {
      throw UsageError(std::string("bad --pattern: ") + e.what());
    }
  }
  if (p.file.empty()) throw UsageError("a pattern is required (--pattern or --pattern-file)");
  auto pats = load_pattern_file(p.file, synp);
  if (pats.empty()) throw DataError("no patterns in file", p.file);
  if (!p.name.empty()) {
    auto it = std::find_if(pats.begin(), pats.end(), [&](const Pattern& x) { return x.name == p.name; });
    if (it == pats.end()) throw UsageError("pattern '" + p.name + "' not found in " + p.file);
    return {*it};
  }
  if (!all_from_file) pats.resize(1);
  return pats;
}

inline void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write file", path.string());
  f << text;
}

/// Prints the requested format; with --out, writes both formats to disk.
inline void emit(const OutputArgs& o, const std::string& stem, const std::string& md,
                 const json& machine, std::ostream& out) {
  const std::string js = machine.dump(2) + "\n";
  out << (o.format == "json" ? js : md);
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_file(fs::path(o.out_dir) / (stem + ".md"), md);
    write_file(fs::path(o.out_dir) / (stem + ".json"), js);
  }
}

inline void check_config(const MinerConfig& c) {
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

inline std::vector<std::string> record_ids(const Corpus& c) {
  std::vector<std::string> ids;
  for (const auto& r : c.records) ids.push_back(r.id);
  return ids;
}

inline std::vector<TokenizedText> tokenize_corpus(const Corpus& c) {
  std::vector<TokenizedText> out;
  out.reserve(c.size());
  for (const auto& r : c.records) out.push_back(tokenize(r.text));
  return out;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Audit crowdsourced datasets for patterns copied from annotation instructions",
               "ibaudit"};
  app.require_subcommand(1);
  app.fallthrough(false);

  OutputArgs output;
  PatternArgs pat;
  MinerConfig miner;

  // mine
  std::string mine_input;
  auto* mine_cmd = app.add_subcommand("mine", "Find the dominant pattern in instruction examples");
  mine_cmd->add_option("instructions", mine_input, "Instruction examples (one per line, or .jsonl)")
      ->required()
      ->check(CLI::ExistingFile);
  detail::add_miner_flags(*mine_cmd, miner, true);
  detail::add_output_flags(*mine_cmd, output);

  // audit
  std::string audit_ins, audit_train, audit_test;
  double margin = 0.0;
  std::optional<double> ref_ins, ref_train, ref_test;
  auto* audit_cmd = app.add_subcommand("audit", "Pattern coverage in instructions, train and test");
  audit_cmd->add_option("--instructions", audit_ins, "Instruction examples")->required()->check(CLI::ExistingFile);
  audit_cmd->add_option("--train", audit_train, "Training corpus (.jsonl)")->check(CLI::ExistingFile);
  audit_cmd->add_option("--test", audit_test, "Test corpus (.jsonl)")->check(CLI::ExistingFile);
  audit_cmd->add_option("--margin", margin, "Points above instruction coverage that count as amplified");
  audit_cmd->add_option("--ref-ins", ref_ins, "Reference instruction coverage; warn when off by >2 points");
  audit_cmd->add_option("--ref-train", ref_train, "Reference train coverage");
  audit_cmd->add_option("--ref-test", ref_test, "Reference test coverage");
  detail::add_pattern_flags(*audit_cmd, pat);
  detail::add_output_flags(*audit_cmd, output);

  // split
  std::string split_corpus, split_exclude;
  auto* split_cmd = app.add_subcommand("split", "Partition a corpus into pattern / non-pattern files");
  split_cmd->add_option("--corpus", split_corpus, "Corpus to split (.jsonl)")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--exclude-file", split_exclude,
                        "Patterns whose matches are removed from the non-pattern side")
      ->check(CLI::ExistingFile);
  detail::add_pattern_flags(*split_cmd, pat);
  detail::add_output_flags(*split_cmd, output);

  // evalgap
  std::string gold_path;
  std::vector<std::string> pred_paths, seed_labels;
  auto* gap_cmd = app.add_subcommand("evalgap", "F1 on pattern vs non-pattern test records");
  gap_cmd->add_option("--gold", gold_path, "Gold corpus (.jsonl)")->required()->check(CLI::ExistingFile);
  gap_cmd->add_option("--pred", pred_paths, "Prediction file per seed (id<TAB>prediction)")
      ->required()
      ->check(CLI::ExistingFile);
  gap_cmd->add_option("--seed-label", seed_labels, "Seed labels, in --pred order (default: file stem)");
  detail::add_pattern_flags(*gap_cmd, pat);
  detail::add_output_flags(*gap_cmd, output);

  // diversity
  std::string responses_path;
  auto* div_cmd = app.add_subcommand("diversity", "Count distinct pattern families in responses");
  div_cmd->add_option("responses", responses_path, "Responses (one per line, or .jsonl)")
      ->required()
      ->check(CLI::ExistingFile);
  detail::add_miner_flags(*div_cmd, miner, false);
  detail::add_output_flags(*div_cmd, output);

  // sample
  std::string pool_path;
  std::size_t sample_k = 0;
  auto* sample_cmd = app.add_subcommand("sample", "Pick a lexically diverse set of examples from a pool");
  sample_cmd->add_option("pool", pool_path, "Example pool (one per line, or .jsonl)")
      ->required()
      ->check(CLI::ExistingFile);
  sample_cmd->add_option("-k,--count", sample_k, "Number of examples to pick")->required();
  detail::add_output_flags(*sample_cmd, output);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const MatchOptions mopts{pat.anchor_start};

    if (*mine_cmd) {
      detail::check_config(miner);
      const Corpus ins = load_any(mine_input, "instructions");
      if (ins.empty()) throw UsageError("instruction file is empty: " + mine_input);
      const auto texts = detail::tokenize_corpus(ins);
      const auto result = mine(texts, miner);
      const auto ids = detail::record_ids(ins);
      detail::emit(output, "mine", mining_markdown(result), mining_json(result, ids), out);

    } else if (*audit_cmd) {
      const auto patterns = detail::resolve_patterns(pat, true);
      const Corpus ins = load_any(audit_ins, "instructions");
      if (ins.empty()) throw UsageError("instruction file is empty: " + audit_ins);
      std::optional<Corpus> train, test;
      if (!audit_train.empty()) train = load_corpus(audit_train, "train");
      if (!audit_test.empty()) test = load_corpus(audit_test, "test");

      AuditOptions aopts{mopts, margin};
      std::vector<CoverageReport> reports;
      json rows = json::array();
      for (const auto& p : patterns) {
        reports.push_back(audit(p, ins, train ? &*train : nullptr, test ? &*test : nullptr, aopts));
        auto row = coverage_json(reports.back());
        auto warnings = deviation_warnings(reports.back(), {ref_ins, ref_train, ref_test});
        for (const auto& w : warnings) err << "warning: " << p.name << ": " << w << "\n";
        row["warnings"] = warnings;
        rows.push_back(std::move(row));
      }
      detail::emit(output, "audit", coverage_markdown(reports), json{{"rows", rows}}, out);

    } else if (*split_cmd) {
      if (output.out_dir.empty()) throw UsageError("split needs --out");
      const auto pattern = detail::resolve_patterns(pat, false).front();
      std::vector<Pattern> exclusions;
      if (!split_exclude.empty()) exclusions = load_pattern_file(split_exclude);
      const Corpus corpus = load_corpus(split_corpus);
      const auto parts = split(corpus, pattern, exclusions, mopts);
      const std::string stem = fs::path(split_corpus).stem().string();
      const auto paths = save_split(parts.pattern_subset, parts.nopattern_subset, output.out_dir, stem);
      if (!exclusions.empty()) save_corpus(parts.excluded, fs::path(output.out_dir) / (stem + ".excluded"));
      auto stats = to_json(parts.stats());
      stats["pattern"] = pattern.name;
      stats["files"] = {paths.pattern.string(), paths.nopattern.string(), paths.stats.string()};
      detail::emit(output, stem + ".split", split_markdown(stem, parts.stats()), stats, out);

    } else if (*gap_cmd) {
      const auto pattern = detail::resolve_patterns(pat, false).front();
      if (!seed_labels.empty() && seed_labels.size() != pred_paths.size())
        throw UsageError("--seed-label must be given once per --pred");
      const Corpus gold = load_corpus(gold_path, "gold");
      std::vector<PredictionSet> preds;
      for (std::size_t i = 0; i < pred_paths.size(); ++i)
        preds.push_back(load_predictions(pred_paths[i], seed_labels.empty() ? "" : seed_labels[i]));
      const auto report = evalgap(preds, gold, pattern, mopts);
      detail::emit(output, "evalgap", gap_markdown(std::span(&report, 1)), gap_json(report), out);

    } else if (*div_cmd) {
      detail::check_config(miner);
      const Corpus responses = load_any(responses_path, "responses");
      if (responses.empty()) throw UsageError("response file is empty: " + responses_path);
      const auto report = diversity(detail::tokenize_corpus(responses), miner);
      detail::emit(output, "diversity", diversity_markdown(report), diversity_json(report), out);

    } else if (*sample_cmd) {
      const Corpus pool = load_any(pool_path, "pool");
      if (sample_k > pool.size())
        throw UsageError("-k " + std::to_string(sample_k) + " exceeds pool size " +
                         std::to_string(pool.size()));
      const auto ids = suggest_diverse_sample(pool, sample_k);
      detail::emit(output, "sample", sample_markdown(pool, ids), sample_json(ids), out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoDominantPatternError& e) {
    err << "no dominant pattern: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), out, err);
}

}  // namespace ibaudit::cli
