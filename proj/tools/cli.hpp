// Copyright 2026 The ReSplit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Command-line front end. `run` is separate from `main` so the tests can
// drive it with captured streams.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "resplit/resplit.hpp"

namespace resplit::cli {

namespace fs = std::filesystem;

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kFailure = 2;

struct UsageError : Error {
  using Error::Error;
};

/// A notebook found under a corpus root; `id` is the relative path.
struct CorpusEntry {
  std::string id;
  fs::path path;
};

/// `*.ipynb` files under `root` (or `root` itself), sorted by id.
inline std::vector<CorpusEntry> list_notebooks(const fs::path& root) {
  std::error_code ec;
  if (fs::is_regular_file(root, ec)) return {{root.filename().string(), root}};
  if (!fs::is_directory(root, ec)) throw Error("not a file or directory: " + root.string());
  std::vector<CorpusEntry> out;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path().filename() == ".ipynb_checkpoints") {
      it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file() && it->path().extension() == ".ipynb") {
      out.push_back({fs::relative(it->path(), root).generic_string(), it->path()});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

struct LoadedCorpus {
  std::vector<std::string> ids;
  std::vector<Notebook> notebooks;
  std::size_t failed = 0;
};

inline LoadedCorpus load_corpus(const fs::path& root, std::ostream& err) {
  const auto entries = list_notebooks(root);
  std::vector<std::optional<Notebook>> loaded(entries.size());
  std::vector<std::string> errors(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) {
    try {
      loaded[i] = load_notebook(entries[i].path);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  LoadedCorpus out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!loaded[i]) {
      err << "resplit: skipping " << entries[i].id << ": " << errors[i] << "\n";
      ++out.failed;
      continue;
    }
    out.ids.push_back(entries[i].id);
    out.notebooks.push_back(std::move(*loaded[i]));
  }
  return out;
}

inline std::string chains_jsonl(const ChainIndex& chains) {
  std::string out;
  for (const DefUseLink& l : chains.links()) {
    out += Json{{"name", l.name},
                {"def", {l.def_at.cell_index, l.def_at.stmt_index}},
                {"use", {l.use_at.cell_index, l.use_at.stmt_index}}}
               .dump();
    out += '\n';
  }
  return out;
}

/// One record per code cell; `notebook` is added when non-empty.
inline std::string per_cell_jsonl(const Notebook& nb, const std::string& notebook = {}) {
  const NotebookAnalysis analysis = analyze_notebook(nb);
  std::string out;
  for (const ParsedCell& pc : analysis.cells) {
    const CellLinkStats s = cell_stats(pc.cell_index, analysis.chains);
    Json j{{"cell", pc.cell_index},
           {"lines", line_count(nb.cells[pc.cell_index])},
           {"intra", s.n_intra},
           {"inter", s.n_inter},
           {"r_inter", s.r_inter}};
    if (!notebook.empty()) j["notebook"] = notebook;
    out += j.dump();
    out += '\n';
  }
  return out;
}

/// Writes to `path`, or to `out` when the path is "-".
inline void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path == "-") {
    out << contents;
  } else {
    write_file_atomic(path, contents);
  }
}

// Flags shared by the transform subcommands; unset optionals mean "not given".
struct TransformOptions {
  std::string input;
  std::string output;
  std::string log_path;
  std::string config_path;
  std::string chains_path;
  bool dry_run = false;
  bool force = false;
  std::optional<std::size_t> max_merge_lines;
  std::optional<double> max_ratio_change;
  bool no_markdown_barrier = false;
  bool preserve_output_boundaries = false;
  std::optional<std::size_t> min_split_lines;
  std::optional<std::string> order;
};

struct StatsOptionsCli {
  std::string input;
  std::string transform = "none";
  std::string out = "-";
  std::string histogram;
  std::string config_path;
  bool per_cell = false;
  bool include_markdown = false;
  bool include_zero_link = false;
  bool all_lengths = false;
  std::size_t bins = 20;
};

inline AnalysisConfig load_config(const std::string& path) {
  AnalysisConfig cfg;
  if (path.empty()) return cfg;
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  try {
    apply_config_json(j, cfg);
  } catch (const Error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  return cfg;
}

inline AnalysisConfig resolve_config(const TransformOptions& o) {
  AnalysisConfig cfg = load_config(o.config_path);
  if (o.max_merge_lines) cfg.merge.max_merge_lines = *o.max_merge_lines;
  if (o.max_ratio_change) cfg.merge.max_ratio_change = *o.max_ratio_change;
  if (o.no_markdown_barrier) cfg.merge.barrier_on_markdown = false;
  if (o.preserve_output_boundaries) cfg.merge.preserve_output_boundaries = true;
  if (o.min_split_lines) cfg.split.min_split_lines = *o.min_split_lines;
  try {
    if (o.order) cfg.order = order_from_string(*o.order);
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

inline int run_transform_command(Transform transform, const TransformOptions& o, std::ostream& out,
                                 std::ostream& err) {
  if (o.output.empty() && !o.dry_run) throw UsageError("an output path (-o) is required");
  const AnalysisConfig cfg = resolve_config(o);
  const Notebook input = load_notebook(o.input);

  if (!o.chains_path.empty()) {
    emit(o.chains_path, chains_jsonl(analyze_notebook(input).chains), out);
  }

  TransformResult result;
  if (is_marked(input) && !o.force) {
    err << "resplit: " << o.input << " already carries a resplit marker; use --force to reprocess\n";
    result = run_transform(input, Transform::None, cfg);
    result.log.order = std::string(to_string(transform == Transform::Both ? Transform::Both : transform));
  } else {
    result = run_transform(input, transform, cfg);
    if (result.log.changed()) mark_transformed(result.notebook, cfg);
  }
  result.log.input_path = o.input;

  if (!o.dry_run) save_notebook(o.output, result.notebook);
  const std::string log_text = to_json(result.log).dump(2) + "\n";
  if (!o.log_path.empty()) {
    emit(o.log_path, log_text, out);
  } else if (o.dry_run) {
    out << log_text;
  }
  return kOk;
}

inline int run_stats_command(const StatsOptionsCli& o, std::ostream& out, std::ostream& err) {
  Transform transform;
  try {
    transform = transform_from_string(o.transform);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (o.bins == 0) throw UsageError("--bins must be positive");
  const AnalysisConfig cfg = load_config(o.config_path);
  LoadedCorpus corpus = load_corpus(o.input, err);

  if (o.per_cell) {
    std::string lines;
    for (std::size_t i = 0; i < corpus.notebooks.size(); ++i) {
      try {
        const TransformResult r = run_transform(corpus.notebooks[i], transform, cfg);
        lines += per_cell_jsonl(r.notebook, corpus.ids[i]);
      } catch (const std::exception& e) {
        err << "resplit: skipping " << corpus.ids[i] << ": " << e.what() << "\n";
      }
    }
    emit(o.out, lines, out);
    return kOk;
  }

  StatsOptions opt;
  opt.bins = o.bins;
  opt.include_markdown_in_counts = o.include_markdown;
  opt.include_zero_link = o.include_zero_link;
  opt.all_lengths = o.all_lengths;
  CorpusStats stats = corpus_stats(corpus.notebooks, transform, cfg, opt);
  stats.n_failed += corpus.failed;
  emit(o.out, to_json(stats, transform).dump(2) + "\n", out);
  if (!o.histogram.empty()) emit(o.histogram, histogram_csv(stats.ratio_histogram), out);
  return kOk;
}

inline int run_dedup_command(const std::string& input, double threshold, bool exhaustive,
                             const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("--threshold must be in (0, 1]");
  LoadedCorpus corpus = load_corpus(input, err);
  std::vector<TokenBag> bags(corpus.notebooks.size());
  parallel_for(bags.size(), [&](std::size_t i) { bags[i] = make_token_bag(corpus.ids[i], corpus.notebooks[i]); });
  const DedupResult result = dedup(bags, threshold, exhaustive);
  const Json j{{"threshold", threshold},
               {"n_notebooks", bags.size()},
               {"n_failed", corpus.failed},
               {"kept", result.kept},
               {"clusters", result.clusters}};
  emit(out_path, j.dump(2) + "\n", out);
  return kOk;
}

inline int run_filter_command(const std::string& input, const std::string& out_path, std::ostream& out,
                              std::ostream& err) {
  LoadedCorpus corpus = load_corpus(input, err);
  std::vector<char> keep(corpus.notebooks.size(), 0);
  parallel_for(keep.size(), [&](std::size_t i) { keep[i] = is_data_science(corpus.notebooks[i]) ? 1 : 0; });
  std::string lines;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) lines += corpus.ids[i] + "\n";
  }
  emit(out_path, lines, out);
  return kOk;
}

inline void add_transform_flags(CLI::App* cmd, TransformOptions& o, bool merge_flags, bool split_flags,
                                bool order_flag) {
  cmd->add_option("input", o.input, "Input notebook")->required();
  cmd->add_option("-o,--output", o.output, "Output notebook");
  cmd->add_option("--log", o.log_path, "Write the transform log as JSON ('-' for stdout)");
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--emit-chains", o.chains_path, "Write the input's def-use links as JSON lines");
  cmd->add_flag("--dry-run", o.dry_run, "Compute the log without writing the notebook");
  cmd->add_flag("--force", o.force, "Transform notebooks that carry a resplit marker");
  if (merge_flags) {
    cmd->add_option("--max-merge-lines", o.max_merge_lines, "Merge cells shorter than N lines");
    cmd->add_option("--max-ratio-change", o.max_ratio_change, "Largest allowed change of r_inter");
    cmd->add_flag("--no-markdown-barrier", o.no_markdown_barrier, "Merge across markdown cells");
    cmd->add_flag("--preserve-output-boundaries", o.preserve_output_boundaries,
                  "Never merge a cell with outputs into a later one");
  }
  if (split_flags) {
    cmd->add_option("--min-split-lines", o.min_split_lines, "Smallest fragment size");
  }
  if (order_flag) {
    cmd->add_option("--order", o.order, "merge-split or split-merge")
        ->check(CLI::IsMember({"merge-split", "split-merge"}));
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restructure Jupyter notebooks by merging and splitting code cells", "resplit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  TransformOptions merge_opt, split_opt, both_opt;
  auto* merge_cmd = app.add_subcommand("merge", "Merge small, tightly linked cells");
  add_transform_flags(merge_cmd, merge_opt, true, false, false);
  auto* split_cmd = app.add_subcommand("split", "Split cells at unlinked statement boundaries");
  add_transform_flags(split_cmd, split_opt, false, true, false);
  auto* both_cmd = app.add_subcommand("both", "Merge, then split");
  add_transform_flags(both_cmd, both_opt, true, true, true);

  StatsOptionsCli stats_opt;
  auto* stats_cmd = app.add_subcommand("stats", "Aggregate cell statistics over a corpus");
  stats_cmd->add_option("input", stats_opt.input, "Notebook or directory")->required();
  stats_cmd->add_option("--transform", stats_opt.transform, "none, merge, split or both")
      ->check(CLI::IsMember({"none", "merge", "split", "both"}));
  stats_cmd->add_option("--out", stats_opt.out, "Output JSON ('-' for stdout)");
  stats_cmd->add_option("--histogram", stats_opt.histogram, "Write the r_inter histogram as CSV");
  stats_cmd->add_option("--config", stats_opt.config_path, "JSON configuration file");
  stats_cmd->add_option("--bins", stats_opt.bins, "Histogram bins");
  stats_cmd->add_flag("--per-cell", stats_opt.per_cell, "One JSON line per code cell");
  stats_cmd->add_flag("--include-markdown-in-counts", stats_opt.include_markdown,
                      "Count markdown cells in the means");
  stats_cmd->add_flag("--include-zero-link", stats_opt.include_zero_link,
                      "Histogram cells without links too");
  stats_cmd->add_flag("--all-lengths", stats_opt.all_lengths, "Histogram cells of any length");

  std::string dedup_input, dedup_out = "-";
  double threshold = 0.8;
  bool exhaustive = false;
  auto* dedup_cmd = app.add_subcommand("dedup", "Cluster near-duplicate notebooks");
  dedup_cmd->add_option("input", dedup_input, "Corpus directory")->required();
  dedup_cmd->add_option("--threshold", threshold, "Similarity threshold");
  dedup_cmd->add_option("--out", dedup_out, "Output JSON ('-' for stdout)");
  dedup_cmd->add_flag("--exhaustive", exhaustive, "Score every pair");

  std::string filter_input, filter_out = "-";
  auto* filter_cmd = app.add_subcommand("filter-ds", "List notebooks importing data-science libraries");
  filter_cmd->add_option("input", filter_input, "Corpus directory")->required();
  filter_cmd->add_option("--out", filter_out, "Output list ('-' for stdout)");

  std::string chains_input, chains_out = "-";
  auto* chains_cmd = app.add_subcommand("chains", "Dump def-use links as JSON lines");
  chains_cmd->add_option("input", chains_input, "Input notebook")->required();
  chains_cmd->add_option("-o,--output", chains_out, "Output file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version surface as "errors" with exit code 0.
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*merge_cmd) return run_transform_command(Transform::Merge, merge_opt, out, err);
    if (*split_cmd) return run_transform_command(Transform::Split, split_opt, out, err);
    if (*both_cmd) return run_transform_command(Transform::Both, both_opt, out, err);
    if (*stats_cmd) return run_stats_command(stats_opt, out, err);
    if (*dedup_cmd) return run_dedup_command(dedup_input, threshold, exhaustive, dedup_out, out, err);
    if (*filter_cmd) return run_filter_command(filter_input, filter_out, out, err);
    if (*chains_cmd) {
      emit(chains_out, chains_jsonl(analyze_notebook(load_notebook(chains_input)).chains), out);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "resplit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "resplit: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace resplit::cli
