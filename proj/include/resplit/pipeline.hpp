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

// End-to-end transforms over one notebook, the hyper-parameter bundle, and the
// metadata marker stamped on rewritten notebooks.

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>

#include "resplit/analysis.hpp"
#include "resplit/error.hpp"
#include "resplit/merge.hpp"
#include "resplit/notebook.hpp"
#include "resplit/split.hpp"
#include "resplit/transform_log.hpp"
#include "resplit/version.hpp"

namespace resplit {

enum class Order { MergeSplit, SplitMerge };
enum class Transform { None, Merge, Split, Both };

struct AnalysisConfig {
  MergeConfig merge;
  SplitConfig split;
  Order order = Order::MergeSplit;

  void validate() const {
    merge.validate();
    split.validate();
  }
};

inline std::string_view to_string(Order o) {
  return o == Order::MergeSplit ? "merge-split" : "split-merge";
}

inline Order order_from_string(std::string_view s) {
  if (s == "merge-split") return Order::MergeSplit;
  if (s == "split-merge") return Order::SplitMerge;
  throw Error("unknown order '" + std::string(s) + "' (expected merge-split or split-merge)");
}

inline std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::None: return "none";
    case Transform::Merge: return "merge";
    case Transform::Split: return "split";
    case Transform::Both: return "both";
  }
  return "none";
}

inline Transform transform_from_string(std::string_view s) {
  if (s == "none") return Transform::None;
  if (s == "merge") return Transform::Merge;
  if (s == "split") return Transform::Split;
  if (s == "both") return Transform::Both;
  throw Error("unknown transform '" + std::string(s) + "'");
}

inline Json to_json(const AnalysisConfig& cfg) {
  return Json{{"merge",
               {{"max_merge_lines", cfg.merge.max_merge_lines},
                {"max_ratio_change", cfg.merge.max_ratio_change},
                {"barrier_on_markdown", cfg.merge.barrier_on_markdown},
                {"preserve_output_boundaries", cfg.merge.preserve_output_boundaries},
                {"max_cell_lines", cfg.merge.max_cell_lines},
                {"two_sided_ratio", cfg.merge.two_sided_ratio}}},
              {"split",
               {{"min_split_lines", cfg.split.min_split_lines},
                {"attach_remainder_down", cfg.split.attach_remainder_down}}},
              {"order", std::string(to_string(cfg.order))}};
}

/// Overlays the keys present in `j` onto `cfg`; absent keys keep their value.
inline void apply_config_json(const Json& j, AnalysisConfig& cfg) {
  if (!j.is_object()) throw Error("configuration must be a JSON object");
  try {
    if (auto m = j.find("merge"); m != j.end()) {
      cfg.merge.max_merge_lines = m->value("max_merge_lines", cfg.merge.max_merge_lines);
      cfg.merge.max_ratio_change = m->value("max_ratio_change", cfg.merge.max_ratio_change);
      cfg.merge.barrier_on_markdown = m->value("barrier_on_markdown", cfg.merge.barrier_on_markdown);
      cfg.merge.preserve_output_boundaries =
          m->value("preserve_output_boundaries", cfg.merge.preserve_output_boundaries);
      cfg.merge.max_cell_lines = m->value("max_cell_lines", cfg.merge.max_cell_lines);
      cfg.merge.two_sided_ratio = m->value("two_sided_ratio", cfg.merge.two_sided_ratio);
    }
    if (auto s = j.find("split"); s != j.end()) {
      cfg.split.min_split_lines = s->value("min_split_lines", cfg.split.min_split_lines);
      cfg.split.attach_remainder_down =
          s->value("attach_remainder_down", cfg.split.attach_remainder_down);
    }
    if (auto o = j.find("order"); o != j.end()) cfg.order = order_from_string(o->get<std::string>());
  } catch (const Json::exception& e) {
    throw Error(std::string("invalid configuration: ") + e.what());
  }
  cfg.validate();
}

/// FNV-1a over the canonical JSON form, as 16 hex digits.
inline std::string config_hash(const AnalysisConfig& cfg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_json(cfg).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline constexpr const char* kMarkerKey = "resplit";

inline bool is_marked(const Notebook& nb) { return nb.metadata.contains(kMarkerKey); }

inline void mark_transformed(Notebook& nb, const AnalysisConfig& cfg) {
  nb.metadata[kMarkerKey] = Json{{"version", kVersion}, {"config_hash", config_hash(cfg)}};
}

struct TransformResult {
  Notebook notebook;
  TransformLog log;
};

inline TransformResult run_merge(const Notebook& nb, const MergeConfig& cfg) {
  const NotebookAnalysis analysis = analyze_notebook(nb);
  auto [out, log] = apply_merges(nb, plan_merges(nb, analysis, cfg));
  return {std::move(out), std::move(log)};
}

inline TransformResult run_split(const Notebook& nb, const SplitConfig& cfg) {
  const NotebookAnalysis analysis = analyze_notebook(nb);
  auto [out, log] = apply_splits(nb, plan_splits(analysis, cfg));
  for (const ParsedCell& c : analysis.cells) {
    if (c.parse_failed) log.skipped_cells.push_back(SkippedCell{c.cell_index, "parse-failed"});
    else if (c.cell_magic) log.skipped_cells.push_back(SkippedCell{c.cell_index, "cell-magic"});
  }
  return {std::move(out), std::move(log)};
}

/// Runs the selected passes. Chains are rebuilt between passes. The log's
/// merge records index the input of the merge pass and split records the
/// input of the split pass.
inline TransformResult run_transform(const Notebook& nb, Transform transform,
                                     const AnalysisConfig& cfg) {
  cfg.validate();
  TransformResult result{nb, {}};
  auto merge_pass = [&] {
    TransformResult r = run_merge(result.notebook, cfg.merge);
    result.notebook = std::move(r.notebook);
    result.log.merges = std::move(r.log.merges);
    if (result.log.skipped_cells.empty()) result.log.skipped_cells = std::move(r.log.skipped_cells);
  };
  auto split_pass = [&] {
    TransformResult r = run_split(result.notebook, cfg.split);
    result.notebook = std::move(r.notebook);
    result.log.splits = std::move(r.log.splits);
    if (result.log.skipped_cells.empty()) result.log.skipped_cells = std::move(r.log.skipped_cells);
  };
  switch (transform) {
    case Transform::None:
      break;
    case Transform::Merge:
      merge_pass();
      break;
    case Transform::Split:
      split_pass();
      break;
    case Transform::Both:
      if (cfg.order == Order::MergeSplit) {
        merge_pass();
        split_pass();
      } else {
        split_pass();
        merge_pass();
      }
      break;
  }
  result.log.order = transform == Transform::Both ? std::string(to_string(cfg.order))
                                                  : std::string(to_string(transform));
  result.log.config = to_json(cfg);
  result.log.counters = count_cells(nb, result.notebook);
  return result;
}

}  // namespace resplit
