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

// Merging of consecutive small code cells whose link profile is compatible.
//
// A greedy left-to-right pass grows a group one code cell at a time. A cell
// joins the group when both are short, the merged text stays short, and the
// inter-cell link ratio of the merged group differs from that of the group
// and of the candidate by at most `max_ratio_change`.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resplit/analysis.hpp"
#include "resplit/error.hpp"
#include "resplit/metrics.hpp"
#include "resplit/notebook.hpp"
#include "resplit/transform_log.hpp"

namespace resplit {

struct MergeConfig {
  std::size_t max_merge_lines = 5;   // every candidate and the grown group stay below this
  double max_ratio_change = 0.1;
  bool barrier_on_markdown = true;   // markdown and raw cells close the current group
  bool preserve_output_boundaries = false;
  std::size_t max_cell_lines = 10;   // ceiling on the merged cell's length
  bool two_sided_ratio = true;       // also compare against the candidate's own ratio

  void validate() const {
    if (max_merge_lines < 1) throw Error("max_merge_lines must be at least 1");
    if (!(max_ratio_change >= 0.0 && max_ratio_change <= 1.0)) {
      throw Error("max_ratio_change must lie in [0, 1]");
    }
    if (max_cell_lines < 1) throw Error("max_cell_lines must be at least 1");
  }
};

/// Ratio comparisons tolerate floating-point noise in quotients such as 0.8 - 0.7.
inline constexpr double kRatioTolerance = 1e-12;

struct MergeGroup {
  std::vector<std::size_t> cells;  // notebook indices of code cells, ascending
};

struct MergePlan {
  std::vector<MergeGroup> groups;
  std::vector<SkippedCell> skipped;  // cells excluded from merging
};

/// Sources joined by single newlines after trailing blank lines are removed.
inline std::string join_cell_sources(const std::vector<std::string_view>& sources) {
  std::string out;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (i > 0) out += '\n';
    out += text::strip_trailing_blank_lines(sources[i]);
  }
  return out;
}

inline std::string merged_source(const Notebook& nb, const std::vector<std::size_t>& cells) {
  std::vector<std::string_view> sources;
  sources.reserve(cells.size());
  for (std::size_t i : cells) sources.push_back(nb.cells[i].source);
  return join_cell_sources(sources);
}

/// Why a code cell can never take part in a merge, if it cannot.
inline std::optional<std::string> merge_exclusion(const ParsedCell& cell) {
  if (cell.parse_failed) return "parse-failed";
  if (cell.cell_magic) return "cell-magic";
  return std::nullopt;
}

/// Checks whether `candidate` may join `group`. Pure; used by the planner
/// and by post-hoc verification.
inline bool can_extend(const Notebook& nb, const ChainIndex& chains,
                       const std::vector<std::size_t>& group, std::size_t candidate,
                       const MergeConfig& cfg) {
  const std::size_t group_lines = line_count(merged_source(nb, group));
  if (group_lines >= cfg.max_merge_lines) return false;
  if (line_count(nb.cells[candidate]) >= cfg.max_merge_lines) return false;

  std::vector<std::size_t> extended = group;
  extended.push_back(candidate);
  if (line_count(merged_source(nb, extended)) > cfg.max_cell_lines) return false;

  const double r_group = merged_stats(group, chains).r_inter;
  const double r_merged = merged_stats(extended, chains).r_inter;
  if (std::abs(r_merged - r_group) > cfg.max_ratio_change + kRatioTolerance) return false;
  if (cfg.two_sided_ratio) {
    const double r_candidate = cell_stats(candidate, chains).r_inter;
    if (std::abs(r_merged - r_candidate) > cfg.max_ratio_change + kRatioTolerance) return false;
  }

  if (cfg.preserve_output_boundaries) {
    // Only the last cell of a merged group may carry outputs.
    for (std::size_t i : group) {
      if (nb.cells[i].has_outputs()) return false;
    }
  }
  return true;
}

inline MergePlan plan_merges(const Notebook& nb, const NotebookAnalysis& analysis,
                             const MergeConfig& cfg) {
  cfg.validate();
  MergePlan plan;
  std::vector<std::size_t> group;
  auto close = [&] {
    if (group.size() >= 2) plan.groups.push_back(MergeGroup{group});
    group.clear();
  };

  for (std::size_t i = 0; i < nb.cells.size(); ++i) {
    const Cell& cell = nb.cells[i];
    if (!cell.is_code()) {
      if (cfg.barrier_on_markdown) close();
      continue;
    }
    const ParsedCell* parsed = analysis.find(i);
    if (!parsed) throw StalePlan("analysis does not cover code cell " + std::to_string(i));
    if (auto reason = merge_exclusion(*parsed)) {
      plan.skipped.push_back(SkippedCell{i, *reason});
      close();
      continue;
    }
    if (group.empty()) {
      group.push_back(i);
    } else if (can_extend(nb, analysis.chains, group, i, cfg)) {
      group.push_back(i);
    } else {
      close();
      group.push_back(i);
    }
  }
  close();
  return plan;
}

inline void check_merge_plan(const Notebook& nb, const MergePlan& plan) {
  std::size_t floor = 0;
  bool first = true;
  for (const MergeGroup& g : plan.groups) {
    if (g.cells.size() < 2) throw StalePlan("merge group with fewer than two cells");
    for (std::size_t i : g.cells) {
      if (i >= nb.cells.size()) throw StalePlan("merge plan refers to missing cell " + std::to_string(i));
      if (!nb.cells[i].is_code()) throw StalePlan("merge plan refers to non-code cell " + std::to_string(i));
      if (!first && i <= floor) throw StalePlan("merge groups overlap or are out of order");
      if (i != g.cells.front()) {
        for (std::size_t between = floor + 1; between < i; ++between) {
          if (nb.cells[between].is_code()) throw StalePlan("merge group skips code cell " + std::to_string(between));
        }
      }
      floor = i;
      first = false;
    }
  }
}

inline Cell merge_cells(const Notebook& nb, const std::vector<std::size_t>& group) {
  const Cell& head = nb.cells[group.front()];
  Cell merged = head;
  merged.source = merged_source(nb, group);
  merged.outputs = Json::array();
  merged.execution_count.reset();
  for (std::size_t i : group) {
    const Cell& c = nb.cells[i];
    for (const auto& out : c.outputs) merged.outputs.push_back(out);
    if (c.execution_count &&
        (!merged.execution_count || *c.execution_count > *merged.execution_count)) {
      merged.execution_count = c.execution_count;
    }
  }
  return merged;
}

inline std::pair<Notebook, TransformLog> apply_merges(const Notebook& nb, const MergePlan& plan) {
  check_merge_plan(nb, plan);
  std::vector<const MergeGroup*> group_at(nb.cells.size(), nullptr);
  std::vector<bool> absorbed(nb.cells.size(), false);
  for (const MergeGroup& g : plan.groups) {
    group_at[g.cells.front()] = &g;
    for (std::size_t k = 1; k < g.cells.size(); ++k) absorbed[g.cells[k]] = true;
  }

  Notebook out = nb;
  out.cells.clear();
  TransformLog log;
  log.order = "merge";
  log.skipped_cells = plan.skipped;
  for (std::size_t i = 0; i < nb.cells.size(); ++i) {
    if (absorbed[i]) continue;
    if (const MergeGroup* g = group_at[i]) {
      log.merges.push_back(MergeRecord{g->cells, out.cells.size()});
      out.cells.push_back(merge_cells(nb, g->cells));
    } else {
      out.cells.push_back(nb.cells[i]);
    }
  }
  log.counters = count_cells(nb, out);
  return {std::move(out), std::move(log)};
}

}  // namespace resplit
