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

// Splitting of a code cell at boundaries no intra-cell chain crosses.
//
// Fragments are collected from the bottom of the cell upwards. At each
// potential boundary the fragment collected so far is cut off if it has at
// least `min_split_lines` lines; otherwise collection continues upwards. A
// short remainder left at the top joins the fragment below it.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "resplit/analysis.hpp"
#include "resplit/error.hpp"
#include "resplit/notebook.hpp"
#include "resplit/transform_log.hpp"

namespace resplit {

struct SplitConfig {
  std::size_t min_split_lines = 3;
  bool attach_remainder_down = true;

  void validate() const {
    if (min_split_lines < 1) throw Error("min_split_lines must be at least 1");
  }
};

struct CellSplit {
  std::size_t cell_index = 0;
  std::vector<std::size_t> boundaries;  // a new cell begins after each of these statements
  std::vector<LineSpan> fragments;      // source lines of each resulting cell, top to bottom
};

struct SplitPlan {
  std::vector<CellSplit> cells;  // only cells that actually split
};

/// Boundary k lies between statements k and k+1.
inline std::vector<std::size_t> potential_split_points(const ParsedCell& cell,
                                                       const ChainIndex& chains) {
  const std::size_t n = cell.statements.size();
  if (cell.parse_failed || n < 2) return {};
  // crossing[k] counts intra links with def <= k < use.
  std::vector<int> delta(n + 1, 0);
  for (std::size_t i : chains.touching(cell.cell_index)) {
    const DefUseLink& l = chains.links()[i];
    if (!l.is_within(cell.cell_index)) continue;
    ++delta[l.def_at.stmt_index];
    --delta[l.use_at.stmt_index];
  }
  std::vector<std::size_t> points;
  int crossing = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    crossing += delta[k];
    if (crossing == 0) points.push_back(k);
  }
  return points;
}

/// Lines of the fragment holding statements [first, last].
inline int fragment_lines(const ParsedCell& cell, std::size_t first, std::size_t last) {
  return cell.statements[last].line_span.last - cell.statements[first].line_span.first + 1;
}

inline std::vector<std::size_t> plan_split(const ParsedCell& cell, const ChainIndex& chains,
                                           const SplitConfig& cfg) {
  cfg.validate();
  if (cell.parse_failed || cell.cell_magic || cell.statements.size() < 2) return {};
  const auto points = potential_split_points(cell, chains);
  const int min_lines = static_cast<int>(cfg.min_split_lines);

  std::vector<std::size_t> committed;  // collected bottom-up, so descending
  std::size_t bottom = cell.statements.size() - 1;
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    const std::size_t k = *it;
    if (fragment_lines(cell, k + 1, bottom) >= min_lines) {
      committed.push_back(k);
      bottom = k;
    }
  }
  if (!committed.empty() && cfg.attach_remainder_down &&
      fragment_lines(cell, 0, committed.back()) < min_lines) {
    committed.pop_back();
  }
  return {committed.rbegin(), committed.rend()};
}

inline std::vector<LineSpan> fragment_spans(const ParsedCell& cell,
                                            const std::vector<std::size_t>& boundaries) {
  std::vector<LineSpan> spans;
  std::size_t first = 0;
  for (std::size_t k : boundaries) {
    spans.push_back(LineSpan{cell.statements[first].line_span.first, cell.statements[k].line_span.last});
    first = k + 1;
  }
  spans.push_back(LineSpan{cell.statements[first].line_span.first,
                           cell.statements.back().line_span.last});
  return spans;
}

inline SplitPlan plan_splits(const NotebookAnalysis& analysis, const SplitConfig& cfg) {
  SplitPlan plan;
  for (const ParsedCell& cell : analysis.cells) {
    auto boundaries = plan_split(cell, analysis.chains, cfg);
    if (boundaries.empty()) continue;
    CellSplit s;
    s.cell_index = cell.cell_index;
    s.fragments = fragment_spans(cell, boundaries);
    s.boundaries = std::move(boundaries);
    plan.cells.push_back(std::move(s));
  }
  return plan;
}

namespace detail {

// nbformat cell ids: 1-64 characters from [a-zA-Z0-9-_].
inline std::string fragment_id(const std::string& base, std::size_t k) {
  std::string suffix = "-s" + std::to_string(k);
  return base.substr(0, 64 - suffix.size()) + suffix;
}

}  // namespace detail

inline std::pair<Notebook, TransformLog> apply_splits(const Notebook& nb, const SplitPlan& plan) {
  std::vector<const CellSplit*> split_at(nb.cells.size(), nullptr);
  for (const CellSplit& s : plan.cells) {
    if (s.cell_index >= nb.cells.size() || !nb.cells[s.cell_index].is_code()) {
      throw StalePlan("split plan refers to a missing or non-code cell " + std::to_string(s.cell_index));
    }
    if (split_at[s.cell_index]) throw StalePlan("cell split twice in one plan");
    const int n_lines = static_cast<int>(text::split_lines(nb.cells[s.cell_index].source).size());
    int prev = 0;
    for (const LineSpan& f : s.fragments) {
      if (f.first <= prev || f.last < f.first || f.last > n_lines) {
        throw StalePlan("split fragments do not fit cell " + std::to_string(s.cell_index));
      }
      prev = f.last;
    }
    if (s.fragments.size() < 2) throw StalePlan("split plan entry without a boundary");
    split_at[s.cell_index] = &s;
  }

  Notebook out = nb;
  out.cells.clear();
  TransformLog log;
  log.order = "split";
  for (std::size_t i = 0; i < nb.cells.size(); ++i) {
    const CellSplit* s = split_at[i];
    if (!s) {
      out.cells.push_back(nb.cells[i]);
      continue;
    }
    const Cell& original = nb.cells[i];
    const auto lines = text::split_lines(original.source);
    SplitRecord record{i, {}};
    for (std::size_t k = 0; k < s->fragments.size(); ++k) {
      const LineSpan& f = s->fragments[k];
      const bool last = k + 1 == s->fragments.size();
      Cell frag = original;
      frag.source = text::join_lines(std::vector<std::string_view>(
          lines.begin() + (f.first - 1), lines.begin() + f.last));
      if (!last) {
        frag.outputs = Json::array();
        frag.execution_count.reset();
        if (original.cell_id) frag.cell_id = detail::fragment_id(*original.cell_id, k);
      }
      record.after.push_back(out.cells.size());
      out.cells.push_back(std::move(frag));
    }
    log.splits.push_back(std::move(record));
  }
  log.counters = count_cells(nb, out);
  return {std::move(out), std::move(log)};
}

}  // namespace resplit
