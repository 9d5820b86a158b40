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

#include <cstddef>
#include <string>
#include <vector>

#include "resplit/notebook.hpp"
#include "resplit/version.hpp"

namespace resplit {

struct MergeRecord {
  std::vector<std::size_t> before;  // cell indices in the input of the merge pass
  std::size_t after = 0;            // index of the merged cell in its output
};

struct SplitRecord {
  std::size_t before = 0;            // cell index in the input of the split pass
  std::vector<std::size_t> after;    // fragment indices in its output
};

struct SkippedCell {
  std::size_t index = 0;
  std::string reason;
};

struct LogCounters {
  std::size_t cells_before = 0;
  std::size_t cells_after = 0;
  std::size_t code_cells_before = 0;
  std::size_t code_cells_after = 0;
  std::size_t lines_before = 0;  // code-cell lines
  std::size_t lines_after = 0;
};

struct TransformLog {
  std::string input_path;
  std::string tool_version = kVersion;
  Json config = Json::object();
  std::string order;  // which passes ran, e.g. "merge-split"
  std::vector<MergeRecord> merges;
  std::vector<SplitRecord> splits;
  LogCounters counters;
  std::vector<SkippedCell> skipped_cells;

  bool changed() const { return !merges.empty() || !splits.empty(); }
};

inline std::size_t code_line_total(const Notebook& nb) {
  std::size_t total = 0;
  for (const Cell& c : nb.cells) {
    if (c.is_code()) total += line_count(c);
  }
  return total;
}

inline LogCounters count_cells(const Notebook& before, const Notebook& after) {
  LogCounters c;
  c.cells_before = before.cells.size();
  c.cells_after = after.cells.size();
  c.code_cells_before = before.code_cell_count();
  c.code_cells_after = after.code_cell_count();
  c.lines_before = code_line_total(before);
  c.lines_after = code_line_total(after);
  return c;
}

inline Json to_json(const TransformLog& log) {
  Json merges = Json::array();
  for (const auto& m : log.merges) merges.push_back({{"cell_range_before", m.before}, {"cell_index_after", m.after}});
  Json splits = Json::array();
  for (const auto& s : log.splits) splits.push_back({{"cell_index_before", s.before}, {"fragment_indices_after", s.after}});
  Json skipped = Json::array();
  for (const auto& s : log.skipped_cells) skipped.push_back({{"index", s.index}, {"reason", s.reason}});
  const auto& c = log.counters;
  return Json{{"input_path", log.input_path},
              {"tool_version", log.tool_version},
              {"config", log.config},
              {"order", log.order},
              {"merges", merges},
              {"splits", splits},
              {"counters",
               {{"cells_before", c.cells_before},
                {"cells_after", c.cells_after},
                {"code_cells_before", c.code_cells_before},
                {"code_cells_after", c.code_cells_after},
                {"lines_before", c.lines_before},
                {"lines_after", c.lines_after}}},
              {"skipped_cells", skipped}};
}

}  // namespace resplit
