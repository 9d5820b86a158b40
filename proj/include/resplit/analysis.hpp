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
#include <vector>

#include "resplit/chains.hpp"
#include "resplit/notebook.hpp"
#include "resplit/statements.hpp"

namespace resplit {

/// Parsed code cells of one notebook plus the chains between them.
struct NotebookAnalysis {
  std::vector<ParsedCell> cells;  // code cells only, notebook order
  ChainIndex chains;

  const ParsedCell* find(std::size_t cell_index) const {
    for (const ParsedCell& c : cells) {
      if (c.cell_index == cell_index) return &c;
    }
    return nullptr;
  }
};

inline NotebookAnalysis analyze_notebook(const Notebook& nb) {
  NotebookAnalysis out;
  for (std::size_t i = 0; i < nb.cells.size(); ++i) {
    if (nb.cells[i].is_code()) out.cells.push_back(parse_cell(nb.cells[i].source, i));
  }
  out.chains = build_chains(out.cells);
  return out;
}

}  // namespace resplit
