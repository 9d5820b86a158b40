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

// Notebook-wide definition-usage links between top-level statements.
//
// Execution order is the top-to-bottom order of code cells. Each use of a name
// links to the nearest preceding statement that defines it; a statement never
// links to itself, so `x = x + 1` links to the previous definition of x.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "resplit/statements.hpp"

namespace resplit {

struct StmtRef {
  std::size_t cell_index = 0;  // position of the cell in the notebook
  std::size_t stmt_index = 0;

  friend auto operator<=>(const StmtRef&, const StmtRef&) = default;
};

struct DefUseLink {
  StmtRef def_at;
  StmtRef use_at;
  std::string name;

  bool is_within(std::size_t cell) const {
    return def_at.cell_index == cell && use_at.cell_index == cell;
  }
  bool touches(std::size_t cell) const {
    return def_at.cell_index == cell || use_at.cell_index == cell;
  }

  friend auto operator<=>(const DefUseLink&, const DefUseLink&) = default;

  friend std::ostream& operator<<(std::ostream& os, const DefUseLink& l) {
    return os << l.name << ": [" << l.def_at.cell_index << "," << l.def_at.stmt_index << "] -> ["
              << l.use_at.cell_index << "," << l.use_at.stmt_index << "]";
  }
};

class ChainIndex {
 public:
  ChainIndex() = default;
  explicit ChainIndex(std::vector<DefUseLink> links) : links_(std::move(links)) {
    std::sort(links_.begin(), links_.end());
    links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const auto& l = links_[i];
      by_cell_[l.def_at.cell_index].push_back(i);
      if (l.use_at.cell_index != l.def_at.cell_index) by_cell_[l.use_at.cell_index].push_back(i);
    }
  }

  /// All links, sorted and unique.
  const std::vector<DefUseLink>& links() const { return links_; }

  /// Indices into links() of every link with an endpoint in `cell`.
  std::span<const std::size_t> touching(std::size_t cell) const {
    auto it = by_cell_.find(cell);
    if (it == by_cell_.end()) return {};
    return it->second;
  }

  std::size_t size() const { return links_.size(); }

 private:
  std::vector<DefUseLink> links_;
  std::map<std::size_t, std::vector<std::size_t>> by_cell_;
};

/// `cells` must be the notebook's code cells in notebook order. Cells that
/// failed to parse contribute nothing.
inline ChainIndex build_chains(std::span<const ParsedCell> cells) {
  std::vector<DefUseLink> links;
  std::unordered_map<std::string, StmtRef> latest;
  for (const ParsedCell& cell : cells) {
    for (const Statement& stmt : cell.statements) {
      const StmtRef here{cell.cell_index, stmt.index_in_cell};
      for (const std::string& name : stmt.uses) {
        auto it = latest.find(name);
        if (it != latest.end()) links.push_back(DefUseLink{it->second, here, name});
      }
      for (const std::string& name : stmt.defs) latest[name] = here;
    }
  }
  return ChainIndex(std::move(links));
}

struct CellLinks {
  std::vector<DefUseLink> intra;  // both endpoints in the cell
  std::vector<DefUseLink> inter;  // exactly one endpoint in the cell
};

inline CellLinks links_within(std::size_t cell_index, const ChainIndex& index) {
  CellLinks out;
  for (std::size_t i : index.touching(cell_index)) {
    const DefUseLink& l = index.links()[i];
    (l.is_within(cell_index) ? out.intra : out.inter).push_back(l);
  }
  return out;
}

}  // namespace resplit
