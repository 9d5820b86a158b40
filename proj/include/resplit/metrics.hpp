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

// Per-cell link statistics and the inter-cell link ratio
//
//   r_inter = inter / (intra + inter),   0 when the cell has no links.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "resplit/chains.hpp"

namespace resplit {

struct CellLinkStats {
  std::size_t cell_index = 0;
  std::size_t n_intra = 0;
  std::size_t n_inter = 0;
  double r_inter = 0.0;

  std::size_t n_links() const { return n_intra + n_inter; }
};

inline double inter_ratio(std::size_t n_intra, std::size_t n_inter) {
  const std::size_t all = n_intra + n_inter;
  return all == 0 ? 0.0 : static_cast<double>(n_inter) / static_cast<double>(all);
}

/// Statistics of `group` taken as one cell: links between two members count
/// as intra. The reported cell_index is the group's first member.
inline CellLinkStats merged_stats(std::span<const std::size_t> group, const ChainIndex& chains) {
  CellLinkStats out;
  if (group.empty()) return out;
  out.cell_index = group.front();
  auto member = [&](std::size_t cell) {
    return std::find(group.begin(), group.end(), cell) != group.end();
  };
  std::vector<std::size_t> seen;
  for (std::size_t cell : group) {
    for (std::size_t i : chains.touching(cell)) seen.push_back(i);
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (std::size_t i : seen) {
    const DefUseLink& l = chains.links()[i];
    const bool def_in = member(l.def_at.cell_index);
    const bool use_in = member(l.use_at.cell_index);
    if (def_in && use_in) {
      ++out.n_intra;
    } else {
      ++out.n_inter;
    }
  }
  out.r_inter = inter_ratio(out.n_intra, out.n_inter);
  return out;
}

inline CellLinkStats cell_stats(std::size_t cell_index, const ChainIndex& chains) {
  const std::size_t group[] = {cell_index};
  return merged_stats(group, chains);
}

}  // namespace resplit
