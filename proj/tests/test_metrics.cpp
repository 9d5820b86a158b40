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


#include <gtest/gtest.h>

#include <vector>

#include "resplit/resplit.hpp"
#include "support/synth.hpp"

namespace resplit {
namespace {

using testing::code_notebook;

TEST(InterRatio, Formula) {
  EXPECT_DOUBLE_EQ(inter_ratio(2, 2), 0.5);
  EXPECT_DOUBLE_EQ(inter_ratio(0, 3), 1.0);
  EXPECT_DOUBLE_EQ(inter_ratio(0, 0), 0.0);
}

TEST(CellStats, ImportCellIsFullyInterLinked) {
  const auto a = analyze_notebook(code_notebook({"import numpy as np\nimport pandas as pd", "np.zeros(pd)"}));
  const CellLinkStats s = cell_stats(0, a.chains);
  EXPECT_EQ(s.n_intra, 0u);
  EXPECT_EQ(s.n_inter, 2u);
  EXPECT_DOUBLE_EQ(s.r_inter, 1.0);
}

TEST(CellStats, ZeroLinkCell) {
  const auto a = analyze_notebook(code_notebook({"print('hi')"}));
  EXPECT_DOUBLE_EQ(cell_stats(0, a.chains).r_inter, 0.0);
}

TEST(MergedStats, LinkBetweenMembersBecomesIntra) {
  const auto a = analyze_notebook(code_notebook({"a = 1", "b = a"}));
  EXPECT_EQ(cell_stats(0, a.chains).n_inter, 1u);
  EXPECT_EQ(cell_stats(1, a.chains).n_inter, 1u);
  const std::vector<std::size_t> group = {0, 1};
  const CellLinkStats m = merged_stats(group, a.chains);
  EXPECT_EQ(m.n_intra, 1u);
  EXPECT_EQ(m.n_inter, 0u);
  EXPECT_DOUBLE_EQ(m.r_inter, 0.0);
}

TEST(MergedStats, UnlinkedCells) {
  const auto a = analyze_notebook(code_notebook({"1", "2"}));
  const std::vector<std::size_t> group = {0, 1};
  EXPECT_DOUBLE_EQ(merged_stats(group, a.chains).r_inter, 0.0);
}

TEST(MergedStats, ImportCellWithSmallNeighbour) {
  const auto a = analyze_notebook(code_notebook(
      {"import numpy as np\nimport pandas as pd\nimport os", "x = 1\ny = x", "z = 0", "np.array(pd.read_csv(os.sep))"}));
  EXPECT_DOUBLE_EQ(cell_stats(0, a.chains).r_inter, 1.0);
  const std::vector<std::size_t> group = {0, 1};
  const CellLinkStats m = merged_stats(group, a.chains);
  EXPECT_EQ(m.n_intra, 1u);
  EXPECT_EQ(m.n_inter, 3u);
  EXPECT_DOUBLE_EQ(m.r_inter, 0.75);
}

TEST(MergedStats, SingleCellMatchesCellStats) {
  const auto a = analyze_notebook(code_notebook({"a = 1\nb = a", "c = a + b", "print(c)"}));
  for (std::size_t i = 0; i < 3; ++i) {
    const std::vector<std::size_t> group = {i};
    const CellLinkStats m = merged_stats(group, a.chains);
    const CellLinkStats s = cell_stats(i, a.chains);
    EXPECT_EQ(m.n_intra, s.n_intra);
    EXPECT_EQ(m.n_inter, s.n_inter);
    EXPECT_DOUBLE_EQ(m.r_inter, s.r_inter);
  }
}

}  // namespace
}  // namespace resplit
