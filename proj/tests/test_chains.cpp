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

std::vector<DefUseLink> links_of(const Notebook& nb) {
  const NotebookAnalysis a = analyze_notebook(nb);
  return a.chains.links();
}

TEST(Chains, WorkedExample) {
  const auto links = links_of(code_notebook({"a = 2 + 2\nb = a / 2\nc = 16 * 2"}));
  const std::vector<DefUseLink> expected = {{{0, 0}, {0, 1}, "a"}};
  EXPECT_EQ(links, expected);
}

TEST(Chains, UndefinedNamesProduceNoLinks) {
  const auto links = links_of(code_notebook({"import pandas as pd", "df = pd.read_csv(p)"}));
  const std::vector<DefUseLink> expected = {{{0, 0}, {1, 0}, "pd"}};
  EXPECT_EQ(links, expected);
}

TEST(Chains, NearestDefinitionShadows) {
  const auto links = links_of(code_notebook({"x = 1\nx = 2\ny = x"}));
  const std::vector<DefUseLink> expected = {{{0, 1}, {0, 2}, "x"}};
  EXPECT_EQ(links, expected);
}

TEST(Chains, UseResolvesBeforeOwnDefinition) {
  const auto links = links_of(code_notebook({"x = 1", "x += 1", "print(x)"}));
  const std::vector<DefUseLink> expected = {{{0, 0}, {1, 0}, "x"}, {{1, 0}, {2, 0}, "x"}};
  EXPECT_EQ(links, expected);
}

TEST(Chains, MarkdownAndBrokenCellsKeepNotebookIndices) {
  Notebook nb = code_notebook({"a = 1", "print 'py2'", "b = a"});
  nb.cells.insert(nb.cells.begin() + 1, Cell::markdown("text"));
  const auto links = links_of(nb);
  const std::vector<DefUseLink> expected = {{{0, 0}, {3, 0}, "a"}};
  EXPECT_EQ(links, expected);
}

TEST(LinksWithin, NoNames) {
  const NotebookAnalysis a = analyze_notebook(code_notebook({"1 + 2"}));
  const CellLinks l = links_within(0, a.chains);
  EXPECT_TRUE(l.intra.empty());
  EXPECT_TRUE(l.inter.empty());
}

TEST(LinksWithin, ImportConsumedElsewhere) {
  const NotebookAnalysis a = analyze_notebook(code_notebook({"import pandas as pd", "df = pd.read_csv(p)"}));
  const CellLinks l = links_within(0, a.chains);
  EXPECT_TRUE(l.intra.empty());
  ASSERT_EQ(l.inter.size(), 1u);
  EXPECT_EQ(l.inter[0].name, "pd");
}

TEST(LinksWithin, SelfContainedFeatureCell) {
  const NotebookAnalysis a = analyze_notebook(code_notebook(
      {"raw = [1, 2, 3]\nscaled = [v / 3 for v in raw]\ntotal = sum(scaled) + len(raw)\nresult = total * 2"}));
  const CellLinks l = links_within(0, a.chains);
  EXPECT_TRUE(l.inter.empty());
  // raw->1, raw->2, scaled->2, total->3
  EXPECT_EQ(l.intra.size(), 4u);
}

TEST(ChainIndex, TouchingListsEachLinkOnce) {
  const NotebookAnalysis a = analyze_notebook(code_notebook({"a = 1\nb = a", "c = a + b", "d = c"}));
  std::size_t total = 0;
  for (std::size_t cell = 0; cell < 3; ++cell) {
    const CellLinks l = links_within(cell, a.chains);
    total += l.intra.size() + l.inter.size();
    for (const auto& link : l.intra) EXPECT_TRUE(link.is_within(cell));
    for (const auto& link : l.inter) EXPECT_FALSE(link.is_within(cell));
  }
  EXPECT_EQ(a.chains.size(), 4u);
  EXPECT_EQ(total, 1u + 2u + 3u + 1u);  // inter links are seen from both ends
}

}  // namespace
}  // namespace resplit
