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

MergePlan plan_for(const Notebook& nb, const MergeConfig& cfg = {}) {
  return plan_merges(nb, analyze_notebook(nb), cfg);
}

const char* const kLongConsumer =
    "df = pd.read_csv('x.csv')\n"
    "arr = np.asarray(df)\n"
    "model = LinearRegression()\n"
    "model.fit(arr, df['y'])\n"
    "print(model.coef_)\n"
    "print(model.intercept_)";

TEST(PlanMerges, ConsecutiveImportCellsFormOneGroup) {
  const Notebook nb = code_notebook({"import numpy as np", "import pandas as pd",
                                     "from sklearn.linear_model import LinearRegression", kLongConsumer});
  const MergePlan plan = plan_for(nb);
  ASSERT_EQ(plan.groups.size(), 1u);
  EXPECT_EQ(plan.groups[0].cells, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(PlanMerges, LargeRatioChangeBlocksMerge) {
  const Notebook nb = code_notebook(
      {"z = 1\nw = 2\nq = 3\nr = 4\ns = 5\nt = 6", "a = 1\nb = a", "c = z\nd = w"});
  const auto a = analyze_notebook(nb);
  EXPECT_DOUBLE_EQ(cell_stats(1, a.chains).r_inter, 0.0);
  EXPECT_DOUBLE_EQ(cell_stats(2, a.chains).r_inter, 1.0);
  EXPECT_TRUE(plan_merges(nb, a, {}).groups.empty());
}

TEST(PlanMerges, SizeCriterion) {
  const Notebook nb = code_notebook({"a = 1\na = 2\na = 3\na = 4\na = 5\na = 6", "b = 1\nb = 2"});
  EXPECT_TRUE(plan_for(nb).groups.empty());
  MergeConfig loose;
  loose.max_merge_lines = 7;
  loose.max_cell_lines = 100;
  EXPECT_EQ(plan_for(nb, loose).groups.size(), 1u);
}

TEST(PlanMerges, MarkdownIsABarrierUnlessDisabled) {
  Notebook nb = code_notebook({"import numpy as np", "import pandas as pd", kLongConsumer});
  nb.cells.insert(nb.cells.begin() + 1, Cell::markdown("text"));
  EXPECT_TRUE(plan_for(nb).groups.empty());
  MergeConfig cfg;
  cfg.barrier_on_markdown = false;
  const MergePlan plan = plan_for(nb, cfg);
  ASSERT_EQ(plan.groups.size(), 1u);
  EXPECT_EQ(plan.groups[0].cells, (std::vector<std::size_t>{0, 2}));
}

TEST(PlanMerges, PreserveOutputBoundaries) {
  Notebook nb = code_notebook({"import numpy as np", "import pandas as pd", kLongConsumer});
  nb.cells[0].outputs = Json::array({Json{{"output_type", "stream"}, {"name", "stdout"}, {"text", "x"}}});
  EXPECT_EQ(plan_for(nb).groups.size(), 1u);
  MergeConfig cfg;
  cfg.preserve_output_boundaries = true;
  EXPECT_TRUE(plan_for(nb, cfg).groups.empty());
}

TEST(PlanMerges, BrokenAndCellMagicCellsAreBarriers) {
  const Notebook nb = code_notebook({"import numpy as np", "print 'x'", "import pandas as pd", "%%time\nimport os",
                                     "import sys", kLongConsumer});
  const MergePlan plan = plan_for(nb);
  EXPECT_TRUE(plan.groups.empty());
  ASSERT_EQ(plan.skipped.size(), 2u);
  EXPECT_EQ(plan.skipped[0].index, 1u);
  EXPECT_EQ(plan.skipped[0].reason, "parse-failed");
  EXPECT_EQ(plan.skipped[1].index, 3u);
  EXPECT_EQ(plan.skipped[1].reason, "cell-magic");
}

TEST(PlanMerges, InvalidConfigThrows) {
  MergeConfig cfg;
  cfg.max_merge_lines = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.max_ratio_change = -0.5;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(ApplyMerges, EmptyPlanIsIdentity) {
  const Notebook nb = code_notebook({"a = 1", "b = 2"});
  const auto [out, log] = apply_merges(nb, MergePlan{});
  EXPECT_EQ(out, nb);
  EXPECT_FALSE(log.changed());
}

TEST(ApplyMerges, JoinsSources) {
  const Notebook nb = code_notebook({"a = 1", "b = a"});
  MergePlan plan;
  plan.groups.push_back(MergeGroup{{0, 1}});
  const auto [out, log] = apply_merges(nb, plan);
  ASSERT_EQ(out.cells.size(), 1u);
  EXPECT_EQ(out.cells[0].source, "a = 1\nb = a");
  ASSERT_EQ(log.merges.size(), 1u);
  EXPECT_EQ(log.merges[0].before, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(log.merges[0].after, 0u);
}

TEST(ApplyMerges, OutputsAreConcatenated) {
  Notebook nb = code_notebook({"a = 1\n\n", "print(a)", "c = 3"});
  const Json out2 = Json::array({Json{{"output_type", "stream"}, {"name", "stdout"}, {"text", "1\n"}}});
  nb.cells[1].outputs = out2;
  nb.cells[1].execution_count = 7;
  nb.cells[0].cell_id = "first";
  MergePlan plan;
  plan.groups.push_back(MergeGroup{{0, 1}});
  const auto [out, log] = apply_merges(nb, plan);
  ASSERT_EQ(out.cells.size(), 2u);
  EXPECT_EQ(out.cells[0].source, "a = 1\nprint(a)");
  EXPECT_EQ(out.cells[0].outputs, out2);
  EXPECT_EQ(out.cells[0].execution_count, 7);
  EXPECT_EQ(out.cells[0].cell_id, "first");
  EXPECT_EQ(out.cells[1].source, "c = 3");
  EXPECT_EQ(log.counters.cells_before, 3u);
  EXPECT_EQ(log.counters.cells_after, 2u);
}

TEST(ApplyMerges, StalePlanIsRejected) {
  const Notebook nb = code_notebook({"a = 1", "b = 2"});
  MergePlan plan;
  plan.groups.push_back(MergeGroup{{0, 2}});
  EXPECT_THROW(apply_merges(nb, plan), StalePlan);
  plan.groups = {MergeGroup{{1, 0}}};
  EXPECT_THROW(apply_merges(nb, plan), StalePlan);
  const Notebook three = code_notebook({"a = 1", "b = 2", "c = 3"});
  plan.groups = {MergeGroup{{0, 2}}};
  EXPECT_THROW(apply_merges(three, plan), StalePlan);
  EXPECT_THROW(apply_merges(nb, plan), StalePlan);
  Notebook with_md = nb;
  with_md.cells.insert(with_md.cells.begin() + 1, Cell::markdown("m"));
  plan.groups = {MergeGroup{{0, 1}}};
  EXPECT_THROW(apply_merges(with_md, plan), StalePlan);
}

}  // namespace
}  // namespace resplit
