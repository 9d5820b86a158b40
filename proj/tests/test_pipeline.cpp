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

#include <string>

#include "resplit/resplit.hpp"
#include "support/synth.hpp"

namespace resplit {
namespace {

using testing::code_notebook;

TEST(Config, JsonOverlayKeepsUnsetValues) {
  AnalysisConfig cfg;
  apply_config_json(Json::parse(R"({"merge": {"max_ratio_change": 0.25}, "order": "split-merge"})"), cfg);
  EXPECT_DOUBLE_EQ(cfg.merge.max_ratio_change, 0.25);
  EXPECT_EQ(cfg.merge.max_merge_lines, 5u);
  EXPECT_EQ(cfg.split.min_split_lines, 3u);
  EXPECT_EQ(cfg.order, Order::SplitMerge);
}

TEST(Config, RejectsBadValues) {
  AnalysisConfig cfg;
  EXPECT_THROW(apply_config_json(Json::parse(R"({"merge": {"max_ratio_change": 2}})"), cfg), Error);
  EXPECT_THROW(apply_config_json(Json::parse(R"({"merge": {"max_merge_lines": "five"}})"), cfg), Error);
  EXPECT_THROW(apply_config_json(Json::parse(R"({"order": "sideways"})"), cfg), Error);
  EXPECT_THROW(apply_config_json(Json::parse("[]"), cfg), Error);
}

TEST(Config, HashIsStableAndSensitive) {
  AnalysisConfig a, b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.split.min_split_lines = 4;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(RunTransform, NoneIsIdentity) {
  const Notebook nb = load_notebook(std::string(RESPLIT_FIXTURE_DIR) + "/mixed.ipynb");
  const TransformResult r = run_transform(nb, Transform::None, {});
  EXPECT_EQ(r.notebook, nb);
  EXPECT_EQ(r.log.counters.cells_before, r.log.counters.cells_after);
  EXPECT_FALSE(r.log.changed());
}

TEST(RunTransform, BothMergesThenSplits) {
  const Notebook nb = code_notebook(
      {"import numpy as np", "import pandas as pd", "a = np.zeros(3)\nb = pd.Series(a)\nprint(b)\nc = 1\nd = c\nprint(d)"});
  const TransformResult r = run_transform(nb, Transform::Both, {});
  ASSERT_EQ(r.log.merges.size(), 1u);
  ASSERT_EQ(r.log.splits.size(), 1u);
  EXPECT_EQ(r.log.splits[0].before, 1u);  // index in the merged notebook
  EXPECT_EQ(r.notebook.cells.size(), 3u);
  EXPECT_EQ(r.log.order, "merge-split");
  EXPECT_EQ(r.log.counters.code_cells_before, 3u);
  EXPECT_EQ(r.log.counters.code_cells_after, 3u);
}

TEST(RunTransform, SplitMergeOrder) {
  AnalysisConfig cfg;
  cfg.order = Order::SplitMerge;
  const Notebook nb = code_notebook({"a = 1\nb = 2\nc = 3\nd = 4\ne = 5\nf = 6"});
  const TransformResult r = run_transform(nb, Transform::Both, cfg);
  EXPECT_EQ(r.log.order, "split-merge");
  EXPECT_EQ(r.log.splits.size(), 1u);
}

TEST(RunTransform, SkippedCellsAreLogged) {
  const Notebook nb = code_notebook({"print 'x'", "%%bash\nls"});
  const TransformResult r = run_transform(nb, Transform::Split, {});
  ASSERT_EQ(r.log.skipped_cells.size(), 2u);
  EXPECT_EQ(r.log.skipped_cells[0].reason, "parse-failed");
  EXPECT_EQ(r.log.skipped_cells[1].reason, "cell-magic");
}

TEST(Marker, MarksOnlyOnRequest) {
  Notebook nb = code_notebook({"a = 1"});
  EXPECT_FALSE(is_marked(nb));
  mark_transformed(nb, {});
  EXPECT_TRUE(is_marked(nb));
  EXPECT_EQ(nb.metadata[kMarkerKey]["config_hash"], config_hash({}));
  EXPECT_EQ(nb.metadata[kMarkerKey]["version"], kVersion);
}

TEST(TransformLog, JsonSchema) {
  const Notebook nb = code_notebook({"import os", "import sys", "print(os, sys)\nx = 1\ny = 2\nz = 3\nw = 4"});
  TransformResult r = run_transform(nb, Transform::Both, {});
  r.log.input_path = "nb.ipynb";
  const Json j = to_json(r.log);
  for (const char* key : {"input_path", "tool_version", "config", "merges", "splits", "counters", "skipped_cells"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  ASSERT_FALSE(j["merges"].empty());
  EXPECT_TRUE(j["merges"][0].contains("cell_range_before"));
  EXPECT_TRUE(j["merges"][0].contains("cell_index_after"));
  EXPECT_EQ(j["counters"]["cells_after"], r.notebook.cells.size());
  EXPECT_EQ(j["counters"]["lines_after"], code_line_total(r.notebook));
}

}  // namespace
}  // namespace resplit
