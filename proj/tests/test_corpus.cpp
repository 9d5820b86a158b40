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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "resplit/resplit.hpp"
#include "support/synth.hpp"

namespace resplit {
namespace {

using testing::code_notebook;

TEST(DataScienceFilter, LibraryImports) {
  EXPECT_TRUE(is_data_science(code_notebook({"from sklearn import svm"})));
  EXPECT_TRUE(is_data_science(code_notebook({"import torch.nn as nn"})));
  EXPECT_TRUE(is_data_science(code_notebook({"import os, tensorflow as tf"})));
  EXPECT_TRUE(is_data_science(code_notebook({"def f():\n    import nltk\n"})));
  EXPECT_FALSE(is_data_science(code_notebook({"import os"})));
  EXPECT_FALSE(is_data_science(code_notebook({"import sklearnish", "x = 'import torch'"})));
}

TEST(DataScienceFilter, FallbackScanForBrokenCells) {
  EXPECT_TRUE(is_data_science(code_notebook({"%time from sklearn import svm\nprint 'legacy'"})));
  EXPECT_TRUE(is_data_science(code_notebook({"print 'x'\nimport os, spacy"})));
  EXPECT_FALSE(is_data_science(code_notebook({"print 'x'\nimport os"})));
}

TEST(DataScienceFilter, MarkdownIsIgnored) {
  Notebook nb;
  nb.cells.push_back(Cell::markdown("import torch"));
  EXPECT_FALSE(is_data_science(nb));
}

TokenBag bag_of(const std::string& id, const std::string& src) {
  return make_token_bag(id, code_notebook({src}));
}

TEST(Similarity, Basics) {
  const TokenBag a = bag_of("a", "x = f(y)");
  EXPECT_DOUBLE_EQ(similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(similarity(bag_of("p", "alpha"), bag_of("q", "beta")), 0.0);
  EXPECT_DOUBLE_EQ(similarity(TokenBag{}, TokenBag{}), 1.0);
}

TEST(Similarity, BoundaryCountsAsClone) {
  const TokenBag four = bag_of("a", "x = y +");
  const TokenBag five = bag_of("b", "x = y + z");
  EXPECT_EQ(four.size, 4u);
  EXPECT_EQ(five.size, 5u);
  EXPECT_DOUBLE_EQ(similarity(four, five), 0.8);
  EXPECT_TRUE(is_clone(four, five, 0.8));
  const DedupResult r = dedup({four, five}, 0.8);
  EXPECT_EQ(r.kept, (std::vector<std::string>{"a"}));
}

TEST(Similarity, IgnoresCommentsAndLayout) {
  EXPECT_DOUBLE_EQ(similarity(bag_of("a", "x = 1  # note\n\n"), bag_of("b", "x=1")), 1.0);
}

TEST(Dedup, IdenticalNotebooksCollapse) {
  const std::vector<TokenBag> bags = {bag_of("c", "a = b + 1"), bag_of("a", "a = b + 1"), bag_of("b", "a = b + 1")};
  const DedupResult r = dedup(bags);
  EXPECT_EQ(r.kept, (std::vector<std::string>{"a"}));
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters[0], (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Dedup, DistinctNotebooksAreAllKept) {
  const std::vector<TokenBag> bags = {bag_of("a", "x = 1"), bag_of("b", "import os\nos.getcwd()"),
                                      bag_of("c", "for i in range(3): print(i)")};
  const DedupResult r = dedup(bags);
  EXPECT_EQ(r.kept.size(), 3u);
  EXPECT_TRUE(r.clusters.empty());
}

TEST(Dedup, EmptyBagsClusterTogether) {
  Notebook empty;
  const std::vector<TokenBag> bags = {make_token_bag("e1", empty), make_token_bag("e2", empty), bag_of("x", "x")};
  EXPECT_EQ(dedup(bags).clusters, dedup(bags, 0.8, true).clusters);
  EXPECT_EQ(dedup(bags).clusters.size(), 1u);
}

TEST(Dedup, PrefixFilterMatchesExhaustive) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto bags = testing::planted_clone_bags(seed, 120);
    for (double t : {0.5, 0.8, 0.95, 1.0}) {
      const DedupResult fast = dedup(bags, t);
      const DedupResult slow = dedup(bags, t, true);
      EXPECT_EQ(fast.clusters, slow.clusters) << "seed " << seed << " t " << t;
      EXPECT_EQ(fast.kept, slow.kept);
    }
  }
}

TEST(Dedup, IndependentOfInputOrder) {
  auto bags = testing::planted_clone_bags(7, 80);
  const DedupResult ref = dedup(bags);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 3; ++i) {
    std::shuffle(bags.begin(), bags.end(), rng);
    const DedupResult r = dedup(bags);
    EXPECT_EQ(r.kept, ref.kept);
    EXPECT_EQ(r.clusters, ref.clusters);
  }
}

TEST(CorpusStats, MeansOverCodeCells) {
  Notebook nb = code_notebook({"a = 1\nb = 2", "c = 1\nd = 2\ne = 3\nf = 4"});
  nb.cells.push_back(Cell::markdown("# notes\nmore"));
  const CorpusStats s = corpus_stats({nb}, Transform::None, {});
  EXPECT_DOUBLE_EQ(s.mean_cell_length, 3.0);
  EXPECT_DOUBLE_EQ(s.mean_cells_per_notebook, 2.0);
  StatsOptions opt;
  opt.include_markdown_in_counts = true;
  const CorpusStats with_md = corpus_stats({nb}, Transform::None, {}, opt);
  EXPECT_DOUBLE_EQ(with_md.mean_cells_per_notebook, 3.0);
}

TEST(CorpusStats, HistogramBinsAndFilters) {
  // cell 0: r = 1 (import used later); cell 1: r = 0.5; cell 2: r = 1; cell 3: no links.
  const Notebook nb = code_notebook({"import os", "a = 1\nb = a", "print(b, os)", "z = 3"});
  const CorpusStats s = corpus_stats({nb}, Transform::None, {});
  ASSERT_EQ(s.ratio_histogram.size(), 20u);
  EXPECT_EQ(s.histogram_cells, 3u);
  EXPECT_EQ(s.ratio_histogram[19], 2u);
  EXPECT_EQ(s.ratio_histogram[10], 1u);
  StatsOptions opt;
  opt.include_zero_link = true;
  EXPECT_EQ(corpus_stats({nb}, Transform::None, {}, opt).ratio_histogram[0], 1u);
}

TEST(CorpusStats, RatioBinEdges) {
  EXPECT_EQ(ratio_bin(0.0, 20), 0u);
  EXPECT_EQ(ratio_bin(0.049, 20), 0u);
  EXPECT_EQ(ratio_bin(0.05, 20), 1u);
  EXPECT_EQ(ratio_bin(0.95, 20), 19u);
  EXPECT_EQ(ratio_bin(1.0, 20), 19u);
}

TEST(CorpusStats, TransformDirections) {
  const auto corpus = testing::CorpusGenerator(5).corpus(60);
  const CorpusStats none = corpus_stats(corpus, Transform::None, {});
  const CorpusStats merge = corpus_stats(corpus, Transform::Merge, {});
  const CorpusStats split = corpus_stats(corpus, Transform::Split, {});
  EXPECT_LE(merge.mean_cells_per_notebook, none.mean_cells_per_notebook);
  EXPECT_LE(none.mean_cells_per_notebook, split.mean_cells_per_notebook);
  EXPECT_LE(split.mean_cell_length, none.mean_cell_length);
  EXPECT_LE(none.mean_cell_length, merge.mean_cell_length);
}

TEST(CorpusStats, DoesNotMutateInput) {
  const auto corpus = testing::CorpusGenerator(9).corpus(20);
  const auto copy = corpus;
  const CorpusStats before = corpus_stats(corpus, Transform::None, {});
  corpus_stats(corpus, Transform::Both, {});
  const CorpusStats after = corpus_stats(corpus, Transform::None, {});
  EXPECT_EQ(corpus, copy);
  EXPECT_EQ(before.ratio_histogram, after.ratio_histogram);
  EXPECT_DOUBLE_EQ(before.mean_cell_length, after.mean_cell_length);
}

TEST(CorpusStats, HistogramCsv) {
  const std::string csv = histogram_csv({1, 0, 2, 5});
  EXPECT_EQ(csv, "bin_lo,bin_hi,count\n0,0.25,1\n0.25,0.5,0\n0.5,0.75,2\n0.75,1,5\n");
}

}  // namespace
}  // namespace resplit
