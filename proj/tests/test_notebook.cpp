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

#include <filesystem>
#include <string>

#include "resplit/notebook.hpp"

namespace resplit {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = RESPLIT_FIXTURE_DIR;

TEST(Notebook, ParsesStringAndListSources) {
  const Notebook nb = parse_notebook(R"({
    "nbformat": 4, "nbformat_minor": 2, "metadata": {},
    "cells": [
      {"cell_type": "code", "source": ["a = 1\n", "b = 2"], "metadata": {}, "outputs": [], "execution_count": 3},
      {"cell_type": "markdown", "source": "# hi", "metadata": {}}
    ]})");
  ASSERT_EQ(nb.cells.size(), 2u);
  EXPECT_EQ(nb.cells[0].source, "a = 1\nb = 2");
  EXPECT_EQ(nb.cells[0].execution_count, 3);
  EXPECT_EQ(nb.cells[1].kind, CellKind::Markdown);
  EXPECT_EQ(nb.format_minor, 2);
  EXPECT_EQ(nb.code_cell_count(), 1u);
}

TEST(Notebook, RejectsMalformedInput) {
  EXPECT_THROW(parse_notebook("{not json"), MalformedJson);
  EXPECT_THROW(parse_notebook("[]"), MalformedJson);
  EXPECT_THROW(parse_notebook(R"({"nbformat": 4, "nbformat_minor": 5, "metadata": {}})"), MalformedJson);
  EXPECT_THROW(parse_notebook(R"({"nbformat": 4, "nbformat_minor": 5, "cells": [{"source": "x"}]})"),
               MalformedJson);
  EXPECT_THROW(parse_notebook(R"({"nbformat": 3, "nbformat_minor": 0, "worksheets": []})"), UnsupportedFormat);
}

TEST(Notebook, KeepsUnknownKeys) {
  const std::string text = R"({
    "nbformat": 4, "nbformat_minor": 5, "metadata": {"custom": [1, 2]}, "x-extra": true,
    "cells": [{"cell_type": "markdown", "id": "m", "source": "", "metadata": {},
               "attachments": {"a.png": {"image/png": "AAAA"}}}]})";
  const Notebook nb = parse_notebook(text);
  const Notebook again = parse_notebook(serialize_notebook(nb));
  EXPECT_EQ(nb, again);
  EXPECT_TRUE(again.extra.contains("x-extra"));
  EXPECT_TRUE(again.cells[0].extra.contains("attachments"));
  EXPECT_EQ(again.cells[0].cell_id, "m");
}

TEST(Notebook, FixturesRoundTrip) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(kFixtures)) {
    if (entry.path().extension() != ".ipynb") continue;
    SCOPED_TRACE(entry.path().string());
    const Notebook nb = load_notebook(entry.path());
    const std::string text = serialize_notebook(nb);
    EXPECT_EQ(parse_notebook(text), nb);
    EXPECT_EQ(serialize_notebook(parse_notebook(text)), text);
    ++seen;
  }
  EXPECT_GE(seen, 5u);
}

TEST(Notebook, SerializationMatchesJupyterLayout) {
  // Fixtures were written with one-space indentation and sorted keys.
  const fs::path path = kFixtures / "mixed.ipynb";
  EXPECT_EQ(serialize_notebook(load_notebook(path)), read_file(path));
}

TEST(Notebook, LineCount) {
  EXPECT_EQ(line_count(""), 0u);
  EXPECT_EQ(line_count("a"), 1u);
  EXPECT_EQ(line_count("a\nb"), 2u);
  EXPECT_EQ(line_count("a\nb\n"), 2u);
}

TEST(Notebook, AtomicWriteReplacesFile) {
  const fs::path path = fs::temp_directory_path() / "resplit_atomic_test.txt";
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  EXPECT_EQ(read_file(path), "two");
  fs::remove(path);
  EXPECT_THROW(read_file(path), Error);
}

}  // namespace
}  // namespace resplit
