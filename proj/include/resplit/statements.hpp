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

// Splits a code cell into top-level statements and attaches the module-level
// names each one defines and uses.

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "resplit/pyparse.hpp"
#include "resplit/pyscope.hpp"
#include "resplit/text.hpp"

namespace resplit {

using py::NameEvent;
using py::NameKind;

/// 1-based inclusive line range within a cell.
struct LineSpan {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  friend bool operator==(const LineSpan&, const LineSpan&) = default;
};

struct Statement {
  std::size_t index_in_cell = 0;
  // Includes comment lines directly above the statement; the cell's last
  // statement also absorbs trailing comments.
  LineSpan line_span;
  std::set<std::string> defs;
  std::set<std::string> uses;
  bool opaque = false;
  std::vector<std::string> imports;  // root packages, in import order

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct ParsedCell {
  std::size_t cell_index = 0;
  std::vector<Statement> statements;
  bool parse_failed = false;
  std::string error;  // parser diagnostic when parse_failed
  bool cell_magic = false;  // first line is a `%%` cell magic

  friend bool operator==(const ParsedCell&, const ParsedCell&) = default;
};

namespace detail {

inline bool all_opaque(const py::TopLevel& top) {
  for (const auto& s : top.stmts) {
    if (!std::holds_alternative<py::Opaque>(s.node)) return false;
  }
  return !top.stmts.empty();
}

}  // namespace detail

inline ParsedCell parse_cell(std::string_view source, std::size_t cell_index = 0) {
  ParsedCell cell;
  cell.cell_index = cell_index;
  std::vector<py::TopLevel> tops;
  try {
    tops = py::parse_module(source);
  } catch (const py::SyntaxError& e) {
    cell.parse_failed = true;
    cell.error = e.what();
    return cell;
  }

  const auto lines = text::split_lines(source);
  auto blank = [&](int line) { return text::is_blank(lines[static_cast<std::size_t>(line - 1)]); };

  py::NameAnalyzer analyzer;
  int prev_last = 0;
  for (const py::TopLevel& top : tops) {
    Statement stmt;
    stmt.index_in_cell = cell.statements.size();
    int first = prev_last + 1;
    while (first < top.first_line && blank(first)) ++first;
    stmt.line_span = LineSpan{first, top.last_line};
    stmt.opaque = detail::all_opaque(top);
    if (!stmt.opaque) {
      py::StatementEvents ev = analyzer.analyze(top.stmts);
      stmt.defs = std::move(ev.defs);
      stmt.uses = std::move(ev.uses);
      stmt.imports = std::move(ev.imports);
    }
    prev_last = top.last_line;
    cell.statements.push_back(std::move(stmt));
  }
  if (!cell.statements.empty()) {
    int last = static_cast<int>(lines.size());
    while (last > prev_last && blank(last)) --last;
    cell.statements.back().line_span.last = last;

    const auto& first_top = tops.front();
    if (detail::all_opaque(first_top)) {
      const auto& op = std::get<py::Opaque>(first_top.stmts.front().node);
      cell.cell_magic = text::trim_left(op.text).substr(0, 2) == "%%";
    }
  }
  return cell;
}

}  // namespace resplit
