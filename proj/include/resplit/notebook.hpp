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

// In-memory model of an nbformat-4 notebook. Parsing and serialization are
// lossless at the JSON-value level: keys the model does not interpret are kept
// in `extra` and written back unchanged.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "resplit/error.hpp"
#include "resplit/text.hpp"

namespace resplit {

using Json = nlohmann::json;

enum class CellKind { Code, Markdown, Raw };

inline std::string_view to_string(CellKind kind) {
  switch (kind) {
    case CellKind::Code: return "code";
    case CellKind::Markdown: return "markdown";
    case CellKind::Raw: return "raw";
  }
  return "code";
}

struct Cell {
  CellKind kind = CellKind::Code;
  std::string source;
  Json outputs = Json::array();  // always empty unless kind == Code
  std::optional<std::int64_t> execution_count;
  Json metadata = Json::object();
  std::optional<std::string> cell_id;
  Json extra = Json::object();

  bool is_code() const { return kind == CellKind::Code; }
  bool has_outputs() const { return !outputs.empty(); }

  friend bool operator==(const Cell& a, const Cell& b) {
    return a.kind == b.kind && a.source == b.source && a.outputs == b.outputs &&
           a.execution_count == b.execution_count && a.metadata == b.metadata &&
           a.cell_id == b.cell_id && a.extra == b.extra;
  }
  friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }

  static Cell code(std::string src) {
    Cell c;
    c.source = std::move(src);
    return c;
  }
  static Cell markdown(std::string src) {
    Cell c;
    c.kind = CellKind::Markdown;
    c.source = std::move(src);
    return c;
  }
};

struct Notebook {
  std::vector<Cell> cells;
  int format_major = 4;
  int format_minor = 5;
  Json metadata = Json::object();
  Json extra = Json::object();

  friend bool operator==(const Notebook& a, const Notebook& b) {
    return a.cells == b.cells && a.format_major == b.format_major &&
           a.format_minor == b.format_minor && a.metadata == b.metadata &&
           a.extra == b.extra;
  }
  friend bool operator!=(const Notebook& a, const Notebook& b) { return !(a == b); }

  std::size_t code_cell_count() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.is_code() ? 1 : 0;
    return n;
  }
};

/// Physical lines of the cell source, ignoring trailing empty or
/// whitespace-only lines. Comments and interior blank lines count.
inline std::size_t line_count(std::string_view source) {
  auto lines = text::split_lines(source);
  while (!lines.empty() && text::is_blank(lines.back())) lines.pop_back();
  return lines.size();
}

inline std::size_t line_count(const Cell& cell) { return line_count(cell.source); }

namespace detail {

inline std::string source_from_json(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string out;
    for (const auto& piece : value) {
      if (!piece.is_string()) throw MalformedJson("cell source list must contain only strings");
      out += piece.get_ref<const std::string&>();
    }
    return out;
  }
  throw MalformedJson("cell source must be a string or a list of strings");
}

/// nbformat list-of-lines form: every element but the last keeps its '\n'.
inline Json source_to_json(std::string_view source) {
  Json lines = Json::array();
  std::size_t start = 0;
  while (start < source.size()) {
    const std::size_t nl = source.find('\n', start);
    const std::size_t end = nl == std::string_view::npos ? source.size() : nl + 1;
    lines.push_back(std::string(source.substr(start, end - start)));
    start = end;
  }
  return lines;
}

inline CellKind cell_kind_from(const std::string& name) {
  if (name == "code") return CellKind::Code;
  if (name == "markdown") return CellKind::Markdown;
  if (name == "raw") return CellKind::Raw;
  throw MalformedJson("unknown cell_type '" + name + "'");
}

inline Cell cell_from_json(const Json& obj, std::size_t index) {
  if (!obj.is_object()) {
    throw MalformedJson("cell " + std::to_string(index) + " is not a JSON object");
  }
  auto type = obj.find("cell_type");
  if (type == obj.end() || !type->is_string()) {
    throw MalformedJson("cell " + std::to_string(index) + " has no cell_type");
  }
  Cell cell;
  cell.kind = cell_kind_from(type->get<std::string>());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    const Json& value = it.value();
    if (key == "cell_type") continue;
    if (key == "source") {
      cell.source = source_from_json(value);
    } else if (key == "metadata" && value.is_object()) {
      cell.metadata = value;
    } else if (key == "id" && value.is_string()) {
      cell.cell_id = value.get<std::string>();
    } else if (cell.is_code() && key == "outputs" && value.is_array()) {
      cell.outputs = value;
    } else if (cell.is_code() && key == "execution_count" &&
               (value.is_null() || value.is_number_integer())) {
      if (!value.is_null()) cell.execution_count = value.get<std::int64_t>();
    } else {
      cell.extra[key] = value;
    }
  }
  return cell;
}

inline Json cell_to_json(const Cell& cell) {
  Json obj = cell.extra.is_object() ? cell.extra : Json::object();
  obj["cell_type"] = std::string(to_string(cell.kind));
  obj["metadata"] = cell.metadata;
  obj["source"] = source_to_json(cell.source);
  if (cell.cell_id) obj["id"] = *cell.cell_id;
  if (cell.is_code()) {
    obj["outputs"] = cell.outputs;
    obj["execution_count"] =
        cell.execution_count ? Json(*cell.execution_count) : Json(nullptr);
  }
  return obj;
}

}  // namespace detail

inline Notebook parse_notebook(std::string_view bytes) {
  Json doc = Json::parse(bytes, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw MalformedJson("notebook is not valid JSON");
  if (!doc.is_object()) throw MalformedJson("notebook root must be a JSON object");

  auto major = doc.find("nbformat");
  if (major == doc.end() || !major->is_number_integer()) {
    throw MalformedJson("notebook has no integer 'nbformat' field");
  }
  Notebook nb;
  nb.format_major = major->get<int>();
  if (nb.format_major != 4) {
    throw UnsupportedFormat("nbformat " + std::to_string(nb.format_major) +
                            " is not supported; only nbformat 4 notebooks can be read");
  }
  auto cells = doc.find("cells");
  if (cells == doc.end() || !cells->is_array()) {
    throw MalformedJson("notebook has no 'cells' list");
  }
  nb.cells.reserve(cells->size());
  for (std::size_t i = 0; i < cells->size(); ++i) {
    nb.cells.push_back(detail::cell_from_json((*cells)[i], i));
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "nbformat" || key == "cells") continue;
    if (key == "nbformat_minor" && it->is_number_integer()) {
      nb.format_minor = it->get<int>();
    } else if (key == "metadata" && it->is_object()) {
      nb.metadata = *it;
    } else {
      nb.extra[key] = *it;
    }
  }
  return nb;
}

inline Json notebook_to_json(const Notebook& nb) {
  Json doc = nb.extra.is_object() ? nb.extra : Json::object();
  doc["nbformat"] = nb.format_major;
  doc["nbformat_minor"] = nb.format_minor;
  doc["metadata"] = nb.metadata;
  Json cells = Json::array();
  for (const auto& cell : nb.cells) cells.push_back(detail::cell_to_json(cell));
  doc["cells"] = std::move(cells);
  return doc;
}

/// Writes the document the way Jupyter does: sorted keys, one-space indent,
/// trailing newline.
inline std::string serialize_notebook(const Notebook& nb) {
  return notebook_to_json(nb).dump(1, ' ', false, Json::error_handler_t::replace) + "\n";
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("failed reading '" + path.string() + "'");
  return std::move(buf).str();
}

/// Writes through a sibling temp file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp~";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path.string() + "'");
  }
}

inline Notebook load_notebook(const std::filesystem::path& path) {
  return parse_notebook(read_file(path));
}

inline void save_notebook(const std::filesystem::path& path, const Notebook& nb) {
  write_file_atomic(path, serialize_notebook(nb));
}

}  // namespace resplit
