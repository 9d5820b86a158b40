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

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace resplit::text {

inline bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

/// Splits on '\n'. A trailing newline yields a final empty line, so
/// joining the result with '\n' reproduces the input exactly.
inline std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (;;) {
    const std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(s.substr(start));
      return lines;
    }
    lines.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
}

template <typename Range>
std::string join_lines(const Range& lines) {
  std::string out;
  bool first = true;
  for (const auto& line : lines) {
    if (!first) out += '\n';
    out.append(line.data(), line.size());
    first = false;
  }
  return out;
}

/// Removes trailing lines that are empty or whitespace-only, along with the
/// newline that precedes them.
inline std::string_view strip_trailing_blank_lines(std::string_view s) {
  auto lines = split_lines(s);
  while (!lines.empty() && is_blank(lines.back())) lines.pop_back();
  if (lines.empty()) return s.substr(0, 0);
  const auto& last = lines.back();
  return s.substr(0, static_cast<std::size_t>(last.data() - s.data()) + last.size());
}

inline std::string_view trim_left(std::string_view s) {
  const auto pos = s.find_first_not_of(" \t\f\v\r");
  return pos == std::string_view::npos ? s.substr(s.size()) : s.substr(pos);
}

}  // namespace resplit::text
