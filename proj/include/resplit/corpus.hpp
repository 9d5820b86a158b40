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

// Corpus utilities: data-science filtering, token-bag clone deduplication and
// aggregate cell statistics before and after transformation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "resplit/analysis.hpp"
#include "resplit/metrics.hpp"
#include "resplit/notebook.hpp"
#include "resplit/parallel.hpp"
#include "resplit/pipeline.hpp"
#include "resplit/pylex.hpp"

namespace resplit {

// --- data-science filter ------------------------------------------------------

inline bool is_data_science_package(std::string_view root) {
  static constexpr std::string_view kPackages[] = {"sklearn", "torch",  "pytorch",
                                                   "tensorflow", "spacy", "nltk"};
  return std::find(std::begin(kPackages), std::end(kPackages), root) != std::end(kPackages);
}

/// Line-oriented import scan for cells the parser rejects.
inline bool scan_imports_for_data_science(std::string_view source) {
  static const std::regex from_re(R"(^\s*from\s+([A-Za-z_]\w*))");
  static const std::regex import_re(R"(^\s*import\s+(.+)$)");
  static const std::regex module_re(R"(^\s*([A-Za-z_]\w*))");
  for (std::string_view line : text::split_lines(source)) {
    // Magic prefixes such as `%time import torch` hide an import too.
    std::string s(line);
    static const std::regex magic_re(R"(^\s*[%!?]+\w*\s+)");
    s = std::regex_replace(s, magic_re, "", std::regex_constants::format_first_only);
    std::smatch m;
    if (std::regex_search(s, m, from_re) && is_data_science_package(m[1].str())) return true;
    if (std::regex_search(s, m, import_re)) {
      std::string list = m[1].str();
      std::size_t start = 0;
      while (start <= list.size()) {
        std::size_t comma = list.find(',', start);
        if (comma == std::string::npos) comma = list.size();
        const std::string item = list.substr(start, comma - start);
        std::smatch mm;
        if (std::regex_search(item, mm, module_re) && is_data_science_package(mm[1].str())) {
          return true;
        }
        start = comma + 1;
      }
    }
  }
  return false;
}

inline bool is_data_science(const Notebook& nb) {
  for (const Cell& cell : nb.cells) {
    if (!cell.is_code()) continue;
    const ParsedCell parsed = parse_cell(cell.source);
    if (parsed.parse_failed) {
      if (scan_imports_for_data_science(cell.source)) return true;
      continue;
    }
    for (const Statement& stmt : parsed.statements) {
      for (const std::string& root : stmt.imports) {
        if (is_data_science_package(root)) return true;
      }
    }
  }
  return false;
}

// --- clone detection ------------------------------------------------------------

struct TokenBag {
  std::string notebook_id;
  std::map<std::string, std::size_t> counts;  // token text -> multiplicity
  std::size_t size = 0;

  void add(std::string token) {
    ++counts[std::move(token)];
    ++size;
  }
  friend bool operator==(const TokenBag& a, const TokenBag& b) {
    return a.counts == b.counts;
  }
};

/// Lexical tokens of every code cell: names, keywords, literals, operators
/// and magic lines. Comments and layout are dropped. Never fails.
inline TokenBag make_token_bag(std::string id, const Notebook& nb) {
  TokenBag bag;
  bag.notebook_id = std::move(id);
  for (const Cell& cell : nb.cells) {
    if (!cell.is_code()) continue;
    for (py::Token& t : py::tokenize(cell.source, /*lenient=*/true)) {
      switch (t.kind) {
        case py::Tok::Name:
        case py::Tok::Number:
        case py::Tok::String:
        case py::Tok::Op:
        case py::Tok::Opaque:
          bag.add(std::move(t.text));
          break;
        default:
          break;
      }
    }
  }
  return bag;
}

inline std::size_t overlap(const TokenBag& a, const TokenBag& b) {
  const TokenBag& small = a.counts.size() <= b.counts.size() ? a : b;
  const TokenBag& large = &small == &a ? b : a;
  std::size_t n = 0;
  for (const auto& [token, count] : small.counts) {
    auto it = large.counts.find(token);
    if (it != large.counts.end()) n += std::min(count, it->second);
  }
  return n;
}

/// |A ∩ B| / max(|A|, |B|) over multisets; 1 when both are empty.
inline double similarity(const TokenBag& a, const TokenBag& b) {
  const std::size_t denom = std::max(a.size, b.size);
  if (denom == 0) return 1.0;
  return static_cast<double>(overlap(a, b)) / static_cast<double>(denom);
}

inline constexpr double kSimilarityTolerance = 1e-12;

inline bool is_clone(const TokenBag& a, const TokenBag& b, double threshold) {
  return similarity(a, b) >= threshold - kSimilarityTolerance;
}

struct DedupResult {
  std::vector<std::string> kept;                  // sorted
  std::vector<std::vector<std::string>> clusters;  // clone clusters of size >= 2, sorted
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

inline DedupResult clusters_from(const std::vector<TokenBag>& bags, DisjointSets& sets) {
  std::map<std::size_t, std::vector<std::string>> by_root;
  for (std::size_t i = 0; i < bags.size(); ++i) by_root[sets.find(i)].push_back(bags[i].notebook_id);
  DedupResult out;
  for (auto& [root, ids] : by_root) {
    std::sort(ids.begin(), ids.end());
    out.kept.push_back(ids.front());
    if (ids.size() >= 2) out.clusters.push_back(std::move(ids));
  }
  std::sort(out.kept.begin(), out.kept.end());
  std::sort(out.clusters.begin(), out.clusters.end());
  return out;
}

// Pairs (i, j), i < j, that may reach the threshold. Each multiset becomes a
// set of (token, occurrence) elements ordered rarest first; two bags with
// overlap >= ceil(t * |A|) must share an element of their prefixes of
// length |A| - ceil(t * |A|) + 1.
inline std::vector<std::pair<std::size_t, std::size_t>> prefix_candidates(
    const std::vector<TokenBag>& bags, double threshold) {
  std::map<std::pair<std::string, std::size_t>, std::size_t> element_id;
  std::vector<std::vector<std::size_t>> elements(bags.size());
  std::vector<std::size_t> frequency;
  for (std::size_t b = 0; b < bags.size(); ++b) {
    for (const auto& [token, count] : bags[b].counts) {
      for (std::size_t k = 1; k <= count; ++k) {
        auto [it, fresh] = element_id.try_emplace({token, k}, frequency.size());
        if (fresh) frequency.push_back(0);
        ++frequency[it->second];
        elements[b].push_back(it->second);
      }
    }
  }
  auto rarer = [&](std::size_t x, std::size_t y) {
    return frequency[x] != frequency[y] ? frequency[x] < frequency[y] : x < y;
  };

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> empties;
  std::unordered_map<std::size_t, std::vector<std::size_t>> index;
  for (std::size_t b = 0; b < bags.size(); ++b) {
    auto& elems = elements[b];
    const std::size_t n = elems.size();
    if (n == 0) {
      for (std::size_t e : empties) pairs.emplace_back(e, b);
      empties.push_back(b);
      continue;
    }
    std::sort(elems.begin(), elems.end(), rarer);
    const auto required = static_cast<std::size_t>(
        std::max(1.0, std::ceil(threshold * static_cast<double>(n) - 1e-9)));
    const std::size_t prefix = n - std::min(required, n) + 1;
    std::set<std::size_t> partners;
    for (std::size_t p = 0; p < prefix; ++p) {
      auto& posting = index[elems[p]];
      for (std::size_t other : posting) partners.insert(other);
      posting.push_back(b);
    }
    for (std::size_t other : partners) pairs.emplace_back(other, b);
  }
  return pairs;
}

}  // namespace detail

/// Clone clusters are the transitive closure of pairs with similarity at or
/// above `threshold`; each cluster keeps its lexicographically smallest id.
inline DedupResult dedup(const std::vector<TokenBag>& bags, double threshold = 0.8,
                         bool exhaustive = false) {
  detail::DisjointSets sets(bags.size());
  if (exhaustive || threshold <= 0.0) {
    for (std::size_t i = 0; i < bags.size(); ++i) {
      for (std::size_t j = i + 1; j < bags.size(); ++j) {
        if (is_clone(bags[i], bags[j], threshold)) sets.unite(i, j);
      }
    }
    return detail::clusters_from(bags, sets);
  }
  const auto pairs = detail::prefix_candidates(bags, threshold);
  std::vector<char> clone(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t p) {
    clone[p] = is_clone(bags[pairs[p].first], bags[pairs[p].second], threshold) ? 1 : 0;
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (clone[p]) sets.unite(pairs[p].first, pairs[p].second);
  }
  return detail::clusters_from(bags, sets);
}

// --- aggregate statistics ------------------------------------------------------

struct StatsOptions {
  std::size_t bins = 20;
  bool include_markdown_in_counts = false;
  bool include_zero_link = false;   // histogram: keep cells without links
  bool all_lengths = false;         // histogram: ignore the merge size filter
  std::size_t workers = 0;
};

struct CorpusStats {
  std::size_t n_notebooks = 0;   // notebooks that contributed
  std::size_t n_failed = 0;      // notebooks skipped after an error
  std::size_t n_cells = 0;
  std::size_t n_lines = 0;
  double mean_cell_length = 0.0;
  double mean_cells_per_notebook = 0.0;
  std::vector<std::size_t> ratio_histogram;
  std::size_t histogram_cells = 0;
};

/// Fixed-width bin of r in [0, 1]; the last bin is closed.
inline std::size_t ratio_bin(double r, std::size_t bins) {
  const auto b = static_cast<std::size_t>(std::floor(r * static_cast<double>(bins) + 1e-9));
  return std::min(b, bins - 1);
}

struct NotebookStats {
  std::size_t cells = 0;
  std::size_t lines = 0;
  std::vector<double> ratios;  // histogram contributions
};

inline NotebookStats notebook_stats(const Notebook& nb, const AnalysisConfig& cfg,
                                    const StatsOptions& opt) {
  NotebookStats s;
  const NotebookAnalysis analysis = analyze_notebook(nb);
  for (const Cell& c : nb.cells) {
    if (c.is_code() || (opt.include_markdown_in_counts && c.kind == CellKind::Markdown)) {
      ++s.cells;
      s.lines += line_count(c);
    }
  }
  for (const ParsedCell& pc : analysis.cells) {
    const CellLinkStats st = cell_stats(pc.cell_index, analysis.chains);
    if (!opt.include_zero_link && st.n_links() == 0) continue;
    if (!opt.all_lengths && line_count(nb.cells[pc.cell_index]) >= cfg.merge.max_merge_lines) continue;
    s.ratios.push_back(st.r_inter);
  }
  return s;
}

inline CorpusStats corpus_stats(const std::vector<Notebook>& corpus, Transform transform,
                                const AnalysisConfig& cfg, const StatsOptions& opt = {}) {
  cfg.validate();
  if (opt.bins == 0) throw Error("histogram needs at least one bin");
  std::vector<NotebookStats> per(corpus.size());
  std::vector<char> failed(corpus.size(), 0);
  parallel_for(
      corpus.size(),
      [&](std::size_t i) {
        try {
          const TransformResult r = run_transform(corpus[i], transform, cfg);
          per[i] = notebook_stats(r.notebook, cfg, opt);
        } catch (const std::exception&) {
          failed[i] = 1;
        }
      },
      opt.workers);

  CorpusStats out;
  out.ratio_histogram.assign(opt.bins, 0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (failed[i]) {
      ++out.n_failed;
      continue;
    }
    ++out.n_notebooks;
    out.n_cells += per[i].cells;
    out.n_lines += per[i].lines;
    for (double r : per[i].ratios) ++out.ratio_histogram[ratio_bin(r, opt.bins)];
    out.histogram_cells += per[i].ratios.size();
  }
  if (out.n_cells > 0) {
    out.mean_cell_length = static_cast<double>(out.n_lines) / static_cast<double>(out.n_cells);
  }
  if (out.n_notebooks > 0) {
    out.mean_cells_per_notebook =
        static_cast<double>(out.n_cells) / static_cast<double>(out.n_notebooks);
  }
  return out;
}

inline Json to_json(const CorpusStats& s, Transform transform) {
  return Json{{"transform", std::string(to_string(transform))},
              {"n_notebooks", s.n_notebooks},
              {"n_failed", s.n_failed},
              {"n_cells", s.n_cells},
              {"n_lines", s.n_lines},
              {"mean_cell_length", s.mean_cell_length},
              {"mean_cells_per_notebook", s.mean_cells_per_notebook},
              {"histogram_cells", s.histogram_cells},
              {"ratio_histogram", s.ratio_histogram}};
}

/// `bin_lo,bin_hi,count` rows.
inline std::string histogram_csv(const std::vector<std::size_t>& histogram) {
  std::string out = "bin_lo,bin_hi,count\n";
  const std::size_t bins = histogram.size();
  for (std::size_t b = 0; b < bins; ++b) {
    char row[96];
    std::snprintf(row, sizeof row, "%.4g,%.4g,%zu\n", static_cast<double>(b) / bins,
                  static_cast<double>(b + 1) / bins, histogram[b]);
    out += row;
  }
  return out;
}

}  // namespace resplit
