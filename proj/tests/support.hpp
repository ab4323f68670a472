/*
 * Copyright 2026 The fairmon Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAIRMON_TESTS_SUPPORT_HPP
#define FAIRMON_TESTS_SUPPORT_HPP

#include "fairmon/coverage.hpp"
#include "fairmon/generator.hpp"
#include "fairmon/monitors.hpp"
#include "fairmon/random.hpp"
#include "fairmon/types.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fairmon::testing {

inline std::filesystem::path data_dir() { return FAIRMON_TEST_DATA_DIR; }

inline std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Scratch directory unique to the running test binary.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fairmon_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Schema with a binary condition axis "cond" and a target axis "target".
inline Schema simple_schema(int target_count) {
  Schema schema;
  schema.add(ConceptGrouping::make("cond", 2));
  schema.add(ConceptGrouping::make("target", target_count));
  return schema;
}

inline FairnessSpec simple_spec(FairnessMode mode, std::vector<int> beta = {}) {
  FairnessSpec spec;
  spec.name = "s";
  spec.condition_axis = "cond";
  spec.condition_value = 1;
  spec.target_axes = {"target"};
  spec.mode = mode;
  spec.beta = std::move(beta);
  return spec;
}

/// Trace whose items are all related (cond = 1) with the given target labels.
inline Trace related_trace(const std::vector<GroupValue>& labels) {
  Trace trace;
  for (GroupValue v : labels) {
    LabeledItem item;
    item.labels = {{"cond", 1}, {"target", v}};
    trace.push_back(std::move(item));
  }
  return trace;
}

inline std::vector<GroupValue> repeat(const std::vector<GroupValue>& block, std::size_t n) {
  std::vector<GroupValue> out;
  while (out.size() < n) out.push_back(block[out.size() % block.size()]);
  return out;
}

inline std::vector<GroupValue> round_robin(int cg, std::size_t n) {
  std::vector<GroupValue> block;
  for (int k = 1; k <= cg; ++k) block.push_back(k);
  return repeat(block, n);
}

// -- oracles -------------------------------------------------------------------

enum class Oracle { Satisfied, Violated, Inconclusive };

/// Direct reading of the finite bounded-appearance formula over 1-based
/// positions, clause by clause, with no shared code with the library.
inline Oracle brute_force_bounded(const std::vector<GroupValue>& l, int cg,
                                  const std::vector<int>& beta) {
  const std::size_t n = l.size();
  const int max_beta = *std::max_element(beta.begin(), beta.end());
  if (static_cast<long>(n) <= max_beta) return Oracle::Inconclusive;
  for (int k = 1; k <= cg; ++k) {
    const std::size_t b = static_cast<std::size_t>(beta[k - 1]);
    bool first = false;
    for (std::size_t m = 1; m <= b && m <= n; ++m) first = first || l[m - 1] == k;
    if (!first) return Oracle::Violated;
    for (std::size_t m1 = 1; m1 <= n; ++m1) {
      if (l[m1 - 1] != k) continue;
      if (m1 + b > n) continue;
      bool next = false;
      for (std::size_t m2 = m1 + 1; m2 <= m1 + b; ++m2) next = next || l[m2 - 1] == k;
      if (!next) return Oracle::Violated;
    }
  }
  return Oracle::Satisfied;
}

/// Every t-subset of `axis_count` axes, in lexicographic order.
inline std::vector<std::vector<int>> subsets(int axis_count, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == t) {
      out.push_back(cur);
      return;
    }
    for (int a = start; a < axis_count; ++a) {
      cur.push_back(a);
      self(self, a + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Brute-force t-way coverage over already projected label tuples: the set of
/// (subset, values) witnessed, compared against an explicit enumeration of all
/// combinations.
struct BruteCoverage {
  std::size_t covered = 0;
  std::size_t total = 0;
};

inline BruteCoverage brute_force_coverage(const std::vector<std::vector<GroupValue>>& rows,
                                          const std::vector<int>& counts, int t) {
  BruteCoverage result;
  const int axes = static_cast<int>(counts.size());
  for (const auto& subset : subsets(axes, t)) {
    std::vector<GroupValue> values(subset.size(), 1);
    while (true) {
      ++result.total;
      bool seen = false;
      for (const auto& row : rows) {
        bool match = true;
        for (std::size_t i = 0; i < subset.size(); ++i) match = match && row[subset[i]] == values[i];
        seen = seen || match;
      }
      if (seen) ++result.covered;
      std::size_t i = 0;
      while (i < values.size() && values[i] == counts[subset[i]]) values[i++] = 1;
      if (i == values.size()) break;
      ++values[i];
    }
  }
  return result;
}

}  // namespace fairmon::testing

#endif  // FAIRMON_TESTS_SUPPORT_HPP
