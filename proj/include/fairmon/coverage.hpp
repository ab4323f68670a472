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

#ifndef FAIRMON_COVERAGE_HPP
#define FAIRMON_COVERAGE_HPP

#include "fairmon/monitors.hpp"
#include "fairmon/types.hpp"

#include <compare>
#include <ostream>
#include <string>
#include <vector>

namespace fairmon {

/// One value combination on a set of distinct axes. Axes appear in the
/// order they are listed in the spec, so (x, y) and (y, x) never both occur.
/// With t = 2 this is the (axis_x, axis_y, k1, k2) pair combination.
struct Combo {
  std::vector<std::string> axes;
  std::vector<GroupValue> values;

  auto operator<=>(const Combo&) const = default;
};

struct CoveredCombo {
  Combo combo;
  /// Post-removal position of the first item witnessing the combo.
  std::size_t position = 0;
  std::size_t source_index = 0;
};

struct CurvePoint {
  std::size_t n_projected = 0;
  /// Raw trace position of the n-th projected item (0 for the empty prefix).
  std::size_t n_raw = 0;
  std::size_t covered = 0;
  std::size_t total = 0;
  Rational normalized{0};
};

struct CoverageReport {
  int t_way = 2;
  std::size_t projected_length = 0;
  /// Sorted by first-witness position, then combo.
  std::vector<CoveredCombo> covered;
  std::vector<Combo> missing;
  /// Sum over t-subsets of axes of the product of their group counts.
  std::size_t total = 0;
  Rational normalized{0};
  /// One point per projected prefix length 0..n.
  std::vector<CurvePoint> curve;

  bool satisfied() const { return normalized == Rational(1); }
};

/// Number of combinations a t-way coverage over `group_counts` must witness.
std::size_t combination_total(const std::vector<int>& group_counts, int t_way);

/// t-way coverage of the condition-projected trace over spec.target_axes.
CoverageReport check_coverage(const Trace& trace, const FairnessSpec& spec,
                              const Schema& schema, int t_way);

/// Every (k1, k2) of the two target axes appears on a single projected item.
Verdict check_paired(const Trace& trace, const FairnessSpec& spec,
                     const Schema& schema);

/// Pairwise (spec.t_way, default 2) coverage over all target axes.
CoverageReport check_all_paired(const Trace& trace, const FairnessSpec& spec,
                                const Schema& schema);

/// Full K-way intersectional coverage (t = K).
CoverageReport check_intersectional(const Trace& trace, const FairnessSpec& spec,
                                    const Schema& schema);

std::vector<CurvePoint> coverage_curve(const Trace& trace,
                                       const FairnessSpec& spec,
                                       const Schema& schema);

/// Smallest n after which the curve stays constant.
std::size_t saturation_point(const std::vector<CurvePoint>& curve);

/// Header `n_projected,n_raw,covered,total,normalized`, one row per point.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

}  // namespace fairmon

#endif  // FAIRMON_COVERAGE_HPP
