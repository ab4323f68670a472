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

#include "fairmon/coverage.hpp"

#include "fairmon/trace_ops.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace fairmon {

namespace {

// Lexicographic t-subsets of {0..k-1}.
std::vector<std::vector<std::size_t>> index_subsets(std::size_t k, std::size_t t) {
  std::vector<std::vector<std::size_t>> out;
  if (t == 0 || t > k) return out;
  std::vector<std::size_t> pick(t);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    out.push_back(pick);
    std::size_t i = t;
    while (i > 0 && pick[i - 1] == k - t + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < t; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

// Flat cell numbering: subset s owns ids [offset[s], offset[s] + cells[s]).
struct CellSpace {
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  std::vector<int> group_counts;

  CellSpace(std::vector<int> counts, int t_way) : group_counts(std::move(counts)) {
    subsets = index_subsets(group_counts.size(), static_cast<std::size_t>(t_way));
    for (const auto& s : subsets) {
      offset.push_back(total);
      std::size_t cells = 1;
      for (auto axis : s) cells *= static_cast<std::size_t>(group_counts[axis]);
      total += cells;
    }
  }

  // Mixed-radix index of the item's values on subset s; values are 1-based.
  std::size_t cell(std::size_t s, const std::vector<GroupValue>& values) const {
    std::size_t idx = 0;
    for (auto axis : subsets[s]) {
      idx = idx * static_cast<std::size_t>(group_counts[axis]) +
            static_cast<std::size_t>(values[axis] - 1);
    }
    return offset[s] + idx;
  }

  Combo decode(std::size_t id, const std::vector<std::string>& axis_names) const {
    const auto s = static_cast<std::size_t>(
        std::upper_bound(offset.begin(), offset.end(), id) - offset.begin() - 1);
    std::size_t idx = id - offset[s];
    Combo combo;
    const auto& subset = subsets[s];
    combo.values.resize(subset.size());
    for (std::size_t j = subset.size(); j-- > 0;) {
      const auto radix = static_cast<std::size_t>(group_counts[subset[j]]);
      combo.values[j] = static_cast<GroupValue>(idx % radix) + 1;
      idx /= radix;
    }
    for (auto axis : subset) combo.axes.push_back(axis_names[axis]);
    return combo;
  }
};

}  // namespace

std::size_t combination_total(const std::vector<int>& group_counts, int t_way) {
  return CellSpace(group_counts, t_way).total;
}

CoverageReport check_coverage(const Trace& trace, const FairnessSpec& spec,
                              const Schema& schema, int t_way) {
  if (spec.target_axes.size() < 2) {
    throw SpecError("spec '" + spec.name + "': coverage needs at least two target axes");
  }
  if (t_way < 1 || static_cast<std::size_t>(t_way) > spec.target_axes.size()) {
    throw SpecError("spec '" + spec.name + "': t_way out of range");
  }
  std::vector<int> counts;
  for (const auto& axis : spec.target_axes) {
    counts.push_back(schema.at(axis).group_count);
  }
  const CellSpace space(counts, t_way);
  const Trace projected = condition_projection(trace, spec, schema);

  CoverageReport report;
  report.t_way = t_way;
  report.total = space.total;
  report.projected_length = projected.size();

  std::vector<std::size_t> first_position(space.total, 0);
  std::vector<std::size_t> first_source(space.total, 0);
  std::vector<std::size_t> order;  // cell ids in discovery order
  std::vector<GroupValue> values(spec.target_axes.size());

  report.curve.push_back({0, 0, 0, space.total, Rational(0)});
  for (const auto& item : projected.items) {
    for (std::size_t a = 0; a < values.size(); ++a) {
      values[a] = item.label(spec.target_axes[a]);
      if (values[a] < 1 || values[a] > counts[a]) {
        throw PreconditionError("label " + std::to_string(values[a]) +
                                " out of range on axis '" + spec.target_axes[a] + "'");
      }
    }
    for (std::size_t s = 0; s < space.subsets.size(); ++s) {
      const auto id = space.cell(s, values);
      if (first_position[id] == 0) {
        first_position[id] = item.index;
        first_source[id] = item.source_index;
        order.push_back(id);
      }
    }
    report.curve.push_back({item.index, item.source_index, order.size(), space.total,
                            Rational(static_cast<std::int64_t>(order.size()),
                                     static_cast<std::int64_t>(space.total))});
  }

  for (auto id : order) {
    report.covered.push_back(
        {space.decode(id, spec.target_axes), first_position[id], first_source[id]});
  }
  std::stable_sort(report.covered.begin(), report.covered.end(),
                   [](const CoveredCombo& a, const CoveredCombo& b) {
                     if (a.position != b.position) return a.position < b.position;
                     return a.combo < b.combo;
                   });
  for (std::size_t id = 0; id < space.total; ++id) {
    if (first_position[id] == 0) report.missing.push_back(space.decode(id, spec.target_axes));
  }
  report.normalized = report.curve.back().normalized;
  return report;
}

Verdict check_paired(const Trace& trace, const FairnessSpec& spec,
                     const Schema& schema) {
  if (spec.mode != FairnessMode::Paired) {
    throw PreconditionError("spec '" + spec.name + "' is not a paired spec");
  }
  spec.validate(schema);
  const auto report = check_coverage(trace, spec, schema, 2);
  Verdict verdict;
  verdict.projected_length = report.projected_length;
  for (const auto& combo : report.missing) {
    verdict.violations.push_back({.group_value = combo.values[0],
                                  .kind = ViolationKind::MissingPair,
                                  .paired_value = combo.values[1]});
  }
  verdict.outcome = verdict.violations.empty() ? Outcome::Satisfied : Outcome::Violated;
  return verdict;
}

CoverageReport check_all_paired(const Trace& trace, const FairnessSpec& spec,
                                const Schema& schema) {
  if (spec.mode != FairnessMode::AllPaired) {
    throw PreconditionError("spec '" + spec.name + "' is not an all-paired spec");
  }
  spec.validate(schema);
  return check_coverage(trace, spec, schema, spec.t_way);
}

CoverageReport check_intersectional(const Trace& trace, const FairnessSpec& spec,
                                    const Schema& schema) {
  return check_coverage(trace, spec, schema,
                        static_cast<int>(spec.target_axes.size()));
}

std::vector<CurvePoint> coverage_curve(const Trace& trace,
                                       const FairnessSpec& spec,
                                       const Schema& schema) {
  return check_all_paired(trace, spec, schema).curve;
}

std::size_t saturation_point(const std::vector<CurvePoint>& curve) {
  std::size_t point = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].covered != curve[i - 1].covered) point = curve[i].n_projected;
  }
  return point;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "n_projected,n_raw,covered,total,normalized\n";
  char buf[32];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%.6f", to_double(p.normalized));
    out << p.n_projected << ',' << p.n_raw << ',' << p.covered << ',' << p.total
        << ',' << buf << '\n';
  }
}

}  // namespace fairmon
