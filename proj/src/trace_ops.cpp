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

#include "fairmon/trace_ops.hpp"

#include <algorithm>

namespace fairmon {

Trace remove(const Trace& trace, std::string_view axis,
             const std::set<GroupValue>& drop_set) {
  Trace out;
  out.items.reserve(trace.items.size());
  for (const auto& item : trace.items) {
    if (drop_set.contains(item.label(axis))) continue;
    LabeledItem kept = item;
    kept.index = out.items.size() + 1;
    out.items.push_back(std::move(kept));
  }
  return out;
}

Trace condition_projection(const Trace& trace, const FairnessSpec& spec,
                           const Schema& schema) {
  const auto& condition = schema.at(spec.condition_axis);
  std::set<GroupValue> others;
  for (GroupValue v = 0; v <= condition.group_count; ++v) {
    if (v != spec.condition_value) others.insert(v);
  }
  Trace projected = remove(trace, spec.condition_axis, others);
  for (const auto& axis : spec.target_axes) {
    projected = remove(projected, axis, {kUnrelated});
  }
  return projected;
}

std::vector<GroupValue> labels_on(const Trace& trace, std::string_view axis) {
  std::vector<GroupValue> out;
  out.reserve(trace.items.size());
  for (const auto& item : trace.items) out.push_back(item.label(axis));
  return out;
}

Rational empirical_frequency(const Trace& trace, std::string_view axis,
                             GroupValue value) {
  if (trace.empty()) {
    throw PreconditionError("frequency is undefined on an empty trace");
  }
  const auto labels = labels_on(trace, axis);
  const auto hits = std::count(labels.begin(), labels.end(), value);
  return Rational(static_cast<std::int64_t>(hits),
                  static_cast<std::int64_t>(labels.size()));
}

double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

}  // namespace fairmon
