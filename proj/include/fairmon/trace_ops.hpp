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

#ifndef FAIRMON_TRACE_OPS_HPP
#define FAIRMON_TRACE_OPS_HPP

#include "fairmon/types.hpp"

#include <set>
#include <string_view>
#include <vector>

namespace fairmon {

/// Subsequence of `trace` without the items whose label on `axis` is in
/// `drop_set`. Order is preserved; survivors are re-indexed 1..n and keep
/// their source_index.
Trace remove(const Trace& trace, std::string_view axis,
             const std::set<GroupValue>& drop_set);

/// Keeps items with condition label == spec.condition_value, then drops
/// items carrying 0 on any target axis.
Trace condition_projection(const Trace& trace, const FairnessSpec& spec,
                           const Schema& schema);

/// Labels of `trace` on `axis`, in order.
std::vector<GroupValue> labels_on(const Trace& trace, std::string_view axis);

/// Share of items labelled `value` on `axis`. Throws PreconditionError on an
/// empty trace.
Rational empirical_frequency(const Trace& trace, std::string_view axis,
                             GroupValue value);

/// Decimal rendering used by reports.
double to_double(const Rational& r);

}  // namespace fairmon

#endif  // FAIRMON_TRACE_OPS_HPP
