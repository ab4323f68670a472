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

#ifndef FAIRMON_TYPES_HPP
#define FAIRMON_TYPES_HPP

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairmon {

/// Concept group value on one axis. 0 is reserved for "unrelated".
using GroupValue = int;

inline constexpr GroupValue kUnrelated = 0;

using Rational = boost::rational<std::int64_t>;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trace item lacks a label for an axis that an operation needs.
class LabelingError : public Error {
 public:
  LabelingError(std::size_t item_index, std::string axis);

  std::size_t item_index() const { return item_index_; }
  const std::string& axis() const { return axis_; }

 private:
  std::size_t item_index_;
  std::string axis_;
};

/// Malformed or inconsistent specification / configuration.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Input file could not be parsed. Carries 1-based line/column when known.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column,
             const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Failure inside a generator or oracle (transport, protocol, model).
class AdapterError : public Error {
 public:
  using Error::Error;
};

/// A named classification axis with values 0..group_count.
struct ConceptGrouping {
  std::string name;
  int group_count = 1;
  /// group_count + 1 labels; index 0 names the "unrelated" value.
  std::vector<std::string> value_names;

  bool contains(GroupValue v) const { return v >= 0 && v <= group_count; }
  const std::string& value_name(GroupValue v) const;

  /// Builds a grouping with default value names ("unrelated", "1", "2", ...).
  static ConceptGrouping make(std::string name, int group_count,
                              std::vector<std::string> value_names = {});
};

/// Registry of the axes known to a configuration. Lookup by name.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<ConceptGrouping> groupings);

  void add(ConceptGrouping grouping);
  const ConceptGrouping& at(std::string_view name) const;
  const ConceptGrouping* find(std::string_view name) const;
  const std::vector<ConceptGrouping>& groupings() const { return groupings_; }

 private:
  std::vector<ConceptGrouping> groupings_;
};

/// Relatedness / bias annotations recorded with a generated item.
struct ItemMeta {
  std::optional<bool> related;
  std::optional<GroupValue> biased;

  bool operator==(const ItemMeta&) const = default;
};

struct LabeledItem {
  /// 1-based position in the trace that holds it.
  std::size_t index = 0;
  /// Position in the original (pre-removal) trace. Survives remove().
  std::size_t source_index = 0;
  std::string prompt;
  std::map<std::string, GroupValue, std::less<>> labels;
  ItemMeta meta;
  std::optional<std::string> payload_ref;
  bool injected = false;

  /// Label on `axis`; throws LabelingError when absent.
  GroupValue label(std::string_view axis) const;

  bool operator==(const LabeledItem&) const = default;
};

struct Trace {
  std::vector<LabeledItem> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  /// Appends an item, assigning the next index (and source index if unset).
  void push_back(LabeledItem item);

  bool operator==(const Trace&) const = default;
};

enum class FairnessMode { Eventual, BetaBounded, Paired, AllPaired };

std::string_view to_string(FairnessMode mode);
FairnessMode parse_mode(std::string_view text);

/// Conditional specification <target / condition_axis <= condition_value>.
struct FairnessSpec {
  std::string name;
  std::string condition_axis;
  GroupValue condition_value = 1;
  /// One axis for Eventual / BetaBounded, two for Paired, >= 2 for AllPaired.
  std::vector<std::string> target_axes;
  FairnessMode mode = FairnessMode::Eventual;
  /// One bound per target group value 1..CG; BetaBounded only.
  std::vector<int> beta;
  /// Interaction strength for AllPaired coverage.
  int t_way = 2;

  const std::string& target_axis() const;

  /// Checks every structural invariant against `schema`; throws SpecError.
  void validate(const Schema& schema) const;
};

/// Throws ParseError/SpecError if a label lies outside its axis range or
/// indices are not contiguous from 1.
void validate_trace(const Trace& trace, const Schema& schema);

}  // namespace fairmon

#endif  // FAIRMON_TYPES_HPP
