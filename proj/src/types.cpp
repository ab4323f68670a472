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

#include "fairmon/types.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fairmon {

namespace {

std::string labeling_message(std::size_t index, const std::string& axis) {
  std::ostringstream os;
  os << "item " << index << " has no label for axis '" << axis << "'";
  return os.str();
}

std::string parse_message(const std::string& source, std::size_t line,
                          std::size_t column, const std::string& message) {
  std::ostringstream os;
  os << source;
  if (line > 0) {
    os << ':' << line;
    if (column > 0) os << ':' << column;
  }
  os << ": " << message;
  return os.str();
}

}  // namespace

LabelingError::LabelingError(std::size_t item_index, std::string axis)
    : Error(labeling_message(item_index, axis)),
      item_index_(item_index),
      axis_(std::move(axis)) {}

ParseError::ParseError(std::string source, std::size_t line,
                       std::size_t column, const std::string& message)
    : Error(parse_message(source, line, column, message)),
      line_(line),
      column_(column) {}

const std::string& ConceptGrouping::value_name(GroupValue v) const {
  if (!contains(v) || static_cast<std::size_t>(v) >= value_names.size()) {
    throw SpecError("value " + std::to_string(v) + " out of range for axis '" +
                    name + "'");
  }
  return value_names[static_cast<std::size_t>(v)];
}

ConceptGrouping ConceptGrouping::make(std::string name, int group_count,
                                      std::vector<std::string> value_names) {
  if (group_count < 1) {
    throw SpecError("axis '" + name + "' needs group_count >= 1");
  }
  if (value_names.empty()) {
    value_names.emplace_back("unrelated");
    for (int v = 1; v <= group_count; ++v) {
      value_names.push_back(std::to_string(v));
    }
  }
  if (value_names.size() != static_cast<std::size_t>(group_count) + 1) {
    throw SpecError("axis '" + name + "' needs " +
                    std::to_string(group_count + 1) + " value names, got " +
                    std::to_string(value_names.size()));
  }
  return ConceptGrouping{std::move(name), group_count, std::move(value_names)};
}

Schema::Schema(std::vector<ConceptGrouping> groupings) {
  for (auto& g : groupings) add(std::move(g));
}

void Schema::add(ConceptGrouping grouping) {
  if (find(grouping.name) != nullptr) {
    throw SpecError("duplicate axis name '" + grouping.name + "'");
  }
  groupings_.push_back(ConceptGrouping::make(std::move(grouping.name),
                                             grouping.group_count,
                                             std::move(grouping.value_names)));
}

const ConceptGrouping* Schema::find(std::string_view name) const {
  auto it = std::find_if(groupings_.begin(), groupings_.end(),
                         [&](const ConceptGrouping& g) { return g.name == name; });
  return it == groupings_.end() ? nullptr : &*it;
}

const ConceptGrouping& Schema::at(std::string_view name) const {
  if (const auto* g = find(name)) return *g;
  throw SpecError("unknown axis '" + std::string(name) + "'");
}

GroupValue LabeledItem::label(std::string_view axis) const {
  auto it = labels.find(axis);
  if (it == labels.end()) throw LabelingError(index, std::string(axis));
  return it->second;
}

void Trace::push_back(LabeledItem item) {
  item.index = items.size() + 1;
  if (item.source_index == 0) item.source_index = item.index;
  items.push_back(std::move(item));
}

std::string_view to_string(FairnessMode mode) {
  switch (mode) {
    case FairnessMode::Eventual:
      return "eventual";
    case FairnessMode::BetaBounded:
      return "beta_bounded";
    case FairnessMode::Paired:
      return "paired";
    case FairnessMode::AllPaired:
      return "all_paired";
  }
  return "unknown";
}

FairnessMode parse_mode(std::string_view text) {
  if (text == "eventual") return FairnessMode::Eventual;
  if (text == "beta_bounded") return FairnessMode::BetaBounded;
  if (text == "paired") return FairnessMode::Paired;
  if (text == "all_paired") return FairnessMode::AllPaired;
  throw SpecError("unknown fairness mode '" + std::string(text) + "'");
}

const std::string& FairnessSpec::target_axis() const {
  if (target_axes.empty()) throw SpecError("spec '" + name + "' has no target axis");
  return target_axes.front();
}

void FairnessSpec::validate(const Schema& schema) const {
  const auto fail = [&](const std::string& what) {
    throw SpecError("spec '" + name + "': " + what);
  };
  const auto& condition = schema.at(condition_axis);
  if (condition_value < 1 || condition_value > condition.group_count) {
    fail("condition_value must lie in [1.." +
         std::to_string(condition.group_count) + "]");
  }
  std::set<std::string> distinct;
  for (const auto& axis : target_axes) {
    schema.at(axis);
    if (!distinct.insert(axis).second) fail("target axis '" + axis + "' repeated");
  }
  switch (mode) {
    case FairnessMode::Eventual:
    case FairnessMode::BetaBounded:
      if (target_axes.size() != 1) fail("expects exactly one target axis");
      break;
    case FairnessMode::Paired:
      if (target_axes.size() != 2) fail("paired mode expects exactly two target axes");
      break;
    case FairnessMode::AllPaired:
      if (target_axes.size() < 2) fail("all-paired mode expects at least two target axes");
      if (t_way < 2 || static_cast<std::size_t>(t_way) > target_axes.size()) {
        fail("t_way must lie in [2..number of target axes]");
      }
      break;
  }
  if (mode == FairnessMode::BetaBounded) {
    const auto& target = schema.at(target_axes.front());
    if (beta.size() != static_cast<std::size_t>(target.group_count)) {
      fail("beta needs " + std::to_string(target.group_count) + " entries");
    }
    for (int b : beta) {
      if (b < 1) fail("every beta entry must be >= 1");
    }
  } else if (!beta.empty()) {
    fail("beta is only allowed in beta_bounded mode");
  }
}

void validate_trace(const Trace& trace, const Schema& schema) {
  for (std::size_t i = 0; i < trace.items.size(); ++i) {
    const auto& item = trace.items[i];
    if (item.index != i + 1) {
      throw ParseError("trace", i + 1, 0,
                       "index " + std::to_string(item.index) + " where " +
                           std::to_string(i + 1) + " was expected");
    }
    for (const auto& [axis, value] : item.labels) {
      const auto* g = schema.find(axis);
      if (g != nullptr && !g->contains(value)) {
        throw ParseError("trace", i + 1, 0,
                         "label " + std::to_string(value) + " on axis '" + axis +
                             "' outside [0.." + std::to_string(g->group_count) +
                             "]");
      }
    }
  }
}

}  // namespace fairmon
