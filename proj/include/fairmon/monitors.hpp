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

#ifndef FAIRMON_MONITORS_HPP
#define FAIRMON_MONITORS_HPP

#include "fairmon/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fairmon {

enum class Outcome { Satisfied, Violated, Inconclusive };

enum class ViolationKind {
  MissingEventual,
  FirstOccurrenceLate,
  GapExceeded,
  /// A (k1, k2) combination never witnessed by a single item.
  MissingPair,
};

std::string_view to_string(Outcome outcome);
std::string_view to_string(ViolationKind kind);

struct Violation {
  GroupValue group_value = 0;
  ViolationKind kind = ViolationKind::MissingEventual;
  /// Post-removal position m1 the violation is anchored at.
  std::optional<std::size_t> position;
  /// Post-removal position by which the value had to (re)appear.
  std::optional<std::size_t> required_by;
  /// Pre-removal index of `position`.
  std::optional<std::size_t> source_index;
  /// Second value of a MissingPair.
  std::optional<GroupValue> paired_value;

  bool operator==(const Violation&) const = default;
};

struct Witness {
  GroupValue group_value = 0;
  std::size_t position = 0;
  std::size_t source_index = 0;

  bool operator==(const Witness&) const = default;
};

struct Verdict {
  Outcome outcome = Outcome::Satisfied;
  /// Length of the projected trace the verdict speaks about.
  std::size_t projected_length = 0;
  /// Items dropped because the condition label differs from cg.
  std::size_t condition_filtered = 0;
  /// Items dropped because a target label is 0.
  std::size_t target_unrelated = 0;
  /// Sorted by (group_value, position, kind).
  std::vector<Violation> violations;
  /// First occurrence of every value seen, sorted by group value.
  std::vector<Witness> witnesses;

  bool satisfied() const { return outcome == Outcome::Satisfied; }
};

/// Every value 1..CG of the target axis occurs at least once after
/// condition projection.
Verdict check_eventual(const Trace& trace, const FairnessSpec& spec,
                       const Schema& schema);

/// Finite-trace beta-bounded repeated appearance. Inconclusive when the
/// projected length n <= max_k beta_k.
Verdict check_beta_bounded(const Trace& trace, const FairnessSpec& spec,
                           const Schema& schema);

// Label-level forms of the two checkers. `labels` holds an already projected
// sequence with values in [1..group_count]; positions are 1-based. Source
// indices in the result equal positions.
Verdict evaluate_eventual(std::span<const GroupValue> labels, int group_count);
Verdict evaluate_beta_bounded(std::span<const GroupValue> labels,
                              int group_count, std::span<const int> beta);

/// Smallest uniform beta in [CG..n-1] under which the projected trace is
/// beta-bounded fair, or nullopt. The spec's beta field is ignored.
std::optional<int> minimal_uniform_beta(const Trace& trace,
                                        const FairnessSpec& spec,
                                        const Schema& schema);
std::optional<int> minimal_uniform_beta(std::span<const GroupValue> labels,
                                        int group_count);

/// Upper bound 1 - CG/beta on the pairwise frequency gap of a trace that is
/// fair under a uniform beta. Throws SpecError for non-uniform beta and
/// PreconditionError for beta < CG.
Rational frequency_gap_bound(const FairnessSpec& spec, const Schema& schema);

/// max_k f_k - min_k f_k over values 1..group_count of a non-empty label
/// sequence.
Rational max_frequency_gap(std::span<const GroupValue> labels, int group_count);

// -- streaming -------------------------------------------------------------

struct AlertEvent {
  GroupValue group_value = 0;
  ViolationKind kind = ViolationKind::FirstOccurrenceLate;
  /// Projected length n when the deadline was reached.
  std::size_t position = 0;
  /// Last occurrence m1 for GapExceeded.
  std::optional<std::size_t> last_occurrence;
  std::size_t source_index = 0;

  bool operator==(const AlertEvent&) const = default;
};

/// Incremental monitor state for one Eventual or BetaBounded spec.
struct StreamState {
  FairnessSpec spec;
  int group_count = 0;
  GroupValue condition_value = 1;
  std::size_t length_so_far = 0;
  std::size_t condition_filtered = 0;
  std::size_t target_unrelated = 0;
  // Indexed by group value; slot 0 unused. Zero means "not yet seen".
  std::vector<std::size_t> first_seen;
  std::vector<std::size_t> first_source;
  std::vector<std::size_t> last_seen;
  std::vector<std::size_t> last_source;
  std::vector<Violation> gap_violations;

  static StreamState start(const FairnessSpec& spec, const Schema& schema);
};

/// Feeds one raw (unprojected) item. Items filtered by projection leave the
/// state untouched apart from drop counters.
std::vector<AlertEvent> stream_observe(StreamState& state,
                                       const LabeledItem& item);

/// Verdict for everything observed so far; equals the batch checker's.
Verdict stream_finalize(const StreamState& state);

}  // namespace fairmon

#endif  // FAIRMON_MONITORS_HPP
