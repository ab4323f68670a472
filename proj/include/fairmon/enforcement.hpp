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

#ifndef FAIRMON_ENFORCEMENT_HPP
#define FAIRMON_ENFORCEMENT_HPP

#include "fairmon/generator.hpp"
#include "fairmon/random.hpp"
#include "fairmon/types.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairmon {

/// What to do with an item labelled 0 on the target axis after a related,
/// unbiased prompt.
enum class ZeroLabelPolicy {
  /// Leave the counters alone; the item is outside the projected trace.
  SkipUpdate,
  /// Decrement every counter, as the literal loop body does.
  DecrementAll,
};

enum class ViolationPolicy { LogAndContinue, Halt };

inline constexpr std::string_view kDefaultInjectionTemplate =
    "Enforce the generated image such that {axis} = {value}";

struct EnforcementConfig {
  /// Must be BetaBounded with every beta_k > CG.
  FairnessSpec spec;
  /// `{axis}` and `{value}` expand to the axis name and the value's name;
  /// `{index}` to the numeric value.
  std::string injection_template{kDefaultInjectionTemplate};
  std::uint64_t rng_seed = 0;
  ZeroLabelPolicy zero_label_policy = ZeroLabelPolicy::SkipUpdate;
  ViolationPolicy violation_policy = ViolationPolicy::LogAndContinue;
  std::size_t history_capacity = 64;

  void validate(const Schema& schema) const;
};

/// Result of one evaluation of the lookahead predicate.
struct InjectionDecision {
  /// Steps to the deadline k at which the predicate fired.
  int k = 0;
  /// Every value whose counter equals k.
  std::vector<GroupValue> candidates;
  GroupValue chosen = 0;
};

/// One audit record per related, unbiased step.
struct AuditRecord {
  std::size_t step = 0;
  std::vector<int> counters_before;
  std::optional<InjectionDecision> decision;
  GroupValue observed = 0;
  std::vector<int> counters_after;
};

struct DeadlineViolation {
  std::size_t step = 0;
  std::size_t related_step = 0;
  GroupValue group_value = 0;
};

struct EnforcementState {
  /// counters[k - 1] is the remaining deadline of value k.
  std::vector<int> counters;
  std::size_t step_count = 0;
  std::size_t related_steps = 0;
  std::size_t injections = 0;
  bool halted = false;
  std::deque<AuditRecord> history;
  std::vector<DeadlineViolation> violations;
  Rng rng;

  /// Counters start at beta_k.
  static EnforcementState start(const EnforcementConfig& config);
};

/// Lookahead predicate: for k from counters.size() down to 1, the first k
/// where at least k counters equal k. Returns k and all values at k.
std::optional<std::pair<int, std::vector<GroupValue>>> injection_candidates(
    std::span<const int> counters);

/// Evaluates the predicate and picks one candidate uniformly with the
/// state's RNG.
std::optional<InjectionDecision> decide_injection(EnforcementState& state);

struct StepOutcome {
  bool passed_through = false;
  std::optional<GroupValue> injected_value;
  std::string final_prompt;
  LabeledItem item;
  std::vector<DeadlineViolation> alerts;
};

/// The external collaborators of one enforcement step.
struct AdapterHandles {
  Generator& generator;
  PromptOracle& oracle;
  Classifier& classifier;
};

class Enforcer {
 public:
  Enforcer(EnforcementConfig config, Schema schema);

  /// Processes one prompt. On an adapter or oracle failure the state is left
  /// exactly as before and the exception propagates. Pass-through items get
  /// the condition label implied by the oracle and, when biased, the forced
  /// target label, unless the generator already set them.
  StepOutcome step(const PromptRequest& prompt, AdapterHandles adapters);

  const EnforcementState& state() const { return state_; }
  const EnforcementConfig& config() const { return config_; }
  const ConceptGrouping& target() const { return *target_; }

  /// Called with every audit record as it is produced.
  void set_audit_sink(std::function<void(const AuditRecord&)> sink) {
    audit_sink_ = std::move(sink);
  }

  std::string render_suffix(GroupValue value) const;

 private:
  EnforcementConfig config_;
  Schema schema_;
  const ConceptGrouping* target_;
  const ConceptGrouping* condition_;
  EnforcementState state_;
  std::function<void(const AuditRecord&)> audit_sink_;
};

struct EnforcementStats {
  std::size_t steps = 0;
  std::size_t related_steps = 0;
  std::size_t injections = 0;
  /// injections / steps (0 when no steps ran).
  double injection_rate = 0.0;
  bool halted = false;
  std::vector<DeadlineViolation> violations;
};

struct EnforcementRun {
  Trace trace;
  EnforcementStats stats;
};

/// Folds Enforcer::step over `prompts`, stopping early only when the
/// violation policy is Halt and a deadline is missed.
EnforcementRun run_enforcement(const EnforcementConfig& config, const Schema& schema,
                               const std::vector<PromptRequest>& prompts,
                               AdapterHandles adapters,
                               std::function<void(const AuditRecord&)> audit_sink = {});

/// Items of an enforcement trace that entered the counters: related to the
/// condition and not biased on the target axis.
Trace enforced_subsequence(const Trace& trace);

}  // namespace fairmon

#endif  // FAIRMON_ENFORCEMENT_HPP
