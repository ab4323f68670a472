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

#include "fairmon/enforcement.hpp"

#include <algorithm>

namespace fairmon {

namespace {

std::optional<InjectionDecision> decide(std::span<const int> counters, Rng& rng) {
  auto found = injection_candidates(counters);
  if (!found) return std::nullopt;
  InjectionDecision decision;
  decision.k = found->first;
  decision.candidates = std::move(found->second);
  decision.chosen = decision.candidates[uniform_index(rng, decision.candidates.size())];
  return decision;
}

void replace_all(std::string& text, std::string_view from, const std::string& to) {
  for (auto pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

}  // namespace

void EnforcementConfig::validate(const Schema& schema) const {
  if (spec.mode != FairnessMode::BetaBounded) {
    throw SpecError("enforcement needs a beta_bounded spec, '" + spec.name + "' is " +
                    std::string(to_string(spec.mode)));
  }
  spec.validate(schema);
  const int cg = schema.at(spec.target_axis()).group_count;
  for (int b : spec.beta) {
    if (b <= cg) {
      throw SpecError("enforcement needs every beta_k > " + std::to_string(cg) +
                      " (got " + std::to_string(b) + ")");
    }
  }
}

EnforcementState EnforcementState::start(const EnforcementConfig& config) {
  EnforcementState state;
  state.counters = config.spec.beta;
  state.rng.seed(config.rng_seed);
  return state;
}

std::optional<std::pair<int, std::vector<GroupValue>>> injection_candidates(
    std::span<const int> counters) {
  const int cg = static_cast<int>(counters.size());
  for (int k = cg; k >= 1; --k) {
    std::vector<GroupValue> at_k;
    for (int i = 0; i < cg; ++i) {
      if (counters[static_cast<std::size_t>(i)] == k) at_k.push_back(i + 1);
    }
    if (static_cast<int>(at_k.size()) >= k) return std::make_pair(k, std::move(at_k));
  }
  return std::nullopt;
}

std::optional<InjectionDecision> decide_injection(EnforcementState& state) {
  return decide(state.counters, state.rng);
}

Enforcer::Enforcer(EnforcementConfig config, Schema schema)
    : config_(std::move(config)), schema_(std::move(schema)) {
  config_.validate(schema_);
  target_ = &schema_.at(config_.spec.target_axis());
  condition_ = &schema_.at(config_.spec.condition_axis);
  state_ = EnforcementState::start(config_);
}

std::string Enforcer::render_suffix(GroupValue value) const {
  std::string text = config_.injection_template;
  replace_all(text, "{axis}", target_->name);
  replace_all(text, "{value}", target_->value_name(value));
  replace_all(text, "{index}", std::to_string(value));
  return text;
}

StepOutcome Enforcer::step(const PromptRequest& prompt, AdapterHandles adapters) {
  if (state_.halted) throw PreconditionError("enforcer halted after a deadline violation");
  const std::size_t step_index = state_.step_count + 1;
  StepOutcome outcome;

  const bool related =
      adapters.oracle.is_related(prompt, *condition_, config_.spec.condition_value);
  const auto biased = adapters.oracle.is_biased(prompt, *target_);
  if (!related || biased) {
    outcome.passed_through = true;
    outcome.final_prompt = prompt.text;
    outcome.item = adapters.generator.generate(prompt, prompt.text, std::nullopt);
    outcome.item.labels.try_emplace(condition_->name,
                                    related ? config_.spec.condition_value : kUnrelated);
    if (biased) outcome.item.labels.try_emplace(target_->name, *biased);
    outcome.item.meta = {related, biased};
    outcome.item.injected = false;
    ++state_.step_count;
    return outcome;
  }

  // Work on copies; commit only after every adapter call succeeded.
  Rng rng = state_.rng;
  std::vector<int> counters = state_.counters;
  AuditRecord audit;
  audit.step = step_index;
  audit.counters_before = counters;
  audit.decision = decide(counters, rng);

  std::optional<Injection> injection;
  outcome.final_prompt = prompt.text;
  if (audit.decision) {
    injection = Injection{target_->name, audit.decision->chosen};
    outcome.injected_value = audit.decision->chosen;
    if (!outcome.final_prompt.empty()) outcome.final_prompt += ' ';
    outcome.final_prompt += render_suffix(audit.decision->chosen);
  }

  outcome.item = adapters.generator.generate(prompt, outcome.final_prompt, injection);
  const GroupValue observed = adapters.classifier.classify(outcome.item, *target_);
  outcome.item.labels[target_->name] = observed;
  if (!outcome.item.labels.contains(condition_->name)) {
    outcome.item.labels[condition_->name] = config_.spec.condition_value;
  }
  outcome.item.meta = {true, std::nullopt};
  outcome.item.injected = injection.has_value();

  const bool update = observed != kUnrelated ||
                      config_.zero_label_policy == ZeroLabelPolicy::DecrementAll;
  if (update) {
    for (std::size_t i = 0; i < counters.size(); ++i) {
      const auto value = static_cast<GroupValue>(i + 1);
      if (value == observed) {
        counters[i] = config_.spec.beta[i];
      } else if (counters[i] > 0 && --counters[i] == 0) {
        outcome.alerts.push_back({step_index, state_.related_steps + 1, value});
      }
    }
  }
  audit.observed = observed;
  audit.counters_after = counters;

  state_.rng = rng;
  state_.counters = std::move(counters);
  ++state_.step_count;
  ++state_.related_steps;
  if (injection) ++state_.injections;
  state_.violations.insert(state_.violations.end(), outcome.alerts.begin(),
                           outcome.alerts.end());
  if (!outcome.alerts.empty() && config_.violation_policy == ViolationPolicy::Halt) {
    state_.halted = true;
  }
  if (audit_sink_) audit_sink_(audit);
  if (config_.history_capacity > 0) {
    if (state_.history.size() == config_.history_capacity) state_.history.pop_front();
    state_.history.push_back(std::move(audit));
  }
  return outcome;
}

EnforcementRun run_enforcement(const EnforcementConfig& config, const Schema& schema,
                               const std::vector<PromptRequest>& prompts,
                               AdapterHandles adapters,
                               std::function<void(const AuditRecord&)> audit_sink) {
  Enforcer enforcer(config, schema);
  if (audit_sink) enforcer.set_audit_sink(std::move(audit_sink));
  EnforcementRun run;
  for (const auto& prompt : prompts) {
    auto outcome = enforcer.step(prompt, adapters);
    run.trace.push_back(std::move(outcome.item));
    if (enforcer.state().halted) break;
  }
  const auto& state = enforcer.state();
  run.stats.steps = state.step_count;
  run.stats.related_steps = state.related_steps;
  run.stats.injections = state.injections;
  run.stats.injection_rate =
      state.step_count == 0 ? 0.0
                            : static_cast<double>(state.injections) /
                                  static_cast<double>(state.step_count);
  run.stats.halted = state.halted;
  run.stats.violations = state.violations;
  return run;
}

Trace enforced_subsequence(const Trace& trace) {
  Trace out;
  for (const auto& item : trace.items) {
    if (item.meta.related.value_or(false) && !item.meta.biased) {
      LabeledItem kept = item;
      kept.index = out.items.size() + 1;
      out.items.push_back(std::move(kept));
    }
  }
  return out;
}

}  // namespace fairmon
