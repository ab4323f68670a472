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

#include "fairmon/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairmon {

std::optional<GroupValue> is_biased(const PromptMeta& meta,
                                    const ConceptGrouping& axis) {
  auto it = meta.bias.find(axis.name);
  if (it == meta.bias.end() || !it->second) return std::nullopt;
  return it->second;
}

bool is_related(const PromptMeta& meta, std::string_view axis, GroupValue value) {
  return meta.related_to && meta.related_to->first == axis &&
         meta.related_to->second == value;
}

bool MetadataOracle::is_related(const PromptRequest& request,
                                const ConceptGrouping& axis, GroupValue value) {
  return fairmon::is_related(request.meta, axis.name, value);
}

std::optional<GroupValue> MetadataOracle::is_biased(const PromptRequest& request,
                                                    const ConceptGrouping& axis) {
  return fairmon::is_biased(request.meta, axis);
}

GroupValue classify(const LabeledItem& item, const ConceptGrouping& axis) {
  const GroupValue v = item.label(axis.name);
  if (!axis.contains(v)) {
    throw AdapterError("item " + std::to_string(item.index) + " carries label " +
                       std::to_string(v) + " outside axis '" + axis.name + "'");
  }
  return v;
}

GroupValue LabelClassifier::classify(const LabeledItem& item,
                                     const ConceptGrouping& axis) {
  return fairmon::classify(item, axis);
}

// -- profile -------------------------------------------------------------------

void GeneratorProfile::validate(const Schema* schema) const {
  if (axes.empty()) throw SpecError("generator profile lists no axes");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (std::find(axes.begin() + static_cast<std::ptrdiff_t>(i) + 1, axes.end(),
                  axes[i]) != axes.end()) {
      throw SpecError("generator profile repeats axis '" + axes[i] + "'");
    }
    if (schema != nullptr) schema->at(axes[i]);
  }
  if (tags.empty()) throw SpecError("generator profile defines no tags");
  for (const auto& [tag, dist] : tags) {
    const auto fail = [&](const std::string& what) {
      throw SpecError("profile tag '" + tag + "': " + what);
    };
    if (dist.tuples.empty()) fail("no tuples");
    if (dist.tuples.size() != dist.weights.size()) fail("tuples and weights differ in length");
    double sum = 0.0;
    for (double w : dist.weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) fail("weights must be finite and non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) fail("weights sum to " + std::to_string(sum));
    for (const auto& tuple : dist.tuples) {
      if (tuple.size() != axes.size()) fail("tuple arity differs from the axis list");
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] < 0) fail("negative group value");
        if (schema != nullptr && !schema->at(axes[i]).contains(tuple[i])) {
          fail("value " + std::to_string(tuple[i]) + " outside axis '" + axes[i] + "'");
        }
      }
    }
  }
  if (default_tag && !tags.contains(*default_tag)) {
    throw SpecError("default tag '" + *default_tag + "' is not defined");
  }
  if (compliance.kind == ComplianceKind::Partial &&
      !(compliance.probability >= 0.0 && compliance.probability <= 1.0)) {
    throw SpecError("partial compliance probability must lie in [0, 1]");
  }
}

const CategoricalDistribution& GeneratorProfile::distribution_for(
    const PromptRequest& request) const {
  const std::string& key = request.meta.tag ? *request.meta.tag : request.text;
  if (auto it = tags.find(key); it != tags.end()) return it->second;
  if (default_tag) return tags.at(*default_tag);
  throw AdapterError("no simulator distribution for prompt tag '" + key + "'");
}

// -- simulator -----------------------------------------------------------------

Simulator::Simulator(GeneratorProfile profile)
    : Simulator(std::move(profile), 0) {
  rng_.seed(profile_.seed);
}

Simulator::Simulator(GeneratorProfile profile, std::uint64_t seed)
    : profile_(std::move(profile)), rng_(seed) {
  profile_.validate();
}

std::size_t Simulator::draw(const CategoricalDistribution& dist,
                            const std::vector<std::size_t>& candidates) {
  double mass = 0.0;
  for (auto i : candidates) mass += dist.weights[i];
  const double target = uniform_unit(rng_) * mass;
  double acc = 0.0;
  for (auto i : candidates) {
    acc += dist.weights[i];
    if (target < acc) return i;
  }
  // Rounding can leave target == mass; take the last positive-weight tuple.
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    if (dist.weights[*it] > 0.0) return *it;
  }
  return candidates.back();
}

LabeledItem Simulator::sample(const PromptRequest& request,
                              const std::optional<Injection>& injection) {
  const auto& dist = profile_.distribution_for(request);

  std::vector<std::pair<std::string, GroupValue>> constraints;
  for (const auto& [axis, value] : request.meta.bias) {
    if (value) constraints.emplace_back(axis, *value);
  }
  if (injection) {
    bool comply = false;
    switch (profile_.compliance.kind) {
      case ComplianceKind::Compliant:
        comply = true;
        break;
      case ComplianceKind::IgnoreInjection:
        comply = false;
        break;
      case ComplianceKind::Partial:
        comply = uniform_unit(rng_) < profile_.compliance.probability;
        break;
    }
    if (comply) constraints.emplace_back(injection->axis, injection->value);
  }

  const auto axis_slot = [&](const std::string& axis) -> std::optional<std::size_t> {
    auto it = std::find(profile_.axes.begin(), profile_.axes.end(), axis);
    if (it == profile_.axes.end()) return std::nullopt;
    return static_cast<std::size_t>(it - profile_.axes.begin());
  };

  std::vector<std::size_t> all;
  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < dist.tuples.size(); ++i) {
    if (dist.weights[i] <= 0.0) continue;
    all.push_back(i);
    const bool ok = std::all_of(constraints.begin(), constraints.end(), [&](const auto& c) {
      const auto slot = axis_slot(c.first);
      return slot && dist.tuples[i][*slot] == c.second;
    });
    if (ok) matching.push_back(i);
  }

  const std::size_t chosen = draw(dist, matching.empty() ? all : matching);
  LabeledItem item;
  item.prompt = request.text;
  for (std::size_t a = 0; a < profile_.axes.size(); ++a) {
    item.labels[profile_.axes[a]] = dist.tuples[chosen][a];
  }
  if (matching.empty()) {
    for (const auto& [axis, value] : constraints) item.labels[axis] = value;
  }
  return item;
}

LabeledItem Simulator::generate(const PromptRequest& request,
                                const std::string& final_prompt,
                                const std::optional<Injection>& injection) {
  LabeledItem item = sample(request, injection);
  item.prompt = final_prompt;
  return item;
}

// -- inherent fairness -----------------------------------------------------------

InherentFairnessReport evaluate_inherent_fairness(
    const GeneratorProfile& profile, const FairnessSpec& spec, const Schema& schema,
    std::size_t n_samples, const std::vector<PromptRequest>& neutral_prompts,
    std::optional<std::uint64_t> seed) {
  spec.validate(schema);
  profile.validate(&schema);
  if (neutral_prompts.empty()) {
    throw PreconditionError("inherent fairness needs at least one neutral prompt");
  }
  for (const auto& prompt : neutral_prompts) {
    for (const auto& axis : spec.target_axes) {
      if (is_biased(prompt.meta, schema.at(axis))) {
        throw PreconditionError("prompt '" + prompt.text + "' is biased on axis '" +
                                axis + "'");
      }
    }
  }

  Simulator simulator(profile, seed.value_or(profile.seed));
  InherentFairnessReport report;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto& prompt = neutral_prompts[i % neutral_prompts.size()];
    LabeledItem item = simulator.sample(prompt);
    item.meta.related = is_related(prompt.meta, spec.condition_axis, spec.condition_value);
    report.trace.push_back(std::move(item));
  }

  if (spec.target_axes.size() == 1) {
    FairnessSpec eventual = spec;
    eventual.mode = FairnessMode::Eventual;
    eventual.beta.clear();
    report.verdict = check_eventual(report.trace, eventual, schema);
    eventual.mode = FairnessMode::BetaBounded;
    report.minimal_beta = minimal_uniform_beta(report.trace, eventual, schema);
  } else {
    auto coverage = check_coverage(report.trace, spec, schema,
                                   spec.mode == FairnessMode::AllPaired ? spec.t_way : 2);
    report.verdict.projected_length = coverage.projected_length;
    for (const auto& combo : coverage.missing) {
      report.verdict.violations.push_back(
          {.group_value = combo.values[0],
           .kind = ViolationKind::MissingPair,
           .paired_value = combo.values.size() > 1
                               ? std::optional<GroupValue>(combo.values[1])
                               : std::nullopt});
    }
    report.verdict.outcome =
        coverage.satisfied() ? Outcome::Satisfied : Outcome::Violated;
    report.coverage = std::move(coverage);
  }
  return report;
}

}  // namespace fairmon
