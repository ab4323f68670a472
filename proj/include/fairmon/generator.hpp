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

#ifndef FAIRMON_GENERATOR_HPP
#define FAIRMON_GENERATOR_HPP

#include "fairmon/coverage.hpp"
#include "fairmon/monitors.hpp"
#include "fairmon/random.hpp"
#include "fairmon/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairmon {

/// Ground-truth annotations attached to a user prompt.
struct PromptMeta {
  /// Simulator distribution key. Falls back to the prompt text.
  std::optional<std::string> tag;
  /// (axis, value) the prompt is about, e.g. (business_leader, 2).
  std::optional<std::pair<std::string, GroupValue>> related_to;
  /// Axis -> value the prompt forces; absent or nullopt means neutral.
  std::map<std::string, std::optional<GroupValue>, std::less<>> bias;

  bool operator==(const PromptMeta&) const = default;
};

struct PromptRequest {
  std::string text;
  PromptMeta meta;

  bool operator==(const PromptRequest&) const = default;
};

/// Value the enforcement loop asks the generator to manifest.
struct Injection {
  std::string axis;
  GroupValue value = 0;
};

/// Bias entry of `meta` for `axis`: the forced value, or nullopt if neutral.
std::optional<GroupValue> is_biased(const PromptMeta& meta,
                                    const ConceptGrouping& axis);

/// True iff the prompt is annotated as being about (axis, value).
bool is_related(const PromptMeta& meta, std::string_view axis, GroupValue value);

/// Stochastic generator: prompt in, one labelled (or payload-only) item out.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual LabeledItem generate(const PromptRequest& request,
                               const std::string& final_prompt,
                               const std::optional<Injection>& injection) = 0;
};

/// Relatedness / bias oracle consulted before every enforcement step.
class PromptOracle {
 public:
  virtual ~PromptOracle() = default;
  virtual bool is_related(const PromptRequest& request,
                          const ConceptGrouping& axis, GroupValue value) = 0;
  virtual std::optional<GroupValue> is_biased(const PromptRequest& request,
                                              const ConceptGrouping& axis) = 0;
};

/// Concept grouping function applied to a generated item.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual GroupValue classify(const LabeledItem& item,
                              const ConceptGrouping& axis) = 0;
};

/// Reads the answers from prompt metadata.
class MetadataOracle final : public PromptOracle {
 public:
  bool is_related(const PromptRequest& request, const ConceptGrouping& axis,
                  GroupValue value) override;
  std::optional<GroupValue> is_biased(const PromptRequest& request,
                                      const ConceptGrouping& axis) override;
};

/// Returns the label already stored on the item.
class LabelClassifier final : public Classifier {
 public:
  GroupValue classify(const LabeledItem& item, const ConceptGrouping& axis) override;
};

GroupValue classify(const LabeledItem& item, const ConceptGrouping& axis);

// -- simulator ---------------------------------------------------------------

enum class ComplianceKind { Compliant, IgnoreInjection, Partial };

struct Compliance {
  ComplianceKind kind = ComplianceKind::Compliant;
  /// Probability of honouring an injection (Partial only).
  double probability = 1.0;
};

/// Categorical distribution over label tuples, one entry per profile axis.
struct CategoricalDistribution {
  std::vector<std::vector<GroupValue>> tuples;
  std::vector<double> weights;
};

struct GeneratorProfile {
  /// Axis order of every tuple.
  std::vector<std::string> axes;
  std::map<std::string, CategoricalDistribution, std::less<>> tags;
  /// Tag used when a prompt's tag (or text) is unknown. Unset means error.
  std::optional<std::string> default_tag;
  Compliance compliance;
  std::uint64_t seed = 0;

  /// Weights non-negative and summing to 1 (1e-9), tuple arity matches axes,
  /// values within the schema's ranges when a schema is given.
  void validate(const Schema* schema = nullptr) const;

  const CategoricalDistribution& distribution_for(const PromptRequest& request) const;
};

/// Seeded sampler over a GeneratorProfile.
///
/// Biased axes in the prompt metadata and honoured injections act as hard
/// constraints: the tag's distribution is conditioned on the tuples that meet
/// every constraint and renormalised. If no tuple meets them, a tuple is drawn
/// from the unconditioned distribution and the constrained axes are
/// overwritten with the required values.
class Simulator final : public Generator {
 public:
  explicit Simulator(GeneratorProfile profile);
  Simulator(GeneratorProfile profile, std::uint64_t seed);

  LabeledItem sample(const PromptRequest& request,
                     const std::optional<Injection>& injection = std::nullopt);

  LabeledItem generate(const PromptRequest& request, const std::string& final_prompt,
                       const std::optional<Injection>& injection) override;

  const GeneratorProfile& profile() const { return profile_; }

 private:
  std::size_t draw(const CategoricalDistribution& dist,
                   const std::vector<std::size_t>& candidates);

  GeneratorProfile profile_;
  Rng rng_;
};

// -- inherent fairness harness -----------------------------------------------

struct InherentFairnessReport {
  /// Eventual-appearance verdict (single target) or pairwise coverage verdict.
  Verdict verdict;
  /// Single-target specs only.
  std::optional<int> minimal_beta;
  /// Multi-target specs only.
  std::optional<CoverageReport> coverage;
  Trace trace;
};

/// Samples `n_samples` items from `profile` cycling over `neutral_prompts` and
/// checks the result. A finite sample gives evidence, not proof, of inherent
/// fairness. Throws PreconditionError if any prompt is biased on a target axis.
InherentFairnessReport evaluate_inherent_fairness(
    const GeneratorProfile& profile, const FairnessSpec& spec, const Schema& schema,
    std::size_t n_samples, const std::vector<PromptRequest>& neutral_prompts,
    std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace fairmon

#endif  // FAIRMON_GENERATOR_HPP
