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

#include "fairmon/monitors.hpp"

#include "fairmon/trace_ops.hpp"

#include <algorithm>
#include <tuple>

namespace fairmon {

namespace {

struct Projected {
  std::vector<GroupValue> labels;
  std::vector<std::size_t> sources;
  std::size_t condition_filtered = 0;
  std::size_t target_unrelated = 0;
};

Projected project_single(const Trace& trace, const FairnessSpec& spec) {
  Projected out;
  const auto& target = spec.target_axis();
  for (const auto& item : trace.items) {
    if (item.label(spec.condition_axis) != spec.condition_value) {
      ++out.condition_filtered;
      continue;
    }
    const GroupValue v = item.label(target);
    if (v == kUnrelated) {
      ++out.target_unrelated;
      continue;
    }
    out.labels.push_back(v);
    out.sources.push_back(item.source_index);
  }
  return out;
}

void sort_violations(std::vector<Violation>& violations) {
  std::sort(violations.begin(), violations.end(),
            [](const Violation& a, const Violation& b) {
              return std::tie(a.group_value, a.position, a.kind) <
                     std::tie(b.group_value, b.position, b.kind);
            });
}

void check_range(std::span<const GroupValue> labels, int group_count) {
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (labels[m] < 1 || labels[m] > group_count) {
      throw PreconditionError("projected label " + std::to_string(labels[m]) +
                              " at position " + std::to_string(m + 1) +
                              " outside [1.." + std::to_string(group_count) +
                              "]");
    }
  }
}

// Rewrites label positions into source indices of the original trace.
Verdict attach_sources(Verdict verdict, const Projected& projected) {
  for (auto& v : verdict.violations) {
    if (v.position) v.source_index = projected.sources[*v.position - 1];
  }
  for (auto& w : verdict.witnesses) {
    w.source_index = projected.sources[w.position - 1];
  }
  verdict.condition_filtered = projected.condition_filtered;
  verdict.target_unrelated = projected.target_unrelated;
  return verdict;
}

void require_mode(const FairnessSpec& spec, FairnessMode mode) {
  if (spec.mode != mode) {
    throw PreconditionError("spec '" + spec.name + "' has mode " +
                            std::string(to_string(spec.mode)) + ", expected " +
                            std::string(to_string(mode)));
  }
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Satisfied:
      return "satisfied";
    case Outcome::Violated:
      return "violated";
    case Outcome::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MissingEventual:
      return "missing_eventual";
    case ViolationKind::FirstOccurrenceLate:
      return "first_occurrence_late";
    case ViolationKind::GapExceeded:
      return "gap_exceeded";
    case ViolationKind::MissingPair:
      return "missing_pair";
  }
  return "unknown";
}

Verdict evaluate_eventual(std::span<const GroupValue> labels, int group_count) {
  check_range(labels, group_count);
  std::vector<std::size_t> first(static_cast<std::size_t>(group_count) + 1, 0);
  for (std::size_t m = 1; m <= labels.size(); ++m) {
    auto& f = first[static_cast<std::size_t>(labels[m - 1])];
    if (f == 0) f = m;
  }
  Verdict verdict;
  verdict.projected_length = labels.size();
  for (GroupValue k = 1; k <= group_count; ++k) {
    const auto f = first[static_cast<std::size_t>(k)];
    if (f == 0) {
      verdict.violations.push_back({.group_value = k,
                                    .kind = ViolationKind::MissingEventual});
    } else {
      verdict.witnesses.push_back({k, f, f});
    }
  }
  verdict.outcome =
      verdict.violations.empty() ? Outcome::Satisfied : Outcome::Violated;
  return verdict;
}

Verdict evaluate_beta_bounded(std::span<const GroupValue> labels,
                              int group_count, std::span<const int> beta) {
  if (beta.size() != static_cast<std::size_t>(group_count)) {
    throw SpecError("beta needs one entry per group value");
  }
  check_range(labels, group_count);
  const std::size_t n = labels.size();
  const auto bound = [&](GroupValue k) {
    return static_cast<std::size_t>(beta[static_cast<std::size_t>(k - 1)]);
  };

  Verdict verdict;
  verdict.projected_length = n;
  std::vector<std::size_t> first(static_cast<std::size_t>(group_count) + 1, 0);
  std::vector<std::size_t> last(static_cast<std::size_t>(group_count) + 1, 0);
  for (std::size_t m = 1; m <= n; ++m) {
    const GroupValue v = labels[m - 1];
    auto& l = last[static_cast<std::size_t>(v)];
    if (l != 0 && m - l > bound(v)) {
      verdict.violations.push_back({.group_value = v,
                                    .kind = ViolationKind::GapExceeded,
                                    .position = l,
                                    .required_by = l + bound(v),
                                    .source_index = l});
    }
    if (first[static_cast<std::size_t>(v)] == 0) first[static_cast<std::size_t>(v)] = m;
    l = m;
  }
  for (GroupValue k = 1; k <= group_count; ++k) {
    const auto f = first[static_cast<std::size_t>(k)];
    const auto l = last[static_cast<std::size_t>(k)];
    if (f == 0) {
      verdict.violations.push_back({.group_value = k,
                                    .kind = ViolationKind::MissingEventual,
                                    .required_by = bound(k)});
      continue;
    }
    verdict.witnesses.push_back({k, f, f});
    if (f > bound(k)) {
      verdict.violations.push_back({.group_value = k,
                                    .kind = ViolationKind::FirstOccurrenceLate,
                                    .position = f,
                                    .required_by = bound(k),
                                    .source_index = f});
    }
    // Weak-next escape: an occurrence with m1 + beta_k > n needs no successor.
    if (l + bound(k) <= n) {
      verdict.violations.push_back({.group_value = k,
                                    .kind = ViolationKind::GapExceeded,
                                    .position = l,
                                    .required_by = l + bound(k),
                                    .source_index = l});
    }
  }
  sort_violations(verdict.violations);

  const auto max_beta = static_cast<std::size_t>(*std::max_element(beta.begin(), beta.end()));
  if (n <= max_beta) {
    verdict.outcome = Outcome::Inconclusive;
  } else {
    verdict.outcome =
        verdict.violations.empty() ? Outcome::Satisfied : Outcome::Violated;
  }
  return verdict;
}

Verdict check_eventual(const Trace& trace, const FairnessSpec& spec,
                       const Schema& schema) {
  require_mode(spec, FairnessMode::Eventual);
  const auto projected = project_single(trace, spec);
  return attach_sources(
      evaluate_eventual(projected.labels, schema.at(spec.target_axis()).group_count),
      projected);
}

Verdict check_beta_bounded(const Trace& trace, const FairnessSpec& spec,
                           const Schema& schema) {
  require_mode(spec, FairnessMode::BetaBounded);
  spec.validate(schema);
  const auto projected = project_single(trace, spec);
  return attach_sources(
      evaluate_beta_bounded(projected.labels,
                            schema.at(spec.target_axis()).group_count, spec.beta),
      projected);
}

std::optional<int> minimal_uniform_beta(std::span<const GroupValue> labels,
                                        int group_count) {
  const auto n = static_cast<int>(labels.size());
  std::vector<int> beta(static_cast<std::size_t>(group_count));
  for (int b = group_count; b < n; ++b) {
    std::fill(beta.begin(), beta.end(), b);
    if (evaluate_beta_bounded(labels, group_count, beta).satisfied()) return b;
  }
  return std::nullopt;
}

std::optional<int> minimal_uniform_beta(const Trace& trace,
                                        const FairnessSpec& spec,
                                        const Schema& schema) {
  require_mode(spec, FairnessMode::BetaBounded);
  const auto projected = project_single(trace, spec);
  return minimal_uniform_beta(projected.labels,
                              schema.at(spec.target_axis()).group_count);
}

Rational frequency_gap_bound(const FairnessSpec& spec, const Schema& schema) {
  require_mode(spec, FairnessMode::BetaBounded);
  const int cg = schema.at(spec.target_axis()).group_count;
  if (spec.beta.empty() ||
      std::adjacent_find(spec.beta.begin(), spec.beta.end(),
                         std::not_equal_to<>()) != spec.beta.end()) {
    throw SpecError("frequency gap bound is only defined for a uniform beta");
  }
  const int b = spec.beta.front();
  if (b < cg) {
    throw PreconditionError("uniform beta " + std::to_string(b) +
                            " is below the group count " + std::to_string(cg));
  }
  return Rational(1) - Rational(cg, b);
}

Rational max_frequency_gap(std::span<const GroupValue> labels, int group_count) {
  if (labels.empty()) {
    throw PreconditionError("frequency is undefined on an empty trace");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(group_count) + 1, 0);
  for (GroupValue v : labels) {
    if (v >= 1 && v <= group_count) ++counts[static_cast<std::size_t>(v)];
  }
  const auto [lo, hi] = std::minmax_element(counts.begin() + 1, counts.end());
  return Rational(*hi - *lo, static_cast<std::int64_t>(labels.size()));
}

// -- streaming -------------------------------------------------------------

StreamState StreamState::start(const FairnessSpec& spec, const Schema& schema) {
  if (spec.mode != FairnessMode::Eventual && spec.mode != FairnessMode::BetaBounded) {
    throw PreconditionError("streaming supports eventual and beta_bounded specs");
  }
  spec.validate(schema);
  StreamState state;
  state.spec = spec;
  state.group_count = schema.at(spec.target_axis()).group_count;
  state.condition_value = spec.condition_value;
  const auto slots = static_cast<std::size_t>(state.group_count) + 1;
  state.first_seen.assign(slots, 0);
  state.first_source.assign(slots, 0);
  state.last_seen.assign(slots, 0);
  state.last_source.assign(slots, 0);
  return state;
}

std::vector<AlertEvent> stream_observe(StreamState& state,
                                       const LabeledItem& item) {
  std::vector<AlertEvent> alerts;
  if (item.label(state.spec.condition_axis) != state.condition_value) {
    ++state.condition_filtered;
    return alerts;
  }
  const GroupValue v = item.label(state.spec.target_axis());
  if (v == kUnrelated) {
    ++state.target_unrelated;
    return alerts;
  }
  if (v < 0 || v > state.group_count) {
    throw PreconditionError("label " + std::to_string(v) + " out of range");
  }
  const std::size_t n = ++state.length_so_far;
  const auto slot = static_cast<std::size_t>(v);
  if (state.first_seen[slot] == 0) {
    state.first_seen[slot] = n;
    state.first_source[slot] = item.source_index;
  }
  state.last_seen[slot] = n;
  state.last_source[slot] = item.source_index;

  if (state.spec.mode != FairnessMode::BetaBounded) return alerts;

  for (GroupValue k = 1; k <= state.group_count; ++k) {
    if (k == v) continue;
    const auto ks = static_cast<std::size_t>(k);
    const auto b = static_cast<std::size_t>(state.spec.beta[ks - 1]);
    if (state.first_seen[ks] == 0) {
      if (n == b) {
        alerts.push_back({.group_value = k,
                          .kind = ViolationKind::FirstOccurrenceLate,
                          .position = n,
                          .source_index = item.source_index});
      }
    } else if (n - state.last_seen[ks] == b) {
      const auto m1 = state.last_seen[ks];
      alerts.push_back({.group_value = k,
                        .kind = ViolationKind::GapExceeded,
                        .position = n,
                        .last_occurrence = m1,
                        .source_index = item.source_index});
      state.gap_violations.push_back({.group_value = k,
                                      .kind = ViolationKind::GapExceeded,
                                      .position = m1,
                                      .required_by = m1 + b,
                                      .source_index = state.last_source[ks]});
    }
  }
  return alerts;
}

Verdict stream_finalize(const StreamState& state) {
  Verdict verdict;
  verdict.projected_length = state.length_so_far;
  verdict.condition_filtered = state.condition_filtered;
  verdict.target_unrelated = state.target_unrelated;
  const bool bounded = state.spec.mode == FairnessMode::BetaBounded;
  if (bounded) verdict.violations = state.gap_violations;
  for (GroupValue k = 1; k <= state.group_count; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const auto f = state.first_seen[ks];
    const std::optional<std::size_t> b =
        bounded ? std::optional<std::size_t>(static_cast<std::size_t>(state.spec.beta[ks - 1]))
                : std::nullopt;
    if (f == 0) {
      verdict.violations.push_back({.group_value = k,
                                    .kind = ViolationKind::MissingEventual,
                                    .required_by = b});
      continue;
    }
    verdict.witnesses.push_back({k, f, state.first_source[ks]});
    if (bounded && f > *b) {
      verdict.violations.push_back({.group_value = k,
                                    .kind = ViolationKind::FirstOccurrenceLate,
                                    .position = f,
                                    .required_by = b,
                                    .source_index = state.first_source[ks]});
    }
  }
  sort_violations(verdict.violations);
  if (bounded) {
    const auto max_beta = static_cast<std::size_t>(
        *std::max_element(state.spec.beta.begin(), state.spec.beta.end()));
    if (verdict.projected_length <= max_beta) {
      verdict.outcome = Outcome::Inconclusive;
      return verdict;
    }
  }
  verdict.outcome =
      verdict.violations.empty() ? Outcome::Satisfied : Outcome::Violated;
  return verdict;
}

}  // namespace fairmon
