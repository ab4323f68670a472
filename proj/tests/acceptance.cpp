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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "fairmon/cli.hpp"
#include "fairmon/coverage.hpp"
#include "fairmon/enforcement.hpp"
#include "fairmon/generator.hpp"
#include "fairmon/io.hpp"
#include "fairmon/monitors.hpp"
#include "fairmon/trace_ops.hpp"

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

namespace fairmon {
namespace {

using testing::brute_force_bounded;
using testing::data_dir;
using testing::Oracle;
using testing::read_bytes;
using testing::repeat;
using testing::round_robin;
using testing::scratch_dir;

struct Result {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Exhaustive agreement with the brute-force formula.
Result exhaustive_oracle() {
  const auto start = Clock::now();
  std::size_t cases = 0, disagreements = 0;
  for (int cg = 1; cg <= 3; ++cg) {
    std::vector<std::vector<int>> betas{{}};
    for (int k = 0; k < cg; ++k) {
      std::vector<std::vector<int>> next;
      for (const auto& b : betas) {
        for (int v = 1; v <= 4; ++v) {
          next.push_back(b);
          next.back().push_back(v);
        }
      }
      betas = std::move(next);
    }
    for (std::size_t n = 0; n <= 12; ++n) {
      std::vector<GroupValue> labels(n, 1);
      while (true) {
        for (const auto& beta : betas) {
          ++cases;
          const auto got = evaluate_beta_bounded(labels, cg, beta).outcome;
          if (static_cast<int>(got) != static_cast<int>(brute_force_bounded(labels, cg, beta))) {
            ++disagreements;
          }
        }
        std::size_t i = 0;
        while (i < n && labels[i] == cg) labels[i++] = 1;
        if (i == n) break;
        ++labels[i];
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << cases << " (trace, beta) cases, " << disagreements << " disagreements, " << secs << " s";
  return {disagreements == 0 && secs < 60.0, d.str()};
}

// 2. The eleven-item example with yellow (value 2) at positions 2 and 8.
Result eleven_item_example() {
  const std::vector<GroupValue> l{1, 2, 1, 1, 1, 1, 1, 2, 1, 1, 1};
  const auto loose = evaluate_beta_bounded(l, 2, std::vector<int>{6, 6});
  const auto tight = evaluate_beta_bounded(l, 2, std::vector<int>{6, 5});
  const bool tight_ok = tight.outcome == Outcome::Violated && tight.violations.size() == 1 &&
                        tight.violations[0].group_value == 2 &&
                        tight.violations[0].kind == ViolationKind::GapExceeded &&
                        tight.violations[0].position == 2u;
  // The last yellow at 8 passes only through 8 + 6 = 14 > 11.
  const bool weak_next = 8 + 6 > static_cast<int>(l.size()) &&
                         brute_force_bounded(l, 2, {6, 6}) == Oracle::Satisfied;
  std::ostringstream d;
  d << "beta=(6,6) " << to_string(loose.outcome) << "; beta=(6,5) " << to_string(tight.outcome);
  if (!tight.violations.empty()) {
    d << " at m1=" << tight.violations[0].position.value_or(0) << " ("
      << to_string(tight.violations[0].kind) << ")";
  }
  return {loose.outcome == Outcome::Satisfied && tight_ok && weak_next, d.str()};
}

// 3. Round-robin traces reach CG exactly; fair traces never go below CG.
Result lower_bound() {
  bool ok = true;
  std::ostringstream d;
  for (int cg = 2; cg <= 6; ++cg) {
    const auto b = minimal_uniform_beta(round_robin(cg, static_cast<std::size_t>(cg) * 20), cg);
    ok = ok && b == cg;
    d << "rr(" << cg << ")=" << (b ? std::to_string(*b) : "none") << ' ';
  }
  Rng rng(1001);
  std::size_t fair = 0, below = 0;
  for (int i = 0; i < 10000; ++i) {
    const int cg = 2 + static_cast<int>(uniform_index(rng, 5));
    std::vector<GroupValue> l;
    const std::size_t n = 20 + uniform_index(rng, 100);
    if (i % 2 == 0) {
      // Concatenated random permutations: always fair for some beta < n.
      std::vector<GroupValue> block;
      for (GroupValue v = 1; v <= cg; ++v) block.push_back(v);
      while (l.size() < n) {
        for (std::size_t j = block.size(); j > 1; --j) std::swap(block[j - 1], block[uniform_index(rng, j)]);
        l.insert(l.end(), block.begin(), block.end());
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) l.push_back(1 + static_cast<GroupValue>(uniform_index(rng, cg)));
    }
    const auto b = minimal_uniform_beta(l, cg);
    if (!b) continue;
    ++fair;
    if (*b < cg) ++below;
    if (!evaluate_beta_bounded(l, cg, std::vector<int>(cg, *b)).satisfied()) ++below;
  }
  d << "| " << fair << " fair random traces, " << below << " below CG";
  return {ok && below == 0 && fair >= 5000, d.str()};
}

// Random trace that is fair under uniform beta: each position takes a
// random value unless earliest-deadline scheduling needs a specific one.
std::vector<GroupValue> random_fair_trace(Rng& rng, int cg, int beta, std::size_t n,
                                          const std::vector<double>& weights) {
  std::vector<std::size_t> deadline(static_cast<std::size_t>(cg) + 1);
  for (int k = 1; k <= cg; ++k) deadline[k] = static_cast<std::size_t>(beta);
  std::vector<GroupValue> l;
  for (std::size_t p = 1; p <= n; ++p) {
    double u = uniform_unit(rng);
    GroupValue pick = cg;
    for (int k = 1; k <= cg; ++k) {
      if (u < weights[k - 1]) {
        pick = k;
        break;
      }
      u -= weights[k - 1];
    }
    // Feasible iff the remaining deadlines sorted ascending satisfy d_(i) >= p + i.
    auto feasible = [&](GroupValue v) {
      std::vector<std::size_t> rest;
      for (int k = 1; k <= cg; ++k) {
        if (k != v) rest.push_back(deadline[k]);
      }
      std::sort(rest.begin(), rest.end());
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] < p + i + 1) return false;
      }
      return true;
    };
    if (!feasible(pick)) {
      pick = 1;
      for (int k = 2; k <= cg; ++k) {
        if (deadline[k] < deadline[pick]) pick = k;
      }
    }
    l.push_back(pick);
    deadline[pick] = p + static_cast<std::size_t>(beta);
  }
  return l;
}

// 4. Frequency-gap bound on randomized fair traces and on [1,1,1,2]^n.
Result frequency_gap() {
  Rng rng(2002);
  std::size_t checked = 0, unfair = 0, exceed = 0;
  double worst_slack = 1.0;
  for (int i = 0; i < 1000; ++i) {
    const int cg = 2 + static_cast<int>(uniform_index(rng, 4));
    const int beta = cg + static_cast<int>(uniform_index(rng, 3 * cg + 1));
    const std::size_t n = 50 * static_cast<std::size_t>(beta) + uniform_index(rng, 200);
    // Heavily skewed preferences push the gap towards the bound.
    std::vector<double> weights(static_cast<std::size_t>(cg), 0.0);
    const double heavy = 0.5 + 0.5 * uniform_unit(rng);
    weights[uniform_index(rng, cg)] = heavy;
    double rest = 1.0 - heavy;
    for (auto& w : weights) {
      if (w == 0.0) w = rest / (cg - 1);
    }
    const auto l = random_fair_trace(rng, cg, beta, n, weights);
    if (!evaluate_beta_bounded(l, cg, std::vector<int>(cg, beta)).satisfied()) {
      ++unfair;
      continue;
    }
    ++checked;
    const Rational gap = max_frequency_gap(l, cg);
    const Rational bound = Rational(1) - Rational(cg, beta) + Rational(cg, static_cast<std::int64_t>(n));
    if (gap > bound) ++exceed;
    worst_slack = std::min(worst_slack, to_double(bound - gap));
  }
  const double extremal = to_double(max_frequency_gap(repeat({1, 1, 1, 2}, 4000), 2));
  std::ostringstream d;
  d << checked << " fair traces, " << exceed << " above bound, min slack " << worst_slack
    << "; [1,1,1,2] n=4000 gap " << extremal;
  return {checked == 1000 && unfair == 0 && exceed == 0 && std::abs(extremal - 0.5) <= 1e-3,
          d.str()};
}

// Generator whose base output is drawn from a fixed schedule; honours every
// injection.
class ScheduleGenerator final : public Generator {
 public:
  ScheduleGenerator(std::function<GroupValue(std::size_t, Rng&)> base, std::uint64_t seed)
      : base_(std::move(base)), rng_(seed) {}
  LabeledItem generate(const PromptRequest& request, const std::string& final_prompt,
                       const std::optional<Injection>& injection) override {
    LabeledItem item;
    item.prompt = final_prompt;
    const GroupValue v = base_(calls_++, rng_);
    item.labels["group"] = injection ? injection->value : v;
    item.labels["leader"] = request.meta.related_to ? 1 : 0;
    return item;
  }

 private:
  std::function<GroupValue(std::size_t, Rng&)> base_;
  Rng rng_;
  std::size_t calls_ = 0;
};

Schema enforcement_schema(int cg) {
  Schema schema;
  schema.add(ConceptGrouping::make("leader", 1));
  schema.add(ConceptGrouping::make("group", cg));
  return schema;
}

EnforcementConfig enforcement_config(int cg, int beta, std::uint64_t seed) {
  EnforcementConfig config;
  config.spec.name = "enforce";
  config.spec.condition_axis = "leader";
  config.spec.target_axes = {"group"};
  config.spec.mode = FairnessMode::BetaBounded;
  config.spec.beta.assign(static_cast<std::size_t>(cg), beta);
  config.rng_seed = seed;
  return config;
}

PromptRequest leader_prompt() {
  PromptRequest p{"Generate business leader", {}};
  p.meta.related_to = std::make_pair(std::string("leader"), 1);
  return p;
}

// 5. No deadline violations for compliant generators.
Result enforcement_safety() {
  const auto start = Clock::now();
  const std::size_t steps = 100000;
  std::size_t runs = 0, violations = 0, failed_checks = 0, injections = 0;
  for (int cg = 2; cg <= 5; ++cg) {
    const Schema schema = enforcement_schema(cg);
    for (int beta : {cg + 1, 2 * cg, 50}) {
      const std::vector<std::pair<std::string, std::function<GroupValue(std::size_t, Rng&)>>> bases{
          {"point", [](std::size_t, Rng&) { return GroupValue{1}; }},
          // Cycles through every value except the last, in runs of three.
          {"cyclic", [cg](std::size_t i, Rng&) { return static_cast<GroupValue>(1 + (i / 3) % (cg - 1)); }},
          {"skewed",
           [cg](std::size_t, Rng& rng) {
             const double u = uniform_unit(rng);
             if (u < 0.9) return GroupValue{1};
             return static_cast<GroupValue>(2 + uniform_index(rng, cg - 1));
           }},
      };
      for (const auto& [name, base] : bases) {
        ++runs;
        ScheduleGenerator generator(base, 31 * runs);
        MetadataOracle oracle;
        LabelClassifier classifier;
        const auto config = enforcement_config(cg, beta, runs);
        std::vector<PromptRequest> prompts;
        prompts.reserve(steps);
        for (std::size_t i = 0; i < steps; ++i) {
          prompts.push_back(i % 13 == 12 ? PromptRequest{"Generate a cook", {}} : leader_prompt());
        }
        const auto run = run_enforcement(config, schema, prompts, {generator, oracle, classifier});
        violations += run.stats.violations.size();
        injections += run.stats.injections;
        if (!check_beta_bounded(run.trace, config.spec, schema).satisfied()) ++failed_checks;
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << runs << " runs x " << steps << " steps, " << violations << " deadline violations, "
    << failed_checks << " failed checks, " << injections << " injections, " << secs << " s";
  return {violations == 0 && failed_checks == 0 && secs < 300.0, d.str()};
}

// 6. A generator that already cycles never triggers an injection.
Result minimum_interference() {
  std::size_t injections = 0;
  std::ostringstream d;
  for (int cg = 2; cg <= 5; ++cg) {
    ScheduleGenerator generator(
        [cg](std::size_t i, Rng&) { return static_cast<GroupValue>(1 + i % cg); }, 1);
    MetadataOracle oracle;
    LabelClassifier classifier;
    const auto run = run_enforcement(enforcement_config(cg, 50, 3), enforcement_schema(cg),
                                     std::vector<PromptRequest>(10000, leader_prompt()),
                                     {generator, oracle, classifier});
    injections += run.stats.injections;
    d << "CG=" << cg << ": " << run.stats.injections << " injections; ";
  }
  return {injections == 0, d.str()};
}

// 7. First injection when three counters reach 3.
Result example_trigger() {
  ScheduleGenerator generator([](std::size_t, Rng&) { return GroupValue{1}; }, 1);
  MetadataOracle oracle;
  LabelClassifier classifier;
  Enforcer enforcer(enforcement_config(4, 50, 11), enforcement_schema(4));
  std::optional<std::size_t> first_step, first_related;
  std::vector<int> counters_at_trigger;
  enforcer.step({"Generate a cook", {}}, {generator, oracle, classifier});
  for (int i = 0; i < 100 && !first_step; ++i) {
    const auto before = enforcer.state().counters;
    const auto out = enforcer.step(leader_prompt(), {generator, oracle, classifier});
    if (out.injected_value) {
      first_step = enforcer.state().step_count;
      first_related = enforcer.state().related_steps;
      counters_at_trigger = before;
    }
  }
  std::ostringstream d;
  d << "first injection at stream step " << first_step.value_or(0) << " (related step "
    << first_related.value_or(0) << "), counters [";
  for (std::size_t i = 0; i < counters_at_trigger.size(); ++i) d << (i ? "," : "") << counters_at_trigger[i];
  d << "]";
  return {first_step == 49u && first_related == 48u &&
              counters_at_trigger == std::vector<int>{50, 3, 3, 3},
          d.str()};
}

// 8. All-paired coverage against brute force; full products; monotone curves.
Result coverage_oracle() {
  Rng rng(4004);
  std::size_t mismatches = 0, non_monotone = 0, full_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    const int k = 2 + static_cast<int>(uniform_index(rng, 3));
    Schema schema;
    schema.add(ConceptGrouping::make("c", 1));
    FairnessSpec spec;
    spec.condition_axis = "c";
    spec.mode = FairnessMode::AllPaired;
    std::vector<int> counts;
    for (int a = 0; a < k; ++a) {
      counts.push_back(1 + static_cast<int>(uniform_index(rng, 3)));
      spec.target_axes.push_back("a" + std::to_string(a));
      schema.add(ConceptGrouping::make(spec.target_axes.back(), counts.back()));
    }
    Trace t;
    std::vector<std::vector<GroupValue>> projected;
    const auto n = 1 + uniform_index(rng, 20);
    for (std::size_t j = 0; j < n; ++j) {
      LabeledItem item;
      const GroupValue c = uniform_index(rng, 6) == 0 ? 0 : 1;
      item.labels["c"] = c;
      std::vector<GroupValue> row;
      bool zero = c == 0;
      for (int a = 0; a < k; ++a) {
        row.push_back(static_cast<GroupValue>(uniform_index(rng, counts[a] + 1)));
        zero = zero || row.back() == 0;
        item.labels[spec.target_axes[a]] = row.back();
      }
      if (!zero) projected.push_back(row);
      t.push_back(item);
    }
    const auto report = check_all_paired(t, spec, schema);
    const auto brute = testing::brute_force_coverage(projected, counts, 2);
    if (report.covered.size() != brute.covered || report.total != brute.total) ++mismatches;
    for (std::size_t j = 1; j < report.curve.size(); ++j) {
      if (report.curve[j].normalized < report.curve[j - 1].normalized) ++non_monotone;
    }
    // Full Cartesian product over the same axes.
    Trace full;
    std::vector<GroupValue> row(static_cast<std::size_t>(k), 1);
    while (true) {
      LabeledItem item;
      item.labels["c"] = 1;
      for (int a = 0; a < k; ++a) item.labels[spec.target_axes[a]] = row[a];
      full.push_back(item);
      int a = 0;
      while (a < k && row[a] == counts[a]) row[a++] = 1;
      if (a == k) break;
      ++row[a];
    }
    if (check_all_paired(full, spec, schema).normalized != Rational(1)) ++full_fail;
  }
  std::ostringstream d;
  d << "1000 traces: " << mismatches << " mismatches, " << non_monotone
    << " curve decreases, " << full_fail << " full-product traces below 1.0";
  return {mismatches == 0 && non_monotone == 0 && full_fail == 0, d.str()};
}

// 9. Fixed seeds give byte-identical command outputs.
Result determinism() {
  const auto a = scratch_dir("acceptance_a");
  const auto b = scratch_dir("acceptance_b");
  bool same = true;
  std::ostringstream sink;
  for (const auto& dir : {a, b}) {
    cli::EnforceOptions e;
    e.config = data_dir() / "enforce_config.json";
    e.profile = data_dir() / "profile_point_mass.json";
    e.prompts = data_dir() / "prompts_enforce.jsonl";
    e.out_trace = dir / "enforce_trace.jsonl";
    e.out_stats = dir / "enforce_stats.json";
    e.audit = dir / "enforce_audit.jsonl";
    cli::cmd_enforce(e, sink, sink);
    cli::SimulateOptions s{data_dir() / "profile_coverage.json", data_dir() / "prompts_person.jsonl",
                           500, dir / "simulate.jsonl", std::nullopt, std::nullopt};
    cli::cmd_simulate(s, sink, sink);
  }
  std::size_t bytes = 0;
  for (const char* f : {"enforce_trace.jsonl", "enforce_stats.json", "enforce_audit.jsonl",
                        "simulate.jsonl"}) {
    const auto x = read_bytes(a / f);
    same = same && !x.empty() && x == read_bytes(b / f);
    bytes += x.size();
  }
  std::ostringstream d;
  d << "4 output files, " << bytes << " bytes, " << (same ? "identical" : "DIFFER");
  return {same, d.str()};
}

// 10. The measurement pipeline recovers the calibrated ranges.
Result calibrated_profiles() {
  const Config config = read_config(data_dir() / "inherent_config.json");
  const int runs = 201;
  auto median_beta = [&](const std::string& profile, const std::string& prompts,
                         const std::string& spec) {
    const auto p = read_profile(data_dir() / profile);
    const auto q = read_prompts(data_dir() / prompts);
    std::vector<int> betas;
    for (int seed = 1; seed <= runs; ++seed) {
      const auto r = evaluate_inherent_fairness(p, config.spec(spec), config.schema, 40, q,
                                                static_cast<std::uint64_t>(seed));
      betas.push_back(r.minimal_beta.value_or(40));
    }
    std::sort(betas.begin(), betas.end());
    return betas[betas.size() / 2];
  };
  const int leader = median_beta("profile_business_leader.json", "prompts_business_leader.jsonl",
                                 "leader-gender");
  const int poor = median_beta("profile_poor_person.json", "prompts_poor_person.jsonl",
                               "poor-gender");

  const auto p = read_profile(data_dir() / "profile_coverage.json");
  const auto q = read_prompts(data_dir() / "prompts_person.jsonl");
  std::vector<std::size_t> saturation;
  double max_final = 0.0;
  for (int seed = 1; seed <= runs; ++seed) {
    const auto r = evaluate_inherent_fairness(p, config.spec("person-coverage"), config.schema,
                                              80, q, static_cast<std::uint64_t>(seed));
    saturation.push_back(saturation_point(r.coverage->curve));
    max_final = std::max(max_final, to_double(r.coverage->normalized));
  }
  std::sort(saturation.begin(), saturation.end());
  const auto sat = saturation[saturation.size() / 2];

  std::ostringstream d;
  d << "median min beta: leader " << leader << " (band 4-7), poor " << poor
    << " (band 13-20); coverage max " << max_final << " (< 0.4), median saturation " << sat
    << " (band 10-40)";
  return {leader >= 4 && leader <= 7 && poor >= 13 && poor <= 20 && max_final > 0.0 &&
              max_final < 0.4 && sat >= 10 && sat <= 40,
          d.str()};
}

}  // namespace
}  // namespace fairmon

int main() {
  using namespace fairmon;
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"1 exhaustive oracle equivalence (n<=12, CG<=3, beta<=4)", exhaustive_oracle},
      {"2 eleven-item example, beta (6,6) vs (6,5)", eleven_item_example},
      {"3 minimal uniform beta lower bound", lower_bound},
      {"4 frequency-gap bound", frequency_gap},
      {"5 enforcement safety", enforcement_safety},
      {"6 minimum interference", minimum_interference},
      {"7 first injection trigger", example_trigger},
      {"8 all-paired coverage oracle", coverage_oracle},
      {"9 determinism", determinism},
      {"10 calibrated inherent-fairness ranges", calibrated_profiles},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << name << "  -- " << r.detail << std::endl;
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
