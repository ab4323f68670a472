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

#include "fairmon/cli.hpp"

#include "fairmon/coverage.hpp"
#include "fairmon/enforcement.hpp"
#include "fairmon/generator.hpp"
#include "fairmon/io.hpp"
#include "fairmon/monitors.hpp"
#include "fairmon/trace_ops.hpp"
#ifdef FAIRMON_WITH_HTTP
#include "fairmon/http_adapters.hpp"
#endif

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace fairmon::cli {

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const AdapterError& e) {
    err << "adapter error: " << e.what() << '\n';
    return kExitAdapterError;
  } catch (const Error& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path.string(), 0, 0, "cannot open for writing");
  out << contents;
  if (!out) throw ParseError(path.string(), 0, 0, "write failed");
}

std::string decimal(const Rational& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
  return buf;
}

std::string value_label(const ConceptGrouping& axis, GroupValue v) {
  std::string text = std::to_string(v);
  if (axis.contains(v)) text += " (" + axis.value_name(v) + ")";
  return text;
}

void render_verdict(std::ostream& out, const FairnessSpec& spec, const Verdict& verdict,
                    const Schema& schema) {
  out << spec.name << "  [" << to_string(spec.mode) << "]  " << to_string(verdict.outcome)
      << "  (n=" << verdict.projected_length
      << ", condition-filtered=" << verdict.condition_filtered
      << ", target-unrelated=" << verdict.target_unrelated << ")\n";
  if (verdict.outcome == Outcome::Inconclusive) {
    out << "  trace too short: projected length must exceed the largest beta\n";
  }
  const auto& first_axis = schema.at(spec.target_axis());
  for (const auto& v : verdict.violations) {
    out << "  " << to_string(v.kind) << "  value " << value_label(first_axis, v.group_value);
    if (v.paired_value) {
      const auto& second = schema.at(spec.target_axes.at(1));
      out << " x " << value_label(second, *v.paired_value);
    }
    if (v.position) out << " at m=" << *v.position << " (source #" << *v.source_index << ")";
    if (v.required_by) out << ", required by m=" << *v.required_by;
    out << '\n';
  }
  if (!verdict.witnesses.empty()) {
    out << "  first occurrences:";
    for (const auto& w : verdict.witnesses) out << ' ' << w.group_value << '@' << w.position;
    out << '\n';
  }
}

void render_coverage(std::ostream& out, const FairnessSpec& spec,
                     const CoverageReport& report) {
  out << spec.name << "  [" << to_string(spec.mode) << ", t=" << report.t_way << "]  "
      << (report.satisfied() ? "satisfied" : "violated") << "  (n=" << report.projected_length
      << ")\n";
  out << "  coverage " << report.covered.size() << '/' << report.total << " = "
      << decimal(report.normalized) << ", saturation point " << saturation_point(report.curve)
      << '\n';
  for (const auto& combo : report.missing) {
    out << "  missing";
    for (std::size_t i = 0; i < combo.axes.size(); ++i) {
      out << ' ' << combo.axes[i] << '=' << combo.values[i];
    }
    out << '\n';
  }
}

const FairnessSpec& pick_spec(const Config& config, const std::optional<std::string>& name,
                              FairnessMode mode) {
  if (name) return config.spec(*name);
  for (const auto& spec : config.specs) {
    if (spec.mode == mode) return spec;
  }
  throw SpecError("configuration has no " + std::string(to_string(mode)) + " spec");
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "human") return Format::Human;
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw SpecError("unknown format '" + text + "'");
}

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config config = read_config(options.config);
    const Trace trace = read_trace(options.trace, &config.schema);
    std::vector<const FairnessSpec*> specs;
    if (options.spec) {
      specs.push_back(&config.spec(*options.spec));
    } else {
      for (const auto& s : config.specs) specs.push_back(&s);
    }
    if (specs.empty()) throw SpecError("configuration defines no specs");

    bool violated = false;
    bool inconclusive = false;
    ordered_json results = ordered_json::array();
    std::ostringstream human;
    for (const auto* spec : specs) {
      ordered_json entry;
      entry["spec"] = spec->name;
      entry["mode"] = std::string(to_string(spec->mode));
      Outcome outcome = Outcome::Satisfied;
      if (spec->mode == FairnessMode::AllPaired) {
        const auto report = check_all_paired(trace, *spec, config.schema);
        outcome = report.satisfied() ? Outcome::Satisfied : Outcome::Violated;
        entry["outcome"] = std::string(to_string(outcome));
        entry["coverage"] = to_json(report);
        render_coverage(human, *spec, report);
      } else {
        Verdict verdict;
        switch (spec->mode) {
          case FairnessMode::Eventual:
            verdict = check_eventual(trace, *spec, config.schema);
            break;
          case FairnessMode::BetaBounded:
            verdict = check_beta_bounded(trace, *spec, config.schema);
            break;
          default:
            verdict = check_paired(trace, *spec, config.schema);
            break;
        }
        outcome = verdict.outcome;
        entry["outcome"] = std::string(to_string(outcome));
        entry["verdict"] = to_json(verdict, &config.schema.at(spec->target_axis()));
        render_verdict(human, *spec, verdict, config.schema);
      }
      violated |= outcome == Outcome::Violated;
      inconclusive |= outcome == Outcome::Inconclusive;
      results.push_back(std::move(entry));
    }
    const int code = violated ? kExitViolated : inconclusive ? kExitInconclusive : kExitOk;
    if (options.format == Format::Json) {
      ordered_json doc;
      doc["trace_length"] = trace.size();
      doc["results"] = std::move(results);
      doc["exit_code"] = code;
      out << doc.dump(2) << '\n';
    } else {
      out << human.str();
    }
    return code;
  });
}

int cmd_enforce(const EnforceOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config config = read_config(options.config);
    EnforcementConfig enforcement = config.enforcement_config(options.spec);
    if (options.seed) enforcement.rng_seed = *options.seed;
    if (options.strict_zero_policy) enforcement.zero_label_policy = ZeroLabelPolicy::DecrementAll;
    if (options.halt_on_violation) enforcement.violation_policy = ViolationPolicy::Halt;
    const auto prompts = read_prompts(options.prompts);

    std::unique_ptr<Generator> generator;
    std::unique_ptr<PromptOracle> oracle;
    std::unique_ptr<Classifier> classifier;
    if (options.endpoint) {
#ifdef FAIRMON_WITH_HTTP
      const auto endpoint = HttpEndpoint::from_environment(*options.endpoint);
      generator = std::make_unique<HttpGenerator>(endpoint);
      oracle = std::make_unique<HttpPromptOracle>(endpoint);
      classifier = std::make_unique<HttpClassifier>(endpoint);
#else
      throw SpecError("built without HTTP adapter support");
#endif
    } else {
      if (!options.profile) throw SpecError("enforce needs --profile or --endpoint");
      GeneratorProfile profile = read_profile(*options.profile);
      profile.validate(&config.schema);
      const auto seed = options.simulator_seed.value_or(profile.seed);
      generator = std::make_unique<Simulator>(std::move(profile), seed);
      oracle = std::make_unique<MetadataOracle>();
      classifier = std::make_unique<LabelClassifier>();
    }

    std::ostringstream audit;
    std::function<void(const AuditRecord&)> sink;
    if (options.audit) {
      sink = [&audit](const AuditRecord& r) { audit << to_json(r).dump() << '\n'; };
    }
    const auto run = run_enforcement(enforcement, config.schema, prompts,
                                     {*generator, *oracle, *classifier}, sink);

    std::ostringstream trace_text;
    write_trace(trace_text, run.trace);
    write_file(options.out_trace, trace_text.str());
    const auto& target = config.schema.at(enforcement.spec.target_axis());
    write_file(options.out_stats, to_json(run.stats, &target).dump(2) + "\n");
    if (options.audit) write_file(*options.audit, audit.str());

    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6f", run.stats.injection_rate);
    out << "spec " << enforcement.spec.name << ": steps=" << run.stats.steps
        << " related=" << run.stats.related_steps << " injections=" << run.stats.injections
        << " injection_rate=" << rate << " violations=" << run.stats.violations.size()
        << (run.stats.halted ? " (halted)" : "") << '\n';
    return run.stats.violations.empty() ? kExitOk : kExitViolated;
  });
}

int cmd_coverage(const CoverageOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config config = read_config(options.config);
    const Trace trace = read_trace(options.trace, &config.schema);
    const auto& spec = pick_spec(config, options.spec, FairnessMode::AllPaired);
    const auto report = check_all_paired(trace, spec, config.schema);
    if (options.out_csv) {
      std::ostringstream csv;
      write_curve_csv(csv, report.curve);
      write_file(*options.out_csv, csv.str());
    }
    switch (options.format) {
      case Format::Json: {
        ordered_json doc;
        doc["spec"] = spec.name;
        doc["coverage"] = to_json(report);
        out << doc.dump(2) << '\n';
        break;
      }
      case Format::Csv:
        write_curve_csv(out, report.curve);
        break;
      case Format::Human:
        render_coverage(out, spec, report);
        break;
    }
    return report.satisfied() ? kExitOk : kExitViolated;
  });
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    GeneratorProfile profile = read_profile(options.profile);
    if (options.config) {
      const Config config = read_config(*options.config);
      profile.validate(&config.schema);
    }
    const auto prompts = read_prompts(options.prompts);
    const std::size_t n = options.n.value_or(prompts.size());
    if (n > 0 && prompts.empty()) throw PreconditionError("no prompts to sample from");
    const auto seed = options.seed.value_or(profile.seed);
    Simulator simulator(std::move(profile), seed);
    Trace trace;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& prompt = prompts[i % prompts.size()];
      LabeledItem item = simulator.sample(prompt);
      if (prompt.meta.related_to) item.meta.related = true;
      trace.push_back(std::move(item));
    }
    std::ostringstream text;
    write_trace(text, trace);
    write_file(options.out, text.str());
    out << "wrote " << trace.size() << " items to " << options.out.string() << '\n';
    return kExitOk;
  });
}

int cmd_inherent(const InherentOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config config = read_config(options.config);
    const GeneratorProfile profile = read_profile(options.profile);
    const auto prompts = read_prompts(options.prompts);
    const FairnessSpec& spec =
        options.spec ? config.spec(*options.spec) : config.specs.at(0);
    const auto report = evaluate_inherent_fairness(profile, spec, config.schema, options.n,
                                                   prompts, options.seed);
    if (options.out_trace) {
      std::ostringstream text;
      write_trace(text, report.trace);
      write_file(*options.out_trace, text.str());
    }
    if (options.format == Format::Json) {
      ordered_json doc;
      doc["spec"] = spec.name;
      doc["samples"] = report.trace.size();
      doc["verdict"] = to_json(report.verdict, &config.schema.at(spec.target_axis()));
      doc["minimal_uniform_beta"] =
          report.minimal_beta ? ordered_json(*report.minimal_beta) : ordered_json(nullptr);
      if (report.coverage) doc["coverage"] = to_json(*report.coverage);
      out << doc.dump(2) << '\n';
    } else {
      out << "sampled " << report.trace.size()
          << " items with neutral prompts (finite-sample evidence only)\n";
      FairnessSpec shown = spec;
      if (spec.target_axes.size() == 1) shown.mode = FairnessMode::Eventual;
      if (report.coverage) {
        render_coverage(out, shown, *report.coverage);
      } else {
        render_verdict(out, shown, report.verdict, config.schema);
        out << "  minimal uniform beta: "
            << (report.minimal_beta ? std::to_string(*report.minimal_beta) : "none") << '\n';
      }
    }
    return report.verdict.outcome == Outcome::Satisfied ? kExitOk : kExitViolated;
  });
}

}  // namespace fairmon::cli
