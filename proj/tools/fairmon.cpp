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

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_format(CLI::App* cmd, std::string& format, std::vector<std::string> choices) {
  cmd->add_option("--format", format, "Report format")->check(CLI::IsMember(choices));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fairmon::cli;

  CLI::App app{"Fairness monitoring and enforcement for generated-content streams"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fairmon 0.1.0");

  CheckOptions check;
  std::string check_format = "human";
  auto* check_cmd = app.add_subcommand("check", "Check a labelled trace against every spec");
  check_cmd->add_option("--config", check.config, "Groupings and specs JSON")
      ->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--trace", check.trace, "Trace JSONL")
      ->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--spec", check.spec, "Only check this spec");
  add_format(check_cmd, check_format, {"human", "json"});

  EnforceOptions enforce;
  auto* enforce_cmd = app.add_subcommand("enforce", "Run the online enforcer over a prompt stream");
  enforce_cmd->add_option("--config", enforce.config)->required()->check(CLI::ExistingFile);
  auto* profile_opt =
      enforce_cmd->add_option("--profile", enforce.profile, "Simulator profile JSON")
          ->check(CLI::ExistingFile);
  auto* endpoint_opt =
      enforce_cmd->add_option("--endpoint", enforce.endpoint, "Base URL of external adapters");
  profile_opt->excludes(endpoint_opt);
  enforce_cmd->add_option("--prompts", enforce.prompts, "Prompt JSONL")
      ->required()->check(CLI::ExistingFile);
  enforce_cmd->add_option("--out-trace", enforce.out_trace)->required();
  enforce_cmd->add_option("--out-stats", enforce.out_stats)->required();
  enforce_cmd->add_option("--audit", enforce.audit, "Write every lookahead decision as JSONL");
  enforce_cmd->add_option("--spec", enforce.spec, "beta_bounded spec to enforce");
  enforce_cmd->add_option("--seed", enforce.seed, "Seed for the enforcer's tie-breaking");
  enforce_cmd->add_option("--simulator-seed", enforce.simulator_seed);
  enforce_cmd->add_flag("--strict-zero-policy", enforce.strict_zero_policy,
                        "Decrement every counter on items unrelated to the target axis");
  enforce_cmd->add_flag("--halt-on-violation", enforce.halt_on_violation);

  CoverageOptions coverage;
  std::string coverage_format = "human";
  auto* coverage_cmd = app.add_subcommand("coverage", "Emit the pairwise coverage curve");
  coverage_cmd->add_option("--config", coverage.config)->required()->check(CLI::ExistingFile);
  coverage_cmd->add_option("--trace", coverage.trace)->required()->check(CLI::ExistingFile);
  coverage_cmd->add_option("--out-csv", coverage.out_csv);
  coverage_cmd->add_option("--spec", coverage.spec, "all_paired spec to use");
  add_format(coverage_cmd, coverage_format, {"human", "json", "csv"});

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Sample a labelled trace from a profile");
  simulate_cmd->add_option("--profile", simulate.profile)->required()->check(CLI::ExistingFile);
  simulate_cmd->add_option("--prompts", simulate.prompts)->required()->check(CLI::ExistingFile);
  simulate_cmd->add_option("--n", simulate.n, "Number of samples (default: one per prompt)");
  simulate_cmd->add_option("--out", simulate.out)->required();
  simulate_cmd->add_option("--config", simulate.config, "Range-check the profile")
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--seed", simulate.seed);

  InherentOptions inherent;
  std::string inherent_format = "human";
  auto* inherent_cmd =
      app.add_subcommand("inherent", "Sample with neutral prompts and check the result");
  inherent_cmd->add_option("--config", inherent.config)->required()->check(CLI::ExistingFile);
  inherent_cmd->add_option("--profile", inherent.profile)->required()->check(CLI::ExistingFile);
  inherent_cmd->add_option("--prompts", inherent.prompts)->required()->check(CLI::ExistingFile);
  inherent_cmd->add_option("--n", inherent.n);
  inherent_cmd->add_option("--spec", inherent.spec);
  inherent_cmd->add_option("--seed", inherent.seed);
  inherent_cmd->add_option("--out-trace", inherent.out_trace);
  add_format(inherent_cmd, inherent_format, {"human", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  if (*check_cmd) {
    check.format = parse_format(check_format);
    return cmd_check(check, std::cout, std::cerr);
  }
  if (*enforce_cmd) return cmd_enforce(enforce, std::cout, std::cerr);
  if (*coverage_cmd) {
    coverage.format = parse_format(coverage_format);
    return cmd_coverage(coverage, std::cout, std::cerr);
  }
  if (*simulate_cmd) return cmd_simulate(simulate, std::cout, std::cerr);
  inherent.format = parse_format(inherent_format);
  return cmd_inherent(inherent, std::cout, std::cerr);
}
