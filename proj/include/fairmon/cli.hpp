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

#ifndef FAIRMON_CLI_HPP
#define FAIRMON_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace fairmon::cli {

// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInputError = 3;
inline constexpr int kExitAdapterError = 4;

enum class Format { Human, Json, Csv };

Format parse_format(const std::string& text);

struct CheckOptions {
  std::filesystem::path config;
  std::filesystem::path trace;
  Format format = Format::Human;
  /// Restrict to one spec; all specs when unset.
  std::optional<std::string> spec;
};

struct EnforceOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> profile;
  std::filesystem::path prompts;
  std::filesystem::path out_trace;
  std::filesystem::path out_stats;
  std::optional<std::filesystem::path> audit;
  /// Base URL of the external generator / classifier / bias services.
  std::optional<std::string> endpoint;
  std::optional<std::string> spec;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> simulator_seed;
  /// Use DecrementAll for items labelled 0 on the target axis.
  bool strict_zero_policy = false;
  bool halt_on_violation = false;
};

struct CoverageOptions {
  std::filesystem::path config;
  std::filesystem::path trace;
  std::optional<std::filesystem::path> out_csv;
  std::optional<std::string> spec;
  Format format = Format::Human;
};

struct SimulateOptions {
  std::filesystem::path profile;
  std::filesystem::path prompts;
  /// Number of samples; defaults to one per prompt.
  std::optional<std::size_t> n;
  std::filesystem::path out;
  /// Optional configuration used to range-check the profile.
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
};

struct InherentOptions {
  std::filesystem::path config;
  std::filesystem::path profile;
  std::filesystem::path prompts;
  std::size_t n = 100;
  std::optional<std::string> spec;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_trace;
  Format format = Format::Human;
};

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err);
int cmd_enforce(const EnforceOptions& options, std::ostream& out, std::ostream& err);
int cmd_coverage(const CoverageOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_inherent(const InherentOptions& options, std::ostream& out, std::ostream& err);

}  // namespace fairmon::cli

#endif  // FAIRMON_CLI_HPP
