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

#ifndef FAIRMON_IO_HPP
#define FAIRMON_IO_HPP

#include "fairmon/coverage.hpp"
#include "fairmon/enforcement.hpp"
#include "fairmon/generator.hpp"
#include "fairmon/monitors.hpp"
#include "fairmon/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fairmon {

using ordered_json = nlohmann::ordered_json;

/// Enforcement section of a configuration file.
struct EnforcementSettings {
  std::string spec;
  std::string injection_template{kDefaultInjectionTemplate};
  std::uint64_t seed = 0;
  ZeroLabelPolicy zero_label_policy = ZeroLabelPolicy::SkipUpdate;
  ViolationPolicy violation_policy = ViolationPolicy::LogAndContinue;
  std::size_t history_capacity = 64;
};

/// Axis definitions plus the specs to check, validated against each other.
struct Config {
  Schema schema;
  std::vector<FairnessSpec> specs;
  std::optional<EnforcementSettings> enforcement;

  const FairnessSpec& spec(std::string_view name) const;

  /// Builds the enforcement configuration; `spec_name` overrides the file.
  EnforcementConfig enforcement_config(std::optional<std::string> spec_name = {}) const;
};

// -- reading -------------------------------------------------------------------
// All readers reject unknown keys and report ParseError with 1-based
// line/column positions.

Config parse_config(std::string_view text, const std::string& source = "config");
Config read_config(const std::filesystem::path& path);

/// JSON Lines, one LabeledItem per non-blank line. When `schema` is given,
/// labels outside their axis range are rejected.
Trace parse_trace(std::istream& in, const std::string& source = "trace",
                  const Schema* schema = nullptr);
Trace read_trace(const std::filesystem::path& path, const Schema* schema = nullptr);

GeneratorProfile parse_profile(std::string_view text, const std::string& source = "profile");
GeneratorProfile read_profile(const std::filesystem::path& path);

/// JSON Lines of {"prompt", "tag", "related_to", "bias"}; a line that is not
/// a JSON object is taken verbatim as prompt text without metadata.
std::vector<PromptRequest> parse_prompts(std::istream& in,
                                         const std::string& source = "prompts");
std::vector<PromptRequest> read_prompts(const std::filesystem::path& path);

// -- writing -------------------------------------------------------------------

ordered_json to_json(const LabeledItem& item);
void write_trace(std::ostream& out, const Trace& trace);

ordered_json to_json(const Verdict& verdict, const ConceptGrouping* target = nullptr);
ordered_json to_json(const CoverageReport& report);
ordered_json to_json(const EnforcementStats& stats, const ConceptGrouping* target = nullptr);
ordered_json to_json(const AuditRecord& record);
ordered_json to_json(const PromptRequest& prompt);

}  // namespace fairmon

#endif  // FAIRMON_IO_HPP
