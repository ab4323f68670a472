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

#include "fairmon/io.hpp"

#include "fairmon/trace_ops.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fairmon {

namespace {

using json = nlohmann::json;

struct Where {
  std::string source;
  std::size_t line = 0;
};

[[noreturn]] void fail(const Where& where, const std::string& message) {
  throw ParseError(where.source, where.line, 0, message);
}

// Converts a 1-based byte offset into a 1-based line/column pair.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_document(std::string_view text, const Where& where) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    if (where.line > 0) {
      line = where.line;
      column = e.byte;
    }
    throw ParseError(where.source, line, column, "malformed JSON");
  }
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const Where& where, std::string_view context) {
  if (!obj.is_object()) fail(where, std::string(context) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(where, "unknown key '" + key + "' in " + std::string(context));
    }
  }
}

const json& require(const json& obj, const char* key, const Where& where,
                    std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail(where, std::string(context) + " lacks required key '" + key + "'");
  }
  return *it;
}

std::int64_t get_int(const json& v, const Where& where, std::string_view what) {
  if (!v.is_number_integer()) fail(where, std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

int get_small_int(const json& v, const Where& where, std::string_view what) {
  const auto x = get_int(v, where, what);
  if (x < -1'000'000'000 || x > 1'000'000'000) {
    fail(where, std::string(what) + " is out of range");
  }
  return static_cast<int>(x);
}

std::string get_string(const json& v, const Where& where, std::string_view what) {
  if (!v.is_string()) fail(where, std::string(what) + " must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const Where& where, std::string_view what) {
  if (!v.is_boolean()) fail(where, std::string(what) + " must be a boolean");
  return v.get<bool>();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string rational_text(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

ConceptGrouping parse_grouping(const json& obj, const Where& where) {
  check_keys(obj, {"name", "group_count", "value_names"}, where, "grouping");
  ConceptGrouping g;
  g.name = get_string(require(obj, "name", where, "grouping"), where, "grouping name");
  g.group_count = get_small_int(require(obj, "group_count", where, "grouping"), where,
                                "group_count");
  if (auto it = obj.find("value_names"); it != obj.end()) {
    if (!it->is_array()) fail(where, "value_names must be an array");
    for (const auto& name : *it) g.value_names.push_back(get_string(name, where, "value name"));
  }
  return g;
}

FairnessSpec parse_spec(const json& obj, const Where& where, std::size_t ordinal) {
  check_keys(obj,
             {"name", "condition_axis", "condition_value", "target_axis", "target_axes",
              "mode", "beta", "t_way"},
             where, "spec");
  FairnessSpec spec;
  spec.name = obj.contains("name") ? get_string(obj["name"], where, "spec name")
                                   : "spec" + std::to_string(ordinal);
  spec.condition_axis =
      get_string(require(obj, "condition_axis", where, "spec"), where, "condition_axis");
  spec.condition_value = get_small_int(require(obj, "condition_value", where, "spec"),
                                       where, "condition_value");
  spec.mode = parse_mode(get_string(require(obj, "mode", where, "spec"), where, "mode"));
  const bool single = obj.contains("target_axis");
  const bool multi = obj.contains("target_axes");
  if (single == multi) fail(where, "spec needs exactly one of target_axis / target_axes");
  if (single) {
    spec.target_axes.push_back(get_string(obj["target_axis"], where, "target_axis"));
  } else {
    if (!obj["target_axes"].is_array()) fail(where, "target_axes must be an array");
    for (const auto& a : obj["target_axes"]) {
      spec.target_axes.push_back(get_string(a, where, "target axis"));
    }
  }
  if (auto it = obj.find("beta"); it != obj.end()) {
    if (!it->is_array()) fail(where, "beta must be an array");
    for (const auto& b : *it) spec.beta.push_back(get_small_int(b, where, "beta entry"));
  }
  if (auto it = obj.find("t_way"); it != obj.end()) {
    spec.t_way = get_small_int(*it, where, "t_way");
  }
  return spec;
}

ZeroLabelPolicy parse_zero_policy(const std::string& text, const Where& where) {
  if (text == "skip_update") return ZeroLabelPolicy::SkipUpdate;
  if (text == "decrement_all") return ZeroLabelPolicy::DecrementAll;
  fail(where, "unknown zero_label_policy '" + text + "'");
}

ViolationPolicy parse_violation_policy(const std::string& text, const Where& where) {
  if (text == "log_and_continue") return ViolationPolicy::LogAndContinue;
  if (text == "halt") return ViolationPolicy::Halt;
  fail(where, "unknown violation_policy '" + text + "'");
}

}  // namespace

// -- config --------------------------------------------------------------------

const FairnessSpec& Config::spec(std::string_view name) const {
  auto it = std::find_if(specs.begin(), specs.end(),
                         [&](const FairnessSpec& s) { return s.name == name; });
  if (it == specs.end()) throw SpecError("no spec named '" + std::string(name) + "'");
  return *it;
}

EnforcementConfig Config::enforcement_config(std::optional<std::string> spec_name) const {
  EnforcementSettings settings = enforcement.value_or(EnforcementSettings{});
  if (spec_name) settings.spec = *spec_name;
  EnforcementConfig config;
  if (settings.spec.empty()) {
    auto it = std::find_if(specs.begin(), specs.end(), [](const FairnessSpec& s) {
      return s.mode == FairnessMode::BetaBounded;
    });
    if (it == specs.end()) throw SpecError("configuration has no beta_bounded spec to enforce");
    config.spec = *it;
  } else {
    config.spec = spec(settings.spec);
  }
  config.injection_template = settings.injection_template;
  config.rng_seed = settings.seed;
  config.zero_label_policy = settings.zero_label_policy;
  config.violation_policy = settings.violation_policy;
  config.history_capacity = settings.history_capacity;
  config.validate(schema);
  return config;
}

Config parse_config(std::string_view text, const std::string& source) {
  const Where where{source, 0};
  const json doc = parse_document(text, where);
  check_keys(doc, {"groupings", "specs", "enforcement"}, where, "configuration");
  Config config;
  const auto& groupings = require(doc, "groupings", where, "configuration");
  if (!groupings.is_array()) fail(where, "groupings must be an array");
  for (const auto& g : groupings) config.schema.add(parse_grouping(g, where));
  if (auto it = doc.find("specs"); it != doc.end()) {
    if (!it->is_array()) fail(where, "specs must be an array");
    for (const auto& s : *it) {
      config.specs.push_back(parse_spec(s, where, config.specs.size() + 1));
      config.specs.back().validate(config.schema);
    }
  }
  for (std::size_t i = 0; i < config.specs.size(); ++i) {
    for (std::size_t j = i + 1; j < config.specs.size(); ++j) {
      if (config.specs[i].name == config.specs[j].name) {
        throw SpecError("duplicate spec name '" + config.specs[i].name + "'");
      }
    }
  }
  if (auto it = doc.find("enforcement"); it != doc.end()) {
    const auto& e = *it;
    check_keys(e,
               {"spec", "injection_template", "seed", "zero_label_policy",
                "violation_policy", "history_capacity"},
               where, "enforcement");
    EnforcementSettings s;
    if (e.contains("spec")) s.spec = get_string(e["spec"], where, "enforcement spec");
    if (e.contains("injection_template")) {
      s.injection_template = get_string(e["injection_template"], where, "injection_template");
    }
    if (e.contains("seed")) {
      if (!e["seed"].is_number_unsigned()) fail(where, "seed must be a non-negative integer");
      s.seed = e["seed"].get<std::uint64_t>();
    }
    if (e.contains("zero_label_policy")) {
      s.zero_label_policy = parse_zero_policy(
          get_string(e["zero_label_policy"], where, "zero_label_policy"), where);
    }
    if (e.contains("violation_policy")) {
      s.violation_policy = parse_violation_policy(
          get_string(e["violation_policy"], where, "violation_policy"), where);
    }
    if (e.contains("history_capacity")) {
      const auto cap = get_int(e["history_capacity"], where, "history_capacity");
      if (cap < 0) fail(where, "history_capacity must be non-negative");
      s.history_capacity = static_cast<std::size_t>(cap);
    }
    config.enforcement = s;
  }
  return config;
}

Config read_config(const std::filesystem::path& path) {
  return parse_config(slurp(path), path.string());
}

// -- trace ---------------------------------------------------------------------

Trace parse_trace(std::istream& in, const std::string& source, const Schema* schema) {
  Trace trace;
  std::string line;
  Where where{source, 0};
  while (std::getline(in, line)) {
    ++where.line;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json obj = parse_document(line, where);
    check_keys(obj, {"index", "prompt", "labels", "meta", "payload", "injected"}, where,
               "trace item");
    LabeledItem item;
    const std::size_t expected = trace.size() + 1;
    if (auto it = obj.find("index"); it != obj.end()) {
      const auto index = get_int(*it, where, "index");
      if (index != static_cast<std::int64_t>(expected)) {
        fail(where, "index " + std::to_string(index) + " where " +
                        std::to_string(expected) + " was expected");
      }
    }
    if (auto it = obj.find("prompt"); it != obj.end() && !it->is_null()) {
      item.prompt = get_string(*it, where, "prompt");
    }
    const auto& labels = require(obj, "labels", where, "trace item");
    if (!labels.is_object()) fail(where, "labels must be an object");
    for (const auto& [axis, value] : labels.items()) {
      const int v = get_small_int(value, where, "label '" + axis + "'");
      if (schema != nullptr) {
        if (const auto* g = schema->find(axis); g != nullptr && !g->contains(v)) {
          fail(where, "label " + std::to_string(v) + " on axis '" + axis +
                          "' outside [0.." + std::to_string(g->group_count) + "]");
        }
      }
      if (v < 0) fail(where, "label '" + axis + "' is negative");
      item.labels[axis] = v;
    }
    if (auto it = obj.find("meta"); it != obj.end() && !it->is_null()) {
      check_keys(*it, {"related", "biased"}, where, "meta");
      if (auto r = it->find("related"); r != it->end() && !r->is_null()) {
        item.meta.related = get_bool(*r, where, "meta.related");
      }
      if (auto b = it->find("biased"); b != it->end() && !b->is_null()) {
        item.meta.biased = get_small_int(*b, where, "meta.biased");
      }
    }
    if (auto it = obj.find("payload"); it != obj.end() && !it->is_null()) {
      item.payload_ref = get_string(*it, where, "payload");
    }
    if (auto it = obj.find("injected"); it != obj.end()) {
      item.injected = get_bool(*it, where, "injected");
    }
    trace.push_back(std::move(item));
  }
  return trace;
}

Trace read_trace(const std::filesystem::path& path, const Schema* schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return parse_trace(in, path.string(), schema);
}

ordered_json to_json(const LabeledItem& item) {
  ordered_json j;
  j["index"] = item.index;
  j["prompt"] = item.prompt;
  j["labels"] = ordered_json::object();
  for (const auto& [axis, value] : item.labels) j["labels"][axis] = value;
  j["meta"] = {{"related", nullptr}, {"biased", nullptr}};
  if (item.meta.related) j["meta"]["related"] = *item.meta.related;
  if (item.meta.biased) j["meta"]["biased"] = *item.meta.biased;
  j["payload"] = item.payload_ref ? ordered_json(*item.payload_ref) : ordered_json(nullptr);
  j["injected"] = item.injected;
  return j;
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& item : trace.items) out << to_json(item).dump() << '\n';
}

// -- profile -------------------------------------------------------------------

GeneratorProfile parse_profile(std::string_view text, const std::string& source) {
  const Where where{source, 0};
  const json doc = parse_document(text, where);
  check_keys(doc, {"axes", "tags", "default_tag", "compliance", "seed"}, where, "profile");
  GeneratorProfile profile;
  const auto& axes = require(doc, "axes", where, "profile");
  if (!axes.is_array()) fail(where, "axes must be an array");
  for (const auto& a : axes) profile.axes.push_back(get_string(a, where, "axis"));
  const auto& tags = require(doc, "tags", where, "profile");
  if (!tags.is_object()) fail(where, "tags must be an object");
  for (const auto& [tag, body] : tags.items()) {
    check_keys(body, {"tuples", "weights"}, where, "tag '" + tag + "'");
    CategoricalDistribution dist;
    const auto& tuples = require(body, "tuples", where, "tag");
    const auto& weights = require(body, "weights", where, "tag");
    if (!tuples.is_array() || !weights.is_array()) {
      fail(where, "tag '" + tag + "' needs tuple and weight arrays");
    }
    for (const auto& t : tuples) {
      if (!t.is_array()) fail(where, "tuples must be arrays of group values");
      std::vector<GroupValue> tuple;
      for (const auto& v : t) tuple.push_back(get_small_int(v, where, "tuple value"));
      dist.tuples.push_back(std::move(tuple));
    }
    for (const auto& w : weights) {
      if (!w.is_number()) fail(where, "weights must be numbers");
      dist.weights.push_back(w.get<double>());
    }
    profile.tags.emplace(tag, std::move(dist));
  }
  if (auto it = doc.find("default_tag"); it != doc.end() && !it->is_null()) {
    profile.default_tag = get_string(*it, where, "default_tag");
  }
  if (auto it = doc.find("compliance"); it != doc.end()) {
    if (it->is_string()) {
      const auto c = it->get<std::string>();
      if (c == "compliant") {
        profile.compliance = {ComplianceKind::Compliant, 1.0};
      } else if (c == "ignore_injection") {
        profile.compliance = {ComplianceKind::IgnoreInjection, 0.0};
      } else {
        fail(where, "unknown compliance '" + c + "'");
      }
    } else {
      check_keys(*it, {"partial"}, where, "compliance");
      const auto& p = require(*it, "partial", where, "compliance");
      if (!p.is_number()) fail(where, "partial compliance must be a probability");
      profile.compliance = {ComplianceKind::Partial, p.get<double>()};
    }
  }
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) fail(where, "seed must be a non-negative integer");
    profile.seed = it->get<std::uint64_t>();
  }
  try {
    profile.validate();
  } catch (const SpecError& e) {
    fail(where, e.what());
  }
  return profile;
}

GeneratorProfile read_profile(const std::filesystem::path& path) {
  return parse_profile(slurp(path), path.string());
}

// -- prompts -------------------------------------------------------------------

std::vector<PromptRequest> parse_prompts(std::istream& in, const std::string& source) {
  std::vector<PromptRequest> prompts;
  std::string line;
  Where where{source, 0};
  while (std::getline(in, line)) {
    ++where.line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] != '{') {
      prompts.push_back({line, {}});
      continue;
    }
    const json obj = parse_document(line, where);
    check_keys(obj, {"prompt", "tag", "related_to", "bias"}, where, "prompt");
    PromptRequest request;
    request.text = get_string(require(obj, "prompt", where, "prompt"), where, "prompt");
    if (auto it = obj.find("tag"); it != obj.end() && !it->is_null()) {
      request.meta.tag = get_string(*it, where, "tag");
    }
    if (auto it = obj.find("related_to"); it != obj.end() && !it->is_null()) {
      check_keys(*it, {"axis", "value"}, where, "related_to");
      request.meta.related_to = std::make_pair(
          get_string(require(*it, "axis", where, "related_to"), where, "related_to.axis"),
          get_small_int(require(*it, "value", where, "related_to"), where,
                        "related_to.value"));
    }
    if (auto it = obj.find("bias"); it != obj.end() && !it->is_null()) {
      if (!it->is_object()) fail(where, "bias must be an object");
      for (const auto& [axis, value] : it->items()) {
        request.meta.bias[axis] =
            value.is_null() ? std::nullopt
                            : std::optional<GroupValue>(
                                  get_small_int(value, where, "bias '" + axis + "'"));
      }
    }
    prompts.push_back(std::move(request));
  }
  return prompts;
}

std::vector<PromptRequest> read_prompts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
  return parse_prompts(in, path.string());
}

ordered_json to_json(const PromptRequest& prompt) {
  ordered_json j;
  j["prompt"] = prompt.text;
  j["tag"] = prompt.meta.tag ? ordered_json(*prompt.meta.tag) : ordered_json(nullptr);
  if (prompt.meta.related_to) {
    j["related_to"] = {{"axis", prompt.meta.related_to->first},
                       {"value", prompt.meta.related_to->second}};
  } else {
    j["related_to"] = nullptr;
  }
  j["bias"] = ordered_json::object();
  for (const auto& [axis, value] : prompt.meta.bias) {
    j["bias"][axis] = value ? ordered_json(*value) : ordered_json(nullptr);
  }
  return j;
}

// -- reports -------------------------------------------------------------------

namespace {

template <typename T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json value_name_json(const ConceptGrouping* axis, GroupValue v) {
  if (axis == nullptr || !axis->contains(v)) return nullptr;
  return axis->value_name(v);
}

}  // namespace

ordered_json to_json(const Verdict& verdict, const ConceptGrouping* target) {
  ordered_json j;
  j["outcome"] = std::string(to_string(verdict.outcome));
  j["satisfied"] = verdict.satisfied();
  j["projected_length"] = verdict.projected_length;
  j["condition_filtered"] = verdict.condition_filtered;
  j["target_unrelated"] = verdict.target_unrelated;
  j["violations"] = ordered_json::array();
  for (const auto& v : verdict.violations) {
    ordered_json e;
    e["group_value"] = v.group_value;
    e["value_name"] = v.kind == ViolationKind::MissingPair ? ordered_json(nullptr)
                                                          : value_name_json(target, v.group_value);
    e["kind"] = std::string(to_string(v.kind));
    e["position"] = optional_json(v.position);
    e["required_by"] = optional_json(v.required_by);
    e["source_index"] = optional_json(v.source_index);
    if (v.paired_value) e["paired_value"] = *v.paired_value;
    j["violations"].push_back(std::move(e));
  }
  j["witnesses"] = ordered_json::array();
  for (const auto& w : verdict.witnesses) {
    j["witnesses"].push_back({{"group_value", w.group_value},
                              {"value_name", value_name_json(target, w.group_value)},
                              {"position", w.position},
                              {"source_index", w.source_index}});
  }
  return j;
}

ordered_json to_json(const CoverageReport& report) {
  ordered_json j;
  j["t_way"] = report.t_way;
  j["projected_length"] = report.projected_length;
  j["covered"] = report.covered.size();
  j["total"] = report.total;
  j["normalized"] = to_double(report.normalized);
  j["normalized_exact"] = rational_text(report.normalized);
  j["saturation_point"] = saturation_point(report.curve);
  j["satisfied"] = report.satisfied();
  j["witnesses"] = ordered_json::array();
  for (const auto& c : report.covered) {
    j["witnesses"].push_back({{"axes", c.combo.axes},
                              {"values", c.combo.values},
                              {"position", c.position},
                              {"source_index", c.source_index}});
  }
  j["missing"] = ordered_json::array();
  for (const auto& c : report.missing) {
    j["missing"].push_back({{"axes", c.axes}, {"values", c.values}});
  }
  return j;
}

ordered_json to_json(const EnforcementStats& stats, const ConceptGrouping* target) {
  ordered_json j;
  j["steps"] = stats.steps;
  j["related_steps"] = stats.related_steps;
  j["injections"] = stats.injections;
  j["injection_rate"] = stats.injection_rate;
  j["halted"] = stats.halted;
  j["violations"] = ordered_json::array();
  for (const auto& v : stats.violations) {
    j["violations"].push_back({{"step", v.step},
                               {"related_step", v.related_step},
                               {"group_value", v.group_value},
                               {"value_name", value_name_json(target, v.group_value)}});
  }
  return j;
}

ordered_json to_json(const AuditRecord& record) {
  ordered_json j;
  j["step"] = record.step;
  j["counters_before"] = record.counters_before;
  if (record.decision) {
    j["fired_k"] = record.decision->k;
    j["candidates"] = record.decision->candidates;
    j["chosen"] = record.decision->chosen;
  } else {
    j["fired_k"] = nullptr;
    j["candidates"] = ordered_json::array();
    j["chosen"] = nullptr;
  }
  j["observed"] = record.observed;
  j["counters_after"] = record.counters_after;
  return j;
}

}  // namespace fairmon
