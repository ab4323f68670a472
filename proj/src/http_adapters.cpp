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

#include "fairmon/http_adapters.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>

namespace fairmon {

using json = nlohmann::json;

HttpEndpoint HttpEndpoint::from_environment(std::string base_url) {
  HttpEndpoint endpoint;
  endpoint.base_url = std::move(base_url);
  if (const char* token = std::getenv("FAIRMON_API_TOKEN"); token && *token) {
    endpoint.bearer_token = token;
  }
  if (const char* ms = std::getenv("FAIRMON_HTTP_TIMEOUT_MS"); ms && *ms) {
    char* end = nullptr;
    const long value = std::strtol(ms, &end, 10);
    if (end != ms && value > 0) endpoint.timeout = std::chrono::milliseconds(value);
  }
  return endpoint;
}

// Splits "scheme://host[:port][/prefix]" and posts JSON bodies under prefix.
class HttpTransport {
 public:
  explicit HttpTransport(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    const auto& url = endpoint_.base_url;
    const auto scheme_end = url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = url.find('/', host_start);
    origin_ = url.substr(0, path_start);
    if (path_start != std::string::npos) prefix_ = url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    client_ = std::make_unique<httplib::Client>(origin_);
    if (!client_->is_valid()) {
      throw AdapterError("invalid endpoint URL '" + endpoint_.base_url + "'");
    }
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        endpoint_.timeout - secs);
    client_->set_connection_timeout(secs.count(), usecs.count());
    client_->set_read_timeout(secs.count(), usecs.count());
    client_->set_write_timeout(secs.count(), usecs.count());
    if (endpoint_.bearer_token) {
      client_->set_bearer_token_auth(*endpoint_.bearer_token);
    }
  }

  json post(const std::string& route, const json& body) {
    const std::string path = prefix_ + route;
    auto result = client_->Post(path, body.dump(), "application/json");
    if (!result) {
      throw AdapterError("POST " + origin_ + path + " failed: " +
                         httplib::to_string(result.error()));
    }
    if (result->status < 200 || result->status >= 300) {
      throw AdapterError("POST " + origin_ + path + " returned HTTP " +
                         std::to_string(result->status));
    }
    try {
      return json::parse(result->body);
    } catch (const json::parse_error&) {
      throw AdapterError("POST " + origin_ + path + " returned malformed JSON");
    }
  }

 private:
  HttpEndpoint endpoint_;
  std::string origin_;
  std::string prefix_;
  std::unique_ptr<httplib::Client> client_;
};

namespace {

json value_names(const ConceptGrouping& axis) { return axis.value_names; }

}  // namespace

HttpGenerator::HttpGenerator(HttpEndpoint endpoint)
    : transport_(std::make_unique<HttpTransport>(std::move(endpoint))) {}
HttpGenerator::~HttpGenerator() = default;

LabeledItem HttpGenerator::generate(const PromptRequest& request,
                                    const std::string& final_prompt,
                                    const std::optional<Injection>&) {
  const json reply = transport_->post("/generate", {{"prompt", final_prompt}});
  auto it = reply.find("payload_ref");
  if (it == reply.end() || !it->is_string()) {
    throw AdapterError("generation reply lacks a payload_ref string");
  }
  LabeledItem item;
  item.prompt = final_prompt.empty() ? request.text : final_prompt;
  item.payload_ref = it->get<std::string>();
  return item;
}

HttpClassifier::HttpClassifier(HttpEndpoint endpoint)
    : transport_(std::make_unique<HttpTransport>(std::move(endpoint))) {}
HttpClassifier::~HttpClassifier() = default;

GroupValue HttpClassifier::classify(const LabeledItem& item, const ConceptGrouping& axis) {
  if (!item.payload_ref) {
    throw AdapterError("item " + std::to_string(item.index) + " has no payload to classify");
  }
  const json reply = transport_->post(
      "/classify",
      {{"payload_ref", *item.payload_ref}, {"axis", axis.name}, {"value_names", value_names(axis)}});
  auto it = reply.find("value");
  if (it == reply.end()) throw AdapterError("classification reply lacks 'value'");
  if (!it->is_number_integer()) return kUnrelated;
  const auto v = it->get<std::int64_t>();
  return (v >= 0 && v <= axis.group_count) ? static_cast<GroupValue>(v) : kUnrelated;
}

HttpPromptOracle::HttpPromptOracle(HttpEndpoint endpoint)
    : transport_(std::make_unique<HttpTransport>(std::move(endpoint))) {}
HttpPromptOracle::~HttpPromptOracle() = default;

bool HttpPromptOracle::is_related(const PromptRequest& request, const ConceptGrouping& axis,
                                  GroupValue value) {
  const json reply = transport_->post("/bias", {{"prompt", request.text},
                                                {"axis", axis.name},
                                                {"value_names", value_names(axis)},
                                                {"value", value}});
  auto it = reply.find("related");
  if (it == reply.end() || !it->is_boolean()) {
    throw AdapterError("bias reply lacks a boolean 'related'");
  }
  return it->get<bool>();
}

std::optional<GroupValue> HttpPromptOracle::is_biased(const PromptRequest& request,
                                                      const ConceptGrouping& axis) {
  const json reply = transport_->post(
      "/bias", {{"prompt", request.text}, {"axis", axis.name}, {"value_names", value_names(axis)}});
  auto it = reply.find("biased");
  if (it == reply.end()) throw AdapterError("bias reply lacks 'biased'");
  if (it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) throw AdapterError("bias reply 'biased' must be an integer or null");
  const auto v = it->get<std::int64_t>();
  if (v < 1 || v > axis.group_count) return std::nullopt;
  return static_cast<GroupValue>(v);
}

}  // namespace fairmon
