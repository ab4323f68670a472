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

#ifndef FAIRMON_HTTP_ADAPTERS_HPP
#define FAIRMON_HTTP_ADAPTERS_HPP

#include "fairmon/generator.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <string>

namespace fairmon {

// JSON-over-HTTP adapters for external services:
//
//   POST <base>/generate  {prompt}                     -> {payload_ref}
//   POST <base>/classify  {payload_ref, axis, value_names} -> {value}
//   POST <base>/bias      {prompt, axis, value_names[, value]} -> {biased, related}
//
// `value` is sent only for relatedness queries and names the condition value.

struct HttpEndpoint {
  /// e.g. "http://127.0.0.1:8080" or "http://host/api/v1".
  std::string base_url;
  std::chrono::milliseconds timeout{10000};
  /// Sent as "Authorization: Bearer <token>" when set.
  std::optional<std::string> bearer_token;

  /// Reads the token from FAIRMON_API_TOKEN.
  /// Reads the timeout in milliseconds from FAIRMON_HTTP_TIMEOUT_MS.
  static HttpEndpoint from_environment(std::string base_url);
};

class HttpTransport;

class HttpGenerator final : public Generator {
 public:
  explicit HttpGenerator(HttpEndpoint endpoint);
  ~HttpGenerator() override;

  LabeledItem generate(const PromptRequest& request, const std::string& final_prompt,
                       const std::optional<Injection>& injection) override;

 private:
  std::unique_ptr<HttpTransport> transport_;
};

class HttpClassifier final : public Classifier {
 public:
  explicit HttpClassifier(HttpEndpoint endpoint);
  ~HttpClassifier() override;

  /// Unknown or out-of-range answers map to 0 (unrecognisable).
  GroupValue classify(const LabeledItem& item, const ConceptGrouping& axis) override;

 private:
  std::unique_ptr<HttpTransport> transport_;
};

class HttpPromptOracle final : public PromptOracle {
 public:
  explicit HttpPromptOracle(HttpEndpoint endpoint);
  ~HttpPromptOracle() override;

  bool is_related(const PromptRequest& request, const ConceptGrouping& axis,
                  GroupValue value) override;
  std::optional<GroupValue> is_biased(const PromptRequest& request,
                                      const ConceptGrouping& axis) override;

 private:
  std::unique_ptr<HttpTransport> transport_;
};

}  // namespace fairmon

#endif  // FAIRMON_HTTP_ADAPTERS_HPP
