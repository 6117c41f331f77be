/*
 * Copyright 2026 The hopgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <json.hpp>

#include <chrono>
#include <map>
#include <string>

namespace hopgraph::detail {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
};

/// Splits an absolute http(s) URL. Throws ConfigError on anything else.
Url parse_url(const std::string& url);

struct RetryPolicy {
  /// Total attempts, including the first one.
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{8000};
};

/// POSTs a JSON body and parses the JSON reply. Transport failures, 408, 429
/// and 5xx are retried with exponential backoff; other statuses fail at
/// once. Throws TransportError naming the attempt count.
nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         const std::map<std::string, std::string>& headers,
                         const RetryPolicy& policy, int timeout_seconds);

}  // namespace hopgraph::detail
