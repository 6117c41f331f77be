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

#include "http_util.hpp"

#include <httplib.h>

#include <algorithm>
#include <thread>

#include "hopgraph/errors.hpp"

namespace hopgraph::detail {

Url parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("not an absolute URL: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Url out;
  if (path_start == std::string::npos) {
    out.origin = url;
    out.path = "/";
  } else {
    out.origin = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  if (out.origin.size() <= scheme_end + 3) throw ConfigError("URL has no host: " + url);
  return out;
}

namespace {

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

nlohmann::json post_json(const std::string& url, const nlohmann::json& body,
                         const std::map<std::string, std::string>& headers,
                         const RetryPolicy& policy, int timeout_seconds) {
  const Url target = parse_url(url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);

  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);
  const std::string payload = body.dump();

  const int attempts = std::max(1, policy.max_attempts);
  auto delay = policy.base_delay;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    auto res = client.Post(target.path, hdrs, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed JSON reply from ") + url + ": " + e.what(),
                             attempt);
      }
    } else {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 512);
      if (!retryable_status(res->status)) throw TransportError(last_error, attempt);
    }
    if (attempt < attempts) {
      std::this_thread::sleep_for(delay);
      delay = std::min(policy.max_delay,
                       std::chrono::milliseconds(static_cast<long long>(
                           static_cast<double>(delay.count()) * policy.multiplier)));
    }
  }
  throw TransportError(url + " failed after " + std::to_string(attempts) +
                           " attempt(s): " + last_error,
                       attempts);
}

}  // namespace hopgraph::detail
