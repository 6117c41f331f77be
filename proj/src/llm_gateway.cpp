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

#include "hopgraph/llm_gateway.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <json.hpp>

#include "hopgraph/errors.hpp"
#include "hopgraph/text.hpp"
#include "http_util.hpp"

namespace hopgraph {
namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return out;
}

std::int64_t count_tokens(std::string_view text) {
  return static_cast<std::int64_t>(whitespace_tokens(text).size());
}

}  // namespace

// --- ScriptedBackend --------------------------------------------------------

std::string ScriptedBackend::key_for(const Variables& variables) {
  // nlohmann::json objects keep keys sorted, so dump() is canonical.
  return sha256_hex(nlohmann::json(variables).dump());
}

void ScriptedBackend::add(std::string kind, std::string key, std::string response) {
  std::lock_guard lock(mutex_);
  fixtures_[{std::move(kind), std::move(key)}] = std::move(response);
}

void ScriptedBackend::add(std::string_view kind, const Variables& variables, std::string response) {
  add(std::string(kind), key_for(variables), std::move(response));
}

void ScriptedBackend::load_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open fixture file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      std::string key;
      if (j.contains("key")) {
        key = j.at("key").get<std::string>();
      } else {
        key = key_for(j.at("variables").get<Variables>());
      }
      add(j.at("kind").get<std::string>(), std::move(key), j.at("response").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void ScriptedBackend::set_handler(Handler handler) {
  std::lock_guard lock(mutex_);
  handler_ = std::move(handler);
}

std::size_t ScriptedBackend::size() const {
  std::lock_guard lock(mutex_);
  return fixtures_.size();
}

Completion ScriptedBackend::complete(const CompletionRequest& request) {
  const std::string key = key_for(request.variables);
  std::optional<std::string> response;
  Handler handler;
  {
    std::lock_guard lock(mutex_);
    auto it = fixtures_.find({request.kind, key});
    if (it != fixtures_.end()) response = it->second;
    handler = handler_;
  }
  if (!response && handler) response = handler(request);
  if (!response) throw FixtureMissError(request.kind, key);
  return Completion{*response, count_tokens(request.prompt), count_tokens(*response)};
}

// --- RemoteBackend ----------------------------------------------------------

RemoteBackend::RemoteBackend(Options options)
    : options_(std::move(options)), in_flight_(std::max(1, options_.max_in_flight)) {
  detail::parse_url(options_.endpoint);
}

Completion RemoteBackend::complete(const CompletionRequest& request) {
  nlohmann::json body = {
      {"model", options_.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.params.temperature},
      {"max_tokens", request.params.max_output_tokens},
  };
  std::map<std::string, std::string> headers;
  if (!options_.api_key.empty()) headers["Authorization"] = "Bearer " + options_.api_key;

  detail::RetryPolicy policy;
  policy.max_attempts = options_.max_retries;
  policy.base_delay = std::chrono::milliseconds(options_.backoff_ms);

  in_flight_.acquire();
  nlohmann::json reply;
  try {
    reply = detail::post_json(options_.endpoint, body, headers, policy, options_.timeout_seconds);
  } catch (...) {
    in_flight_.release();
    throw;
  }
  in_flight_.release();

  Completion out;
  try {
    const auto& content = reply.at("choices").at(0).at("message").at("content");
    out.text = content.is_null() ? std::string() : content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("unexpected chat completion reply: ") + e.what(), 1);
  }
  if (reply.contains("usage") && reply["usage"].is_object()) {
    out.input_tokens = reply["usage"].value("prompt_tokens", std::int64_t{0});
    out.output_tokens = reply["usage"].value("completion_tokens", std::int64_t{0});
  } else {
    out.input_tokens = count_tokens(request.prompt);
    out.output_tokens = count_tokens(out.text);
  }
  return out;
}

// --- TokenLedger ------------------------------------------------------------

void TokenLedger::append(TokenRecord record) {
  std::lock_guard lock(mutex_);
  records_.push_back(std::move(record));
}

std::vector<TokenRecord> TokenLedger::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::size_t TokenLedger::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

TokenTotals TokenLedger::totals() const {
  std::lock_guard lock(mutex_);
  TokenTotals t;
  for (const auto& r : records_) {
    t.input_tokens += r.input_tokens;
    t.output_tokens += r.output_tokens;
    ++t.calls;
  }
  return t;
}

std::map<int, TokenTotals> TokenLedger::by_iteration() const {
  std::lock_guard lock(mutex_);
  std::map<int, TokenTotals> out;
  for (const auto& r : records_) {
    auto& t = out[r.iteration];
    t.input_tokens += r.input_tokens;
    t.output_tokens += r.output_tokens;
    ++t.calls;
  }
  return out;
}

// --- Gateway ----------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<LlmBackend> backend, CompletionParams params)
    : backend_(std::move(backend)), params_(params), ledger_(std::make_shared<TokenLedger>()) {
  if (!backend_) throw ConfigError("gateway needs a backend");
}

Completion Gateway::complete(PromptKind kind, const Variables& variables, int iteration) {
  return complete(std::string(to_string(kind)), render_prompt(kind, variables), variables, iteration);
}

Completion Gateway::complete(std::string kind, std::string prompt, Variables variables, int iteration) {
  CompletionRequest request{std::move(kind), std::move(variables), std::move(prompt), params_};
  Completion out = backend_->complete(request);
  ledger_->append({request.kind, std::max<std::int64_t>(0, out.input_tokens),
                   std::max<std::int64_t>(0, out.output_tokens), iteration});
  return out;
}

}  // namespace hopgraph
