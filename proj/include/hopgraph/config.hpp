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

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopgraph/agent.hpp"
#include "hopgraph/base_retrieval.hpp"
#include "hopgraph/graph_expansion.hpp"
#include "hopgraph/llm_gateway.hpp"

namespace hopgraph {

struct LlmConfig {
  /// "scripted" or "remote".
  std::string backend = "scripted";
  std::string fixtures;  // JSONL, scripted backend only
  std::string endpoint;  // chat completions URL, remote backend only
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_output_tokens = 1024;
  int max_retries = 3;
  int backoff_ms = 500;
  int timeout_seconds = 120;
  int max_in_flight = 4;
};

struct EvalConfig {
  std::vector<std::size_t> cutoffs{5, 10, 15};
  std::size_t workers = 4;
  /// All-gold-found recall instead of the fractional default.
  bool binary_recall = false;
  /// Generate answers and score EM / F1.
  bool qa = false;
  std::size_t qa_passages = 5;
};

/// Effective settings for every command. A config file overrides the
/// built-in defaults key by key.
struct EngineConfig {
  RetrievalConfig retrieval;
  ExpansionConfig expansion;
  AgentConfig agent;
  LlmConfig llm;
  EvalConfig eval;

  AgentOptions agent_options() const { return {retrieval, expansion, agent}; }
  /// Single-step graph retrieval: base and output cutoffs both retrieval.k.
  GraphRetrievalOptions single_step_options() const;
  void validate() const;
};

/// INI-style text with sections [retrieval], [expansion], [agent], [llm],
/// [eval]. Unknown sections or keys raise ConfigError. expansion.gamma
/// defaults to twice expansion.beam_width when not given.
EngineConfig parse_config(std::istream& in);
EngineConfig load_config(const std::string& path);

nlohmann::json to_json(const EngineConfig& config);

/// Scripted backend (with fixtures loaded) or remote client, per config.
std::shared_ptr<LlmBackend> make_backend(const LlmConfig& config);

}  // namespace hopgraph
