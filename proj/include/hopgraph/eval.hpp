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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hopgraph/config.hpp"
#include "hopgraph/corpus_index.hpp"
#include "hopgraph/llm_gateway.hpp"

namespace hopgraph {

struct EvalQuestion {
  std::string id;
  std::string question;
  std::vector<std::string> gold_passage_ids;
  std::vector<std::string> answers;
};

/// JSONL {"id", "question", "gold_passage_ids": [...], "answers": [...]}.
std::vector<EvalQuestion> read_dataset(std::istream& in);
std::vector<EvalQuestion> read_dataset(const std::filesystem::path& path);

/// |gold ∩ top-k| / |gold|, or 1/0 for "all gold found" when `binary`.
/// Throws ContractError for an empty gold set or k = 0.
double recall_at_k(std::span<const std::string> retrieved, std::span<const std::string> gold, std::size_t k,
                   bool binary = false);

/// Lowercase, drop punctuation and the articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view text);
int exact_match(std::string_view prediction, std::span<const std::string> gold_answers);
double f1_answer(std::string_view prediction, std::span<const std::string> gold_answers);

enum class SystemMode { base, naive_ge, sync_ge, agent };
std::string_view to_string(SystemMode mode) noexcept;
SystemMode parse_system_mode(std::string_view name);

struct EvalRow {
  std::string id;
  std::string question;
  bool ok = false;
  std::string error;
  std::vector<std::string> retrieved;       // top max(cutoffs) passage ids
  std::map<std::size_t, double> recall;     // cutoff -> recall
  std::optional<std::string> prediction;
  std::optional<int> em;
  std::optional<double> f1;
  std::size_t iterations = 0;
  std::string termination;
  TokenTotals tokens;
};

/// Means over successful rows; nullopt when there are none.
struct EvalAggregates {
  std::size_t questions = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::map<std::size_t, std::optional<double>> recall;
  std::optional<double> em;
  std::optional<double> f1;
  std::optional<double> iterations;
  std::optional<double> input_tokens;
  std::optional<double> output_tokens;
};

struct EvalReport {
  SystemMode mode = SystemMode::base;
  std::vector<EvalRow> rows;  // dataset order
  EvalAggregates aggregates;
  nlohmann::json config;
};

/// Means of the successful rows at the given cutoffs.
EvalAggregates aggregate(std::span<const EvalRow> rows, std::span<const std::size_t> cutoffs, bool qa);

/// Runs the configured system over every question on config.eval.workers
/// threads. Each question gets its own forked gateway, so token counts are
/// per question. Failing questions are reported and left out of the means.
/// Throws ContractError when a gold id is not in the index.
EvalReport run_eval(std::span<const EvalQuestion> dataset, const CorpusIndex& index, SystemMode mode,
                    const EngineConfig& config, const Gateway& gateway);

/// Answer from the QA prompt over the first `passages` entries of a ranking.
std::string answer_with_passages(std::string_view question, const CorpusIndex& index,
                                 std::span<const std::string> passage_ids, Gateway& gateway, int iteration);

nlohmann::json to_json(const EvalReport& report);
std::string format_table(const EvalReport& report);

}  // namespace hopgraph
