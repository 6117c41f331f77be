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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hopgraph/base_retrieval.hpp"
#include "hopgraph/corpus_index.hpp"
#include "hopgraph/errors.hpp"
#include "hopgraph/graph_expansion.hpp"
#include "hopgraph/llm_gateway.hpp"

namespace hopgraph {

struct GistEntry {
  ProximalTriple triple;
  int iteration = 0;

  friend bool operator==(const GistEntry&, const GistEntry&) = default;
};

/// Append-only array of proximal triples accumulated across iterations.
class GistMemory {
 public:
  /// Throws ContractError if `iteration` is lower than the last one appended.
  void append(std::span<const ProximalTriple> triples, int iteration);

  const std::vector<GistEntry>& entries() const noexcept { return entries_; }
  std::vector<ProximalTriple> triples() const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::vector<GistEntry> entries_;
};

struct AgentConfig {
  std::size_t max_iterations = 4;
  /// Chunk cap for base retrieval and for both reads in one iteration.
  std::size_t per_iteration_k = 10;
  std::size_t passage_link_k = 15;
  /// Use the locate read as the first gist read instead of reading again.
  bool reuse_first_read = false;

  void validate() const;
};

struct AgentOptions {
  RetrievalConfig retrieval;
  ExpansionConfig expansion;
  AgentConfig agent;
};

enum class Termination { answerable, max_iterations };
std::string_view to_string(Termination t) noexcept;

struct IterationRecord {
  int iteration = 0;
  std::string query;
  GraphRetrieval retrieval;  // retrieval.fused is this iteration's passage list
  std::vector<ProximalTriple> gist_additions;
  ReasonOutcome reason;
  std::optional<std::string> rewritten_query;
  bool rewrite_fallback = false;
  TokenTotals tokens;
};

struct AgentTrace {
  std::string question;
  std::vector<IterationRecord> iterations;
  GistMemory memory;
  /// Gist triples after de-duplication, in first-seen order.
  std::vector<ProximalTriple> linked_triples;
  std::vector<RankedList> passage_links;
  RankedList final_list;
  std::optional<Termination> termination;
  std::string answer;
  TokenTotals tokens;
  /// Set when the run aborted; the trace holds everything up to that point.
  std::string error;
};

/// Raised when a step fails mid-run; carries the partial trace.
class AgentRunError : public Error {
 public:
  AgentRunError(const std::string& what, AgentTrace partial)
      : Error(what), partial_(std::move(partial)) {}
  const AgentTrace& partial_trace() const noexcept { return partial_; }

 private:
  AgentTrace partial_;
};

/// Asks whether the memory answers the original question.
ReasonOutcome reason_step(const GistMemory& memory, std::string_view question, Gateway& gateway,
                          int iteration);

struct RewriteResult {
  std::string query;
  bool fallback = false;  // the reply was blank and the original question is reused
};

RewriteResult rewrite_step(const GistMemory& memory, std::string_view question, std::string_view reason,
                           Gateway& gateway, int iteration);

/// RRF of passages retrieved with the serialized triple as query and of the
/// source passages of triples retrieved the same way, truncated to k.
RankedList passage_link(const ProximalTriple& triple, const CorpusIndex& index,
                        const RetrievalConfig& config, std::size_t k);

/// The multi-step loop: graph-expanded retrieval, gist reading, termination
/// reasoning and query rewriting, then fusion of passage links and all
/// per-iteration lists. Throws AgentRunError on a failed step.
AgentTrace run_agent(std::string_view question, const CorpusIndex& index, const AgentOptions& options,
                     Gateway& gateway);

nlohmann::json to_json(const RankedList& list);
nlohmann::json to_json(const ProximalTriple& triple);
nlohmann::json to_json(const AgentTrace& trace);

}  // namespace hopgraph
