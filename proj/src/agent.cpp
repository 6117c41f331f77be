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

#include "hopgraph/agent.hpp"

#include <algorithm>

#include "hopgraph/sync.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph {

void GistMemory::append(std::span<const ProximalTriple> triples, int iteration) {
  if (!entries_.empty() && iteration < entries_.back().iteration) {
    throw ContractError("gist memory iterations must be non-decreasing");
  }
  for (const auto& t : triples) entries_.push_back({t, iteration});
}

std::vector<ProximalTriple> GistMemory::triples() const {
  std::vector<ProximalTriple> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.triple);
  return out;
}

void AgentConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("agent.max_iterations must be >= 1");
  if (per_iteration_k < 1) throw ConfigError("agent.per_iteration_k must be >= 1");
  if (passage_link_k < 1) throw ConfigError("agent.passage_link_k must be >= 1");
}

std::string_view to_string(Termination t) noexcept {
  return t == Termination::answerable ? "answerable" : "max_iterations";
}

ReasonOutcome reason_step(const GistMemory& memory, std::string_view question, Gateway& gateway,
                          int iteration) {
  const auto facts = memory.triples();
  const Variables vars{{"query", std::string(question)}, {"triples", format_facts(facts)}};
  return parse_reason(gateway.complete(PromptKind::reasoner, vars, iteration).text);
}

RewriteResult rewrite_step(const GistMemory& memory, std::string_view question, std::string_view reason,
                           Gateway& gateway, int iteration) {
  const auto facts = memory.triples();
  const Variables vars{{"query", std::string(question)},
                       {"triples", format_facts(facts)},
                       {"reason", std::string(reason)}};
  std::string next = parse_next_question(gateway.complete(PromptKind::rewriter, vars, iteration).text);
  if (next.empty()) return {std::string(question), true};
  return {std::move(next), false};
}

RankedList passage_link(const ProximalTriple& triple, const CorpusIndex& index,
                        const RetrievalConfig& config, std::size_t k) {
  const std::string query = serialize_triple(triple);
  RankedList by_passage = base_search(index, query, View::passages, k, config);

  RankedList by_triple;
  by_triple.provenance = "triple-source";
  if (index.size(View::triples) > 0) {
    const RankedList triples = base_search(index, query, View::triples, k, config);
    std::vector<std::string> ids;
    for (const auto& e : triples.entries) ids.push_back(e.id);
    const auto sources = passages_of_triples(index, ids);
    for (const auto& pid : sources) {
      // Score of the best triple from that passage; triples arrive sorted.
      auto it = std::find_if(triples.entries.begin(), triples.entries.end(),
                             [&](const RankedEntry& e) { return index.triple_to_passage(e.id) == pid; });
      by_triple.entries.push_back({pid, it->score});
    }
  }

  const RankedList parts[] = {by_passage, by_triple};
  RankedList out = rrf_fuse(parts, config.rrf_constant);
  out.truncate(k);
  out.provenance = "passage-link";
  return out;
}

namespace {

std::vector<ProximalTriple> dedupe(const std::vector<ProximalTriple>& triples) {
  std::vector<ProximalTriple> out;
  for (const auto& t : triples) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

}  // namespace

AgentTrace run_agent(std::string_view question, const CorpusIndex& index, const AgentOptions& options,
                     Gateway& gateway) {
  options.retrieval.validate();
  options.expansion.validate();
  options.agent.validate();

  GraphRetrievalOptions per_step;
  per_step.retrieval = options.retrieval;
  per_step.expansion = options.expansion;
  per_step.base_k = options.agent.per_iteration_k;
  per_step.read_cap = options.agent.per_iteration_k;
  per_step.output_k = options.retrieval.k;

  AgentTrace trace;
  trace.question = std::string(question);
  std::string query(question);

  const auto fail = [&](const std::exception& e) -> AgentRunError {
    trace.error = e.what();
    trace.tokens = gateway.ledger().totals();
    return AgentRunError(std::string("agent run failed: ") + e.what(), trace);
  };

  const int max_iter = static_cast<int>(options.agent.max_iterations);
  for (int n = 1; n <= max_iter; ++n) {
    IterationRecord record;
    record.iteration = n;
    record.query = query;
    try {
      record.retrieval = sync_ge_retrieve(query, index, per_step, gateway, n);

      if (n == 1 && options.agent.reuse_first_read) {
        record.gist_additions = record.retrieval.proximals;
      } else {
        std::optional<std::span<const ProximalTriple>> memory;
        std::vector<ProximalTriple> previous;
        if (n >= 2) {
          previous = trace.memory.triples();
          memory = std::span<const ProximalTriple>(previous);
        }
        // Gist reads are conditioned on the original question.
        record.gist_additions = read_proximal(index, record.retrieval.fused, question, memory, gateway,
                                              options.agent.per_iteration_k, n);
      }
      trace.memory.append(record.gist_additions, n);

      record.reason = reason_step(trace.memory, question, gateway, n);
      if (!record.reason.answerable && n < max_iter) {
        RewriteResult next = rewrite_step(trace.memory, question, record.reason.payload, gateway, n);
        record.rewritten_query = next.query;
        record.rewrite_fallback = next.fallback;
        query = std::move(next.query);
      }
    } catch (const AgentRunError&) {
      throw;
    } catch (const std::exception& e) {
      trace.iterations.push_back(std::move(record));
      throw fail(e);
    }

    const auto per_iteration = gateway.ledger().by_iteration();
    if (auto it = per_iteration.find(n); it != per_iteration.end()) record.tokens = it->second;
    const bool answerable = record.reason.answerable;
    if (answerable) trace.answer = record.reason.payload;
    trace.iterations.push_back(std::move(record));
    if (answerable) {
      trace.termination = Termination::answerable;
      break;
    }
  }
  if (!trace.termination) trace.termination = Termination::max_iterations;

  try {
    trace.linked_triples = dedupe(trace.memory.triples());
    std::vector<RankedList> lists;
    for (const auto& t : trace.linked_triples) {
      trace.passage_links.push_back(passage_link(t, index, options.retrieval, options.agent.passage_link_k));
      lists.push_back(trace.passage_links.back());
    }
    for (const auto& it : trace.iterations) lists.push_back(it.retrieval.fused);
    trace.final_list = rrf_fuse(lists, options.retrieval.rrf_constant);
    trace.final_list.provenance = "agent";
  } catch (const std::exception& e) {
    throw fail(e);
  }
  trace.tokens = gateway.ledger().totals();
  return trace;
}

// --- JSON -------------------------------------------------------------------

nlohmann::json to_json(const RankedList& list) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : list.entries) entries.push_back({{"id", e.id}, {"score", e.score}});
  return {{"provenance", list.provenance}, {"entries", std::move(entries)}};
}

nlohmann::json to_json(const ProximalTriple& t) {
  return nlohmann::json::array({t.subject, t.predicate, t.object});
}

namespace {

nlohmann::json triples_json(std::span<const ProximalTriple> triples) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : triples) out.push_back(to_json(t));
  return out;
}

nlohmann::json tokens_json(const TokenTotals& t) {
  return {{"calls", t.calls}, {"input_tokens", t.input_tokens}, {"output_tokens", t.output_tokens}};
}

}  // namespace

nlohmann::json to_json(const AgentTrace& trace) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const auto& it : trace.iterations) {
    nlohmann::json beams = nlohmann::json::array();
    for (const auto& b : it.retrieval.search.beams) beams.push_back({{"score", b.score}, {"sequence", b.sequence}});
    iterations.push_back({
        {"iteration", it.iteration},
        {"query", it.query},
        {"base", to_json(it.retrieval.base)},
        {"proximal_triples", triples_json(it.retrieval.proximals)},
        {"initial_nodes", it.retrieval.initial_nodes},
        {"beams", std::move(beams)},
        {"beam_search_stopped_early", it.retrieval.search.stopped_early},
        {"expanded", to_json(it.retrieval.expanded)},
        {"retrieved", to_json(it.retrieval.fused)},
        {"gist_additions", triples_json(it.gist_additions)},
        {"reason", {{"answerable", it.reason.answerable}, {"payload", it.reason.payload}}},
        {"rewritten_query", it.rewritten_query ? nlohmann::json(*it.rewritten_query) : nlohmann::json()},
        {"rewrite_fallback", it.rewrite_fallback},
        {"tokens", tokens_json(it.tokens)},
    });
  }
  nlohmann::json memory = nlohmann::json::array();
  for (const auto& e : trace.memory.entries()) {
    memory.push_back({{"iteration", e.iteration}, {"triple", to_json(e.triple)}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (std::size_t i = 0; i < trace.passage_links.size(); ++i) {
    links.push_back({{"triple", to_json(trace.linked_triples[i])}, {"passages", to_json(trace.passage_links[i])}});
  }
  nlohmann::json out = {
      {"question", trace.question},
      {"iterations", std::move(iterations)},
      {"gist_memory", std::move(memory)},
      {"passage_links", std::move(links)},
      {"final", to_json(trace.final_list)},
      {"termination", trace.termination ? nlohmann::json(std::string(to_string(*trace.termination)))
                                        : nlohmann::json()},
      {"answer", trace.answer},
      {"tokens", tokens_json(trace.tokens)},
  };
  if (!trace.error.empty()) out["error"] = trace.error;
  return out;
}

}  // namespace hopgraph
