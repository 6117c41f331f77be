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

#include "hopgraph/sync.hpp"

#include <unordered_set>

#include "hopgraph/text.hpp"

namespace hopgraph {

std::string render_docs(const CorpusIndex& index, const RankedList& passages, std::size_t cap) {
  std::string out;
  std::size_t used = 0;
  for (const auto& entry : passages.entries) {
    if (used == cap) break;
    if (!index.has_passage(entry.id)) continue;
    const Passage& p = index.passage(entry.id);
    if (used) out += "\n\n";
    out += p.title;
    out += '\n';
    out += p.body;
    ++used;
  }
  return out;
}

std::vector<ProximalTriple> read_proximal(const CorpusIndex& index, const RankedList& passages,
                                          std::string_view query,
                                          std::optional<std::span<const ProximalTriple>> memory,
                                          Gateway& gateway, std::size_t chunk_cap, int iteration) {
  Variables vars{{"docs", render_docs(index, passages, chunk_cap)}, {"query", std::string(query)}};
  PromptKind kind = PromptKind::reader;
  if (memory) {
    kind = PromptKind::reader_with_memory;
    vars["triples"] = format_facts(*memory);
  }
  const Completion reply = gateway.complete(kind, vars, iteration);
  return parse_facts(reply.text);
}

std::optional<std::string> triple_link(const ProximalTriple& proximal, const CorpusIndex& index,
                                       const RetrievalConfig& config) {
  if (index.size(View::triples) == 0) return std::nullopt;
  const RankedList hit = base_search(index, serialize_triple(proximal), View::triples, 1, config);
  if (hit.empty()) return std::nullopt;
  return hit.entries.front().id;
}

std::vector<std::string> locate_initial_nodes(std::span<const ProximalTriple> proximals,
                                              const CorpusIndex& index, const RetrievalConfig& config) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& p : proximals) {
    auto id = triple_link(p, index, config);
    if (id && seen.insert(*id).second) out.push_back(std::move(*id));
  }
  return out;
}

}  // namespace hopgraph
