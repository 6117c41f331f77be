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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopgraph/base_retrieval.hpp"
#include "hopgraph/corpus_index.hpp"
#include "hopgraph/llm_gateway.hpp"

namespace hopgraph {

/// "title\nbody" blocks in rank order, at most `cap` of them, separated by
/// blank lines. Unknown ids are skipped.
std::string render_docs(const CorpusIndex& index, const RankedList& passages, std::size_t cap);

/// Asks the LLM for proximal triples supporting `query` given the passages.
/// With `memory` the memory-conditioned reader is used and the memory is
/// passed in the facts format; without it the plain reader is used.
std::vector<ProximalTriple> read_proximal(const CorpusIndex& index, const RankedList& passages,
                                          std::string_view query,
                                          std::optional<std::span<const ProximalTriple>> memory,
                                          Gateway& gateway, std::size_t chunk_cap, int iteration);

/// Grounds a proximal triple to the most similar indexed triple using the
/// configured base retriever with k = 1. nullopt when nothing is returned.
std::optional<std::string> triple_link(const ProximalTriple& proximal, const CorpusIndex& index,
                                       const RetrievalConfig& config);

/// triple_link over every proximal, failures dropped, first occurrence kept.
std::vector<std::string> locate_initial_nodes(std::span<const ProximalTriple> proximals,
                                              const CorpusIndex& index, const RetrievalConfig& config);

}  // namespace hopgraph
