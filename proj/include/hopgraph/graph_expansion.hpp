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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopgraph/base_retrieval.hpp"
#include "hopgraph/corpus_index.hpp"
#include "hopgraph/llm_gateway.hpp"

namespace hopgraph {

/// A scored path of triples. Consecutive triples are graph neighbours and no
/// triple repeats.
struct Beam {
  double score = 0.0;
  std::vector<std::string> sequence;

  friend bool operator==(const Beam&, const Beam&) = default;
};

/// (query, triple ids) -> relevance of the whole sequence.
using SequenceScorer = std::function<double(std::string_view, std::span<const std::string>)>;

struct ExpansionConfig {
  std::size_t beam_width = 10;
  std::size_t max_length = 2;
  std::size_t neighbour_cap = 100;
  double gamma = 20.0;
  /// Carry beams that have no extension into the next step unchanged.
  bool keep_stranded_beams = false;
  /// When false every candidate keeps weight 1 (plain beam search).
  bool diversity = true;
  /// Empty means cosine between query and serialized sequence embeddings.
  SequenceScorer scorer;

  /// Throws ConfigError unless b, l, neighbour_cap >= 1 and gamma > 0.
  void validate() const;
};

/// exp(-min(n, gamma) / gamma) for 0-based candidate position n.
double diversity_weight(std::size_t position, double gamma);

/// Cosine between embed(query) and embed(sequence texts joined by "; ").
double score_sequence(std::string_view query, std::span<const std::string> sequence,
                      const CorpusIndex& index);

/// Scorer that embeds the query once and reuses it for every sequence.
SequenceScorer make_cosine_scorer(const CorpusIndex& index);

struct BeamSearchResult {
  std::vector<Beam> beams;
  /// Expansion steps that produced candidates (0 when only the seed step ran).
  std::size_t steps_completed = 0;
  /// True when a step produced no candidates and the previous beams were kept.
  bool stopped_early = false;
};

/// Beam search over triple sequences with within-beam positional
/// down-weighting of candidates.
///
/// Seeds are the top-b initial triples by score. Each later step extends
/// every beam with neighbours of its last triple that appear in no sequence
/// of the previous step, scores them as s + score(q, T∘t), sorts them, keeps
/// the best neighbour_cap and multiplies the n-th by diversity_weight(n).
/// The best b of all candidates form the next step. Ties are broken by
/// ascending triple ids.
BeamSearchResult diverse_beam_search(std::string_view query, std::span<const std::string> initial_ids,
                                     const CorpusIndex& index, const ExpansionConfig& config);

/// Position-major traversal (all first elements, then all second elements,
/// ...), keeping first occurrences.
std::vector<std::string> flatten_beams(std::span<const Beam> beams);

struct GraphRetrievalOptions {
  RetrievalConfig retrieval;
  ExpansionConfig expansion;
  std::size_t base_k = 15;
  std::size_t output_k = 15;
  /// Passages shown to the reader.
  std::size_t read_cap = 10;
};

/// Everything one graph-expanded retrieval produced.
struct GraphRetrieval {
  RankedList base;
  std::vector<ProximalTriple> proximals;
  std::vector<std::string> initial_nodes;
  BeamSearchResult search;
  RankedList expanded;  // unique source passages of the flattened beams
  RankedList fused;
};

/// Base retrieval, LLM read, triple linking, beam search, then RRF of the
/// expanded passages with the base list.
GraphRetrieval sync_ge_retrieve(std::string_view query, const CorpusIndex& index,
                                const GraphRetrievalOptions& options, Gateway& gateway,
                                int iteration = 1,
                                std::optional<std::span<const ProximalTriple>> memory = std::nullopt);

/// Like sync_ge_retrieve but seeded with every triple of the base passages
/// (passage rank order, then triple id). No LLM call.
GraphRetrieval naive_ge_retrieve(std::string_view query, const CorpusIndex& index,
                                 const GraphRetrievalOptions& options);

}  // namespace hopgraph
