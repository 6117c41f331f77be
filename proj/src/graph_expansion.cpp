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

#include "hopgraph/graph_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hopgraph/errors.hpp"
#include "hopgraph/sync.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph {

void ExpansionConfig::validate() const {
  if (beam_width < 1) throw ConfigError("expansion.beam_width must be >= 1");
  if (max_length < 1) throw ConfigError("expansion.max_length must be >= 1");
  if (neighbour_cap < 1) throw ConfigError("expansion.neighbour_cap must be >= 1");
  if (!(gamma > 0.0)) throw ConfigError("expansion.gamma must be > 0");
}

double diversity_weight(std::size_t position, double gamma) {
  return std::exp(-std::min(static_cast<double>(position), gamma) / gamma);
}

namespace {

std::string sequence_text(std::span<const std::string> sequence, const CorpusIndex& index) {
  std::vector<std::string> texts;
  texts.reserve(sequence.size());
  for (const auto& id : sequence) texts.push_back(serialize_triple(index.triple(id)));
  return serialize_sequence(texts);
}

bool beam_before(const Beam& a, const Beam& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.sequence < b.sequence;
}

void keep_top(std::vector<Beam>& beams, std::size_t b) {
  std::sort(beams.begin(), beams.end(), beam_before);
  if (beams.size() > b) beams.resize(b);
}

}  // namespace

double score_sequence(std::string_view query, std::span<const std::string> sequence,
                      const CorpusIndex& index) {
  const Embedder& embedder = index.embedder();
  return cosine(embedder.embed(query), embedder.embed(sequence_text(sequence, index)));
}

SequenceScorer make_cosine_scorer(const CorpusIndex& index) {
  struct State {
    std::string query;
    VectorXr embedding;
    bool ready = false;
  };
  auto state = std::make_shared<State>();
  return [&index, state](std::string_view query, std::span<const std::string> sequence) {
    if (!state->ready || state->query != query) {
      state->query = std::string(query);
      state->embedding = index.embedder().embed(query);
      state->ready = true;
    }
    return cosine(state->embedding, index.embedder().embed(sequence_text(sequence, index)));
  };
}

BeamSearchResult diverse_beam_search(std::string_view query, std::span<const std::string> initial_ids,
                                     const CorpusIndex& index, const ExpansionConfig& config) {
  config.validate();
  const SequenceScorer scorer = config.scorer ? config.scorer : make_cosine_scorer(index);

  BeamSearchResult result;
  std::vector<Beam> current;
  std::unordered_set<std::string> seeded;
  for (const auto& id : initial_ids) {
    if (!index.has_triple(id)) throw LookupError("unknown initial triple '" + id + "'");
    if (!seeded.insert(id).second) continue;
    std::vector<std::string> seq{id};
    const double s = scorer(query, seq);
    current.push_back({s, std::move(seq)});
  }
  keep_top(current, config.beam_width);
  if (current.empty()) return result;

  for (std::size_t step = 1; step < config.max_length; ++step) {
    std::unordered_set<std::string> previous;
    for (const auto& beam : current) previous.insert(beam.sequence.begin(), beam.sequence.end());

    std::vector<Beam> pool;
    for (const auto& beam : current) {
      std::vector<Beam> candidates;
      for (const auto& t : index.neighbours(beam.sequence.back())) {
        if (previous.contains(t)) continue;
        Beam extended{0.0, beam.sequence};
        extended.sequence.push_back(t);
        extended.score = beam.score + scorer(query, extended.sequence);
        candidates.push_back(std::move(extended));
      }
      if (candidates.empty()) {
        if (config.keep_stranded_beams) pool.push_back(beam);
        continue;
      }
      std::sort(candidates.begin(), candidates.end(), beam_before);
      if (candidates.size() > config.neighbour_cap) candidates.resize(config.neighbour_cap);
      for (std::size_t n = 0; n < candidates.size(); ++n) {
        if (config.diversity) candidates[n].score *= diversity_weight(n, config.gamma);
        pool.push_back(std::move(candidates[n]));
      }
    }
    if (pool.empty()) {
      result.stopped_early = true;
      break;
    }
    keep_top(pool, config.beam_width);
    current = std::move(pool);
    result.steps_completed = step;
  }
  result.beams = std::move(current);
  return result;
}

std::vector<std::string> flatten_beams(std::span<const Beam> beams) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::size_t longest = 0;
  for (const auto& b : beams) longest = std::max(longest, b.sequence.size());
  for (std::size_t pos = 0; pos < longest; ++pos) {
    for (const auto& b : beams) {
      if (pos < b.sequence.size() && seen.insert(b.sequence[pos]).second) out.push_back(b.sequence[pos]);
    }
  }
  return out;
}

namespace {

GraphRetrieval expand_and_fuse(std::string_view query, const CorpusIndex& index,
                               const GraphRetrievalOptions& options, GraphRetrieval result,
                               std::string provenance) {
  result.search = diverse_beam_search(query, result.initial_nodes, index, options.expansion);

  const auto passage_ids = passages_of_triples(index, flatten_beams(result.search.beams));
  result.expanded.provenance = "expansion";
  for (std::size_t i = 0; i < passage_ids.size(); ++i) {
    result.expanded.entries.push_back({passage_ids[i], 1.0 / static_cast<double>(i + 1)});
  }

  const RankedList parts[] = {result.expanded, result.base};
  result.fused = rrf_fuse(parts, options.retrieval.rrf_constant);
  result.fused.truncate(options.output_k);
  result.fused.provenance = std::move(provenance);
  return result;
}

}  // namespace

GraphRetrieval sync_ge_retrieve(std::string_view query, const CorpusIndex& index,
                                const GraphRetrievalOptions& options, Gateway& gateway, int iteration,
                                std::optional<std::span<const ProximalTriple>> memory) {
  GraphRetrieval result;
  result.base = base_search(index, query, View::passages, options.base_k, options.retrieval);
  result.proximals = read_proximal(index, result.base, query, memory, gateway, options.read_cap, iteration);
  result.initial_nodes = locate_initial_nodes(result.proximals, index, options.retrieval);
  return expand_and_fuse(query, index, options, std::move(result), "sync-ge");
}

GraphRetrieval naive_ge_retrieve(std::string_view query, const CorpusIndex& index,
                                 const GraphRetrievalOptions& options) {
  GraphRetrieval result;
  result.base = base_search(index, query, View::passages, options.base_k, options.retrieval);
  for (const auto& entry : result.base.entries) {
    const auto& owned = index.triples_of_passage(entry.id);
    result.initial_nodes.insert(result.initial_nodes.end(), owned.begin(), owned.end());
  }
  return expand_and_fuse(query, index, options, std::move(result), "naive-ge");
}

}  // namespace hopgraph
