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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hopgraph/embedding.hpp"
#include "hopgraph/types.hpp"

namespace hopgraph {

/// Which half of the aligned index a retrieval runs over.
enum class View { passages, triples };

std::string_view to_string(View view) noexcept;

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(doc, tf);
  }
};

/// Term statistics for BM25 over one view. Postings are sorted by doc.
struct LexicalStats {
  std::vector<std::uint32_t> doc_length;
  std::map<std::string, std::vector<Posting>> postings;
  double avg_length = 0.0;

  std::size_t doc_count() const noexcept { return doc_length.size(); }

  static LexicalStats build(const std::vector<std::string>& texts);

  template <class Archive>
  void serialize(Archive& ar) {
    ar(doc_length, postings, avg_length);
  }
};

/// Precomputed pieces an index can be assembled from (see persistence).
struct IndexSidecars {
  LexicalStats passage_lexical;
  LexicalStats triple_lexical;
  EmbeddingMatrix passage_embeddings;
  EmbeddingMatrix triple_embeddings;
};

/// Aligned passage and triple indices with entity adjacency, BM25 statistics
/// and cached embeddings. Immutable after construction; safe to share
/// between threads.
class CorpusIndex {
 public:
  /// Validates and builds everything, embedding every passage body and
  /// serialized triple. Throws BuildError on duplicate or empty ids, blank
  /// triple fields, or a triple whose passage does not exist.
  static CorpusIndex build(std::vector<Passage> passages, std::vector<Triple> triples,
                           std::shared_ptr<const Embedder> embedder);

  /// Same validation as build(), but takes statistics and embeddings from
  /// a persisted index instead of recomputing them.
  static CorpusIndex assemble(std::vector<Passage> passages, std::vector<Triple> triples,
                              std::shared_ptr<const Embedder> embedder, IndexSidecars sidecars);

  const std::vector<Passage>& passages() const noexcept { return passages_; }
  const std::vector<Triple>& triples() const noexcept { return triples_; }

  const Passage& passage(std::string_view id) const;
  const Triple& triple(std::string_view id) const;
  bool has_passage(std::string_view id) const;
  bool has_triple(std::string_view id) const;

  /// Source passage of a triple. Throws LookupError for unknown ids.
  const std::string& triple_to_passage(std::string_view triple_id) const;

  /// Triples sharing a normalized head or tail entity with `triple_id`,
  /// excluding itself, sorted by id. Throws LookupError for unknown ids.
  std::vector<std::string> neighbours(std::string_view triple_id) const;

  /// Triples aligned to a passage, sorted by id.
  const std::vector<std::string>& triples_of_passage(std::string_view passage_id) const;

  /// normalized entity -> ids of triples with that subject or object (sorted).
  const std::map<std::string, std::vector<std::string>>& entity_adjacency() const noexcept {
    return adjacency_;
  }

  std::size_t size(View view) const noexcept;
  const std::string& item_id(View view, std::size_t pos) const;
  /// Text BM25 indexes for an item: title + body for passages, "s p o" for triples.
  std::string lexical_text(View view, std::size_t pos) const;
  std::optional<std::size_t> position(View view, std::string_view id) const;

  const LexicalStats& lexical(View view) const noexcept;
  const EmbeddingMatrix& embeddings(View view) const noexcept;
  const Embedder& embedder() const noexcept { return *embedder_; }
  std::shared_ptr<const Embedder> embedder_ptr() const noexcept { return embedder_; }

 private:
  CorpusIndex() = default;
  void validate_and_link();
  std::vector<std::string> lexical_texts(View view) const;

  std::vector<Passage> passages_;
  std::vector<Triple> triples_;
  std::unordered_map<std::string, std::size_t> passage_pos_;
  std::unordered_map<std::string, std::size_t> triple_pos_;
  std::vector<std::vector<std::string>> passage_triples_;
  // Normalized (subject, object) per triple, parallel to triples_.
  std::vector<std::pair<std::string, std::string>> triple_entities_;
  std::map<std::string, std::vector<std::string>> adjacency_;
  IndexSidecars sidecars_;
  std::shared_ptr<const Embedder> embedder_;
};

CorpusIndex build_index(std::vector<Passage> passages, std::vector<Triple> triples,
                        std::shared_ptr<const Embedder> embedder);

inline std::vector<std::string> get_neighbours(const CorpusIndex& index, std::string_view triple_id) {
  return index.neighbours(triple_id);
}

inline const std::string& triple_to_passage(const CorpusIndex& index, std::string_view triple_id) {
  return index.triple_to_passage(triple_id);
}

/// Maps triple ids to their source passages, keeping first occurrences.
std::vector<std::string> passages_of_triples(const CorpusIndex& index,
                                             const std::vector<std::string>& triple_ids);

}  // namespace hopgraph
