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
#include <span>
#include <string>
#include <string_view>

#include "hopgraph/corpus_index.hpp"
#include "hopgraph/types.hpp"

namespace hopgraph {

enum class RetrieverKind { bm25, dense, hybrid };

std::string_view to_string(RetrieverKind kind) noexcept;
RetrieverKind parse_retriever_kind(std::string_view name);

struct RetrievalConfig {
  RetrieverKind retriever = RetrieverKind::hybrid;
  std::size_t k = 15;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  int rrf_constant = 60;
  /// Embedder descriptor used when building an index: hash:<dim> or http:<endpoint>.
  std::string embedder = "hash:256";
  std::string embedding_model;

  /// Throws ConfigError when k < 1, rrf_constant < 1, k1 < 0 or b outside [0, 1].
  void validate() const;
};

/// Okapi BM25 with idf = ln(1 + (N - df + 0.5) / (df + 0.5)). Distinct query
/// terms contribute once each. Zero-score items are omitted.
RankedList bm25_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k,
                       double k1 = 1.2, double b = 0.75);

/// Exhaustive cosine scan against the cached embeddings.
RankedList dense_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k);

/// Reciprocal rank fusion: score(d) = sum over lists containing d of
/// 1 / (rrf_constant + rank), rank starting at 1. Input scores are ignored.
RankedList rrf_fuse(std::span<const RankedList> lists, int rrf_constant = 60);

/// rrf_fuse(bm25, dense) truncated to k; both constituents use the same k.
RankedList hybrid_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k,
                         const RetrievalConfig& config);

/// The configured base retriever with an explicit cutoff.
RankedList base_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k,
                       const RetrievalConfig& config);

}  // namespace hopgraph
