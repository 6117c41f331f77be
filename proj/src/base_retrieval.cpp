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

#include "hopgraph/base_retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "hopgraph/errors.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph {

void sort_ranked(std::vector<RankedEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

std::string_view to_string(RetrieverKind kind) noexcept {
  switch (kind) {
    case RetrieverKind::bm25: return "bm25";
    case RetrieverKind::dense: return "dense";
    case RetrieverKind::hybrid: return "hybrid";
  }
  return "?";
}

RetrieverKind parse_retriever_kind(std::string_view name) {
  if (name == "bm25") return RetrieverKind::bm25;
  if (name == "dense") return RetrieverKind::dense;
  if (name == "hybrid") return RetrieverKind::hybrid;
  throw ConfigError("unknown retriever '" + std::string(name) + "' (expected bm25, dense or hybrid)");
}

void RetrievalConfig::validate() const {
  if (k < 1) throw ConfigError("retrieval.k must be >= 1");
  if (rrf_constant < 1) throw ConfigError("retrieval.rrf_constant must be >= 1");
  if (bm25_k1 < 0) throw ConfigError("retrieval.bm25_k1 must be >= 0");
  if (bm25_b < 0 || bm25_b > 1) throw ConfigError("retrieval.bm25_b must lie in [0, 1]");
}

namespace {

// Keeps the best k of (position, score) pairs under score desc / id asc.
RankedList top_k(const CorpusIndex& index, View view, std::vector<std::pair<std::size_t, double>> scored,
                 std::size_t k, std::string provenance) {
  const auto better = [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return index.item_id(view, a.first) < index.item_id(view, b.first);
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), better);
  RankedList out;
  out.provenance = std::move(provenance);
  out.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.entries.push_back({index.item_id(view, scored[i].first), scored[i].second});
  }
  return out;
}

}  // namespace

RankedList bm25_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k,
                       double k1, double b) {
  const LexicalStats& stats = index.lexical(view);
  const auto tokens = tokenize(query);
  const std::set<std::string> terms(tokens.begin(), tokens.end());
  const double n_docs = static_cast<double>(stats.doc_count());

  std::unordered_map<std::size_t, double> acc;
  for (const auto& term : terms) {
    auto it = stats.postings.find(term);
    if (it == stats.postings.end()) continue;
    const double df = static_cast<double>(it->second.size());
    const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
    for (const Posting& p : it->second) {
      const double tf = p.tf;
      const double len_ratio = stats.avg_length > 0 ? stats.doc_length[p.doc] / stats.avg_length : 0.0;
      acc[p.doc] += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len_ratio));
    }
  }

  std::vector<std::pair<std::size_t, double>> scored;
  scored.reserve(acc.size());
  for (const auto& [doc, score] : acc) {
    if (score > 0.0) scored.emplace_back(doc, score);
  }
  return top_k(index, view, std::move(scored), k, "bm25");
}

RankedList dense_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k) {
  const EmbeddingMatrix& items = index.embeddings(view);
  if (items.rows() == 0) return RankedList{{}, "dense"};
  const VectorXr q = index.embedder().embed(query);
  if (q.size() != items.cols()) {
    throw Error("query embedding has dimension " + std::to_string(q.size()) + ", index has " +
                std::to_string(items.cols()));
  }
  // Stored rows and q are unit length (or zero), so the product is the cosine.
  const VectorXr scores = items * q;
  std::vector<std::pair<std::size_t, double>> scored(static_cast<std::size_t>(scores.size()));
  // Rounded so that mathematically equal cosines tie and fall back to id order.
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    scored[static_cast<std::size_t>(i)] = {static_cast<std::size_t>(i), std::round(scores[i] * 1e12) / 1e12};
  }
  return top_k(index, view, std::move(scored), k, "dense");
}

RankedList rrf_fuse(std::span<const RankedList> lists, int rrf_constant) {
  std::unordered_map<std::string, double> fused;
  std::vector<std::string> order;
  for (const auto& list : lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const double contribution = 1.0 / (static_cast<double>(rrf_constant) + static_cast<double>(r + 1));
      auto [it, inserted] = fused.try_emplace(list.entries[r].id, 0.0);
      if (inserted) order.push_back(list.entries[r].id);
      it->second += contribution;
    }
  }
  RankedList out;
  out.provenance = "rrf";
  out.entries.reserve(order.size());
  for (auto& id : order) {
    const double score = fused[id];
    out.entries.push_back({std::move(id), score});
  }
  sort_ranked(out.entries);
  return out;
}

RankedList hybrid_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k,
                         const RetrievalConfig& config) {
  const RankedList parts[] = {bm25_search(index, query, view, k, config.bm25_k1, config.bm25_b),
                              dense_search(index, query, view, k)};
  RankedList out = rrf_fuse(parts, config.rrf_constant);
  out.provenance = "hybrid";
  return std::move(out.truncate(k));
}

RankedList base_search(const CorpusIndex& index, std::string_view query, View view, std::size_t k,
                       const RetrievalConfig& config) {
  switch (config.retriever) {
    case RetrieverKind::bm25: return bm25_search(index, query, view, k, config.bm25_k1, config.bm25_b);
    case RetrieverKind::dense: return dense_search(index, query, view, k);
    case RetrieverKind::hybrid: return hybrid_search(index, query, view, k, config);
  }
  throw ConfigError("unhandled retriever kind");
}

}  // namespace hopgraph
