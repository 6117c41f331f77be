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
#include <string>
#include <vector>

namespace hopgraph {

/// An indexed chunk of corpus text.
struct Passage {
  std::string id;
  std::string title;
  std::string body;
};

/// A (subject, predicate, object) fact aligned to exactly one passage.
struct Triple {
  std::string id;
  std::string subject;
  std::string predicate;
  std::string object;
  std::string passage_id;
};

/// A triple produced by an LLM read. It need not exist in the triple index.
struct ProximalTriple {
  std::string subject;
  std::string predicate;
  std::string object;

  friend bool operator==(const ProximalTriple&, const ProximalTriple&) = default;
};

struct RankedEntry {
  std::string id;
  double score = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Ordered retrieval result: scores non-increasing, ids unique.
struct RankedList {
  std::vector<RankedEntry> entries;
  std::string provenance;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.id);
    return out;
  }

  /// Keeps the first k entries.
  RankedList& truncate(std::size_t k) {
    if (entries.size() > k) entries.resize(k);
    return *this;
  }

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Sorts by score descending, ties by ascending id.
void sort_ranked(std::vector<RankedEntry>& entries);

}  // namespace hopgraph
