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

#include "hopgraph/corpus_index.hpp"

#include <algorithm>
#include <unordered_set>

#include "hopgraph/errors.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph {

std::string_view to_string(View view) noexcept {
  return view == View::passages ? "passages" : "triples";
}

LexicalStats LexicalStats::build(const std::vector<std::string>& texts) {
  LexicalStats stats;
  stats.doc_length.reserve(texts.size());
  double total = 0.0;
  for (std::size_t d = 0; d < texts.size(); ++d) {
    std::map<std::string, std::uint32_t> tf;
    const auto tokens = tokenize(texts[d]);
    for (const auto& tok : tokens) ++tf[tok];
    stats.doc_length.push_back(static_cast<std::uint32_t>(tokens.size()));
    total += static_cast<double>(tokens.size());
    for (auto& [term, count] : tf) {
      stats.postings[term].push_back({static_cast<std::uint32_t>(d), count});
    }
  }
  stats.avg_length = texts.empty() ? 0.0 : total / static_cast<double>(texts.size());
  return stats;
}

CorpusIndex CorpusIndex::build(std::vector<Passage> passages, std::vector<Triple> triples,
                               std::shared_ptr<const Embedder> embedder) {
  if (!embedder) throw BuildError("index build needs an embedder");
  CorpusIndex index;
  index.passages_ = std::move(passages);
  index.triples_ = std::move(triples);
  index.embedder_ = std::move(embedder);
  index.validate_and_link();

  index.sidecars_.passage_lexical = LexicalStats::build(index.lexical_texts(View::passages));
  index.sidecars_.triple_lexical = LexicalStats::build(index.lexical_texts(View::triples));

  std::vector<std::string> bodies;
  bodies.reserve(index.passages_.size());
  for (const auto& p : index.passages_) bodies.push_back(p.body);
  index.sidecars_.passage_embeddings = index.embedder_->embed_batch(bodies);
  index.sidecars_.triple_embeddings = index.embedder_->embed_batch(index.lexical_texts(View::triples));
  return index;
}

CorpusIndex CorpusIndex::assemble(std::vector<Passage> passages, std::vector<Triple> triples,
                                  std::shared_ptr<const Embedder> embedder, IndexSidecars sidecars) {
  if (!embedder) throw BuildError("index assembly needs an embedder");
  CorpusIndex index;
  index.passages_ = std::move(passages);
  index.triples_ = std::move(triples);
  index.embedder_ = std::move(embedder);
  index.validate_and_link();

  const auto check = [](std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
      throw BuildError(std::string(what) + " sidecar has " + std::to_string(got) + " rows, expected " +
                       std::to_string(expected));
    }
  };
  check(index.passages_.size(), sidecars.passage_lexical.doc_count(), "passage lexical");
  check(index.triples_.size(), sidecars.triple_lexical.doc_count(), "triple lexical");
  check(index.passages_.size(), static_cast<std::size_t>(sidecars.passage_embeddings.rows()),
        "passage embedding");
  check(index.triples_.size(), static_cast<std::size_t>(sidecars.triple_embeddings.rows()),
        "triple embedding");
  index.sidecars_ = std::move(sidecars);
  return index;
}

void CorpusIndex::validate_and_link() {
  passage_pos_.reserve(passages_.size());
  for (std::size_t i = 0; i < passages_.size(); ++i) {
    const auto& p = passages_[i];
    if (p.id.empty()) throw BuildError("passage at position " + std::to_string(i) + " has an empty id");
    if (!passage_pos_.emplace(p.id, i).second) throw BuildError("duplicate passage id '" + p.id + "'");
  }

  passage_triples_.assign(passages_.size(), {});
  triple_pos_.reserve(triples_.size());
  triple_entities_.reserve(triples_.size());
  for (std::size_t i = 0; i < triples_.size(); ++i) {
    auto& t = triples_[i];
    if (t.id.empty()) throw BuildError("triple at position " + std::to_string(i) + " has an empty id");
    if (!triple_pos_.emplace(t.id, i).second) throw BuildError("duplicate triple id '" + t.id + "'");
    t.subject = trim(t.subject);
    t.predicate = trim(t.predicate);
    t.object = trim(t.object);
    if (t.subject.empty() || t.predicate.empty() || t.object.empty()) {
      throw BuildError("triple '" + t.id + "' has a blank subject, predicate or object");
    }
    auto owner = passage_pos_.find(t.passage_id);
    if (owner == passage_pos_.end()) {
      throw BuildError("triple '" + t.id + "' references unknown passage '" + t.passage_id + "'");
    }
    passage_triples_[owner->second].push_back(t.id);

    auto head = normalize_entity(t.subject);
    auto tail = normalize_entity(t.object);
    adjacency_[head].push_back(t.id);
    if (tail != head) adjacency_[tail].push_back(t.id);
    triple_entities_.emplace_back(std::move(head), std::move(tail));
  }
  for (auto& ids : passage_triples_) std::sort(ids.begin(), ids.end());
  for (auto& [entity, ids] : adjacency_) std::sort(ids.begin(), ids.end());
}

std::vector<std::string> CorpusIndex::lexical_texts(View view) const {
  std::vector<std::string> out;
  out.reserve(size(view));
  for (std::size_t i = 0; i < size(view); ++i) out.push_back(lexical_text(view, i));
  return out;
}

const Passage& CorpusIndex::passage(std::string_view id) const {
  auto it = passage_pos_.find(std::string(id));
  if (it == passage_pos_.end()) throw LookupError("unknown passage id '" + std::string(id) + "'");
  return passages_[it->second];
}

const Triple& CorpusIndex::triple(std::string_view id) const {
  auto it = triple_pos_.find(std::string(id));
  if (it == triple_pos_.end()) throw LookupError("unknown triple id '" + std::string(id) + "'");
  return triples_[it->second];
}

bool CorpusIndex::has_passage(std::string_view id) const {
  return passage_pos_.contains(std::string(id));
}

bool CorpusIndex::has_triple(std::string_view id) const {
  return triple_pos_.contains(std::string(id));
}

const std::string& CorpusIndex::triple_to_passage(std::string_view triple_id) const {
  return triple(triple_id).passage_id;
}

std::vector<std::string> CorpusIndex::neighbours(std::string_view triple_id) const {
  auto it = triple_pos_.find(std::string(triple_id));
  if (it == triple_pos_.end()) throw LookupError("unknown triple id '" + std::string(triple_id) + "'");
  const auto& [head, tail] = triple_entities_[it->second];

  std::vector<std::string> out;
  for (const auto* key : {&head, &tail}) {
    auto adj = adjacency_.find(*key);
    if (adj == adjacency_.end()) continue;
    for (const auto& id : adj->second) {
      if (id != triple_id) out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::vector<std::string>& CorpusIndex::triples_of_passage(std::string_view passage_id) const {
  auto it = passage_pos_.find(std::string(passage_id));
  if (it == passage_pos_.end()) throw LookupError("unknown passage id '" + std::string(passage_id) + "'");
  return passage_triples_[it->second];
}

std::size_t CorpusIndex::size(View view) const noexcept {
  return view == View::passages ? passages_.size() : triples_.size();
}

const std::string& CorpusIndex::item_id(View view, std::size_t pos) const {
  return view == View::passages ? passages_.at(pos).id : triples_.at(pos).id;
}

std::string CorpusIndex::lexical_text(View view, std::size_t pos) const {
  if (view == View::passages) {
    const auto& p = passages_.at(pos);
    return p.title + "\n" + p.body;
  }
  return serialize_triple(triples_.at(pos));
}

std::optional<std::size_t> CorpusIndex::position(View view, std::string_view id) const {
  const auto& table = view == View::passages ? passage_pos_ : triple_pos_;
  auto it = table.find(std::string(id));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const LexicalStats& CorpusIndex::lexical(View view) const noexcept {
  return view == View::passages ? sidecars_.passage_lexical : sidecars_.triple_lexical;
}

const EmbeddingMatrix& CorpusIndex::embeddings(View view) const noexcept {
  return view == View::passages ? sidecars_.passage_embeddings : sidecars_.triple_embeddings;
}

CorpusIndex build_index(std::vector<Passage> passages, std::vector<Triple> triples,
                        std::shared_ptr<const Embedder> embedder) {
  return CorpusIndex::build(std::move(passages), std::move(triples), std::move(embedder));
}

std::vector<std::string> passages_of_triples(const CorpusIndex& index,
                                             const std::vector<std::string>& triple_ids) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& id : triple_ids) {
    const auto& pid = index.triple_to_passage(id);
    if (seen.insert(pid).second) out.push_back(pid);
  }
  return out;
}

}  // namespace hopgraph
