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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hopgraph/corpus_index.hpp"

namespace hopgraph {

inline constexpr int kIndexFormatVersion = 1;

/// One {"id", "title", "text"} object per line. Blank lines are skipped.
std::vector<Passage> read_passages(std::istream& in);
std::vector<Passage> read_passages(const std::filesystem::path& path);

/// One {"id"?, "passage_id", "subject", "predicate", "object"} object per
/// line. A missing id becomes "<passage_id>#<ordinal>", counting from 0
/// within each passage in file order.
std::vector<Triple> read_triples(std::istream& in);
std::vector<Triple> read_triples(const std::filesystem::path& path);

void write_passages(std::ostream& out, const std::vector<Passage>& passages);
void write_triples(std::ostream& out, const std::vector<Triple>& triples);

/// Writes manifest.json, passages.jsonl, triples.jsonl, lexical.bin and
/// embeddings.bin into `dir`, creating it if needed.
void save_index(const CorpusIndex& index, const std::filesystem::path& dir);

/// Restores an index from save_index() output. The query embedder is
/// rebuilt from the manifest; http embedders take the model and key here.
CorpusIndex load_index(const std::filesystem::path& dir, const std::string& http_model = {},
                       const std::string& http_api_key = {});

}  // namespace hopgraph
