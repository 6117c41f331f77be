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
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hopgraph/corpus_index.hpp"
#include "hopgraph/eval.hpp"
#include "hopgraph/llm_gateway.hpp"

namespace hopgraph::testing {

std::filesystem::path fixture_dir();

/// Loads tests/fixtures/<name>/{passages,triples}.jsonl.
CorpusIndex load_fixture_corpus(const std::string& name, int dim = 256);

/// Titles of the passages rendered into a reader prompt's {docs}.
std::vector<std::string> doc_titles(const std::string& docs);

// Walkthrough fixture: the cathedral question and its scripted LLM.
inline constexpr const char* kWalkthroughQuestion =
    "When did the location of the basilica which is named for the same saint that the Bremen Cathedral is "
    "named for become a country?";
inline constexpr const char* kWalkthroughRewrite =
    "What is the location of the basilica dedicated to St. Peter, and when did that location become a country?";
inline constexpr const char* kWalkthroughReason =
    "The provided facts do not contain information about the location of the basilica named for St. Peter, nor "
    "do they provide any details about when it became a country. The facts only mention the dedication of "
    "other cathedrals to different saints.";

/// Reader facts come from a per-title table; the reasoner answers once the
/// memory mentions 1929; the rewriter always returns the walkthrough rewrite.
ScriptedBackend::Handler walkthrough_handler();

// Three-hop fixture: six company -> owner -> chief -> honour chains plus
// twelve distractor passages.
struct Chain {
  std::string company, owner, chief, honour, founded, city, birthplace;
};

struct ThreeHopFixture {
  std::vector<Chain> chains;
  std::vector<Passage> passages;
  std::vector<Triple> triples;
  std::vector<EvalQuestion> questions;  // gold = hop 1, 2, 3 passage ids
};

const ThreeHopFixture& three_hop();
CorpusIndex three_hop_index(int dim = 256);

/// Reader that reports the first chain fact when the question's hop-1
/// passage is among the docs; reasoner answers when the memory holds the
/// honour; rewriter asks about the owner.
ScriptedBackend::Handler three_hop_handler(const ThreeHopFixture& fixture);

/// Backend that forwards to another and remembers every answered request.
class RecordingBackend final : public LlmBackend {
 public:
  explicit RecordingBackend(std::shared_ptr<LlmBackend> inner) : inner_(std::move(inner)) {}

  std::string name() const override { return inner_->name(); }
  Completion complete(const CompletionRequest& request) override;

  /// JSONL lines {"kind", "key", "response"}, first occurrence per key, in call order.
  std::string fixtures_jsonl() const;

 private:
  struct Entry {
    std::string kind, key, response;
  };
  std::shared_ptr<LlmBackend> inner_;
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
};

}  // namespace hopgraph::testing
