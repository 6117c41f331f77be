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

#include <doctest.h>

#include <sstream>

#include "hopgraph/config.hpp"
#include "hopgraph/errors.hpp"

using namespace hopgraph;

namespace {

EngineConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    const auto c = parse("");
    CHECK(c.retrieval.retriever == RetrieverKind::hybrid);
    CHECK(c.retrieval.k == 15);
    CHECK(c.expansion.beam_width == 10);
    CHECK(c.expansion.max_length == 2);
    CHECK(c.expansion.gamma == 20.0);
    CHECK(c.agent.max_iterations == 4);
    CHECK(c.llm.backend == "scripted");
    CHECK(c.eval.cutoffs == std::vector<std::size_t>{5, 10, 15});
  }

  TEST_CASE("values override defaults key by key") {
    const auto c = parse(
        "[retrieval]\nretriever = bm25\nk = 7\n"
        "[expansion]\nbeam_width = 4\nmax_length = 3\ndiversity = false\n"
        "[agent]\nmax_iterations = 2\nreuse_first_read = yes\n"
        "[llm]\nbackend = remote\nendpoint = http://localhost:1/v1/chat/completions\nmodel = m\n"
        "[eval]\ncutoffs = 1, 3\nqa = true\n");
    CHECK(c.retrieval.retriever == RetrieverKind::bm25);
    CHECK(c.retrieval.k == 7);
    CHECK(c.expansion.gamma == 8.0);
    CHECK_FALSE(c.expansion.diversity);
    CHECK(c.agent.reuse_first_read);
    CHECK(c.eval.cutoffs == std::vector<std::size_t>{1, 3});
    CHECK(c.single_step_options().base_k == 7);
    CHECK(c.single_step_options().read_cap == 10);
    CHECK(to_json(c)["expansion"]["gamma"] == 8.0);
    CHECK(make_backend(c.llm)->name() == "remote:m");
    CHECK(parse("[expansion]\nbeam_width = 4\ngamma = 3\n").expansion.gamma == 3.0);
  }

  TEST_CASE("bad input is rejected") {
    CHECK_THROWS_AS(parse("[retrieval]\nkk = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[nope]\nk = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[retrieval]\nk = seven\n"), ConfigError);
    CHECK_THROWS_AS(parse("[retrieval]\nk = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[expansion]\ndiversity = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse("[llm]\nbackend = other\n"), ConfigError);
    CHECK_THROWS_AS(parse("[eval]\ncutoffs = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("k = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[retrieval\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
    LlmConfig remote;
    remote.backend = "remote";
    CHECK_THROWS_AS(make_backend(remote), ConfigError);
  }
}
