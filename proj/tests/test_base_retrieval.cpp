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

#include <algorithm>
#include <cmath>
#include <random>

#include "hopgraph/base_retrieval.hpp"
#include "hopgraph/errors.hpp"
#include "oracles.hpp"

using namespace hopgraph;

namespace {

RankedList list_of(std::initializer_list<std::pair<const char*, double>> items) {
  RankedList out;
  for (const auto& [id, score] : items) out.entries.push_back({id, score});
  return out;
}

}  // namespace

TEST_SUITE("base_retrieval") {
  TEST_CASE("bm25 two-document hand case") {
    const auto index = oracle::bm25_two_doc_index();
    const auto hits = bm25_search(index, "apple banana", View::passages, 10);
    REQUIRE(hits.size() == 2);
    CHECK(hits.entries[0].id == "D1");
    CHECK(hits.entries[1].id == "D2");
    CHECK(std::abs(hits.entries[0].score - oracle::kBm25D1) < 1e-9);
    CHECK(std::abs(hits.entries[1].score - oracle::kBm25D2) < 1e-9);
    CHECK(hits.provenance == "bm25");
  }

  TEST_CASE("bm25 counts repeated query terms once and omits zero scores") {
    const auto index = oracle::bm25_two_doc_index();
    CHECK(bm25_search(index, "apple apple banana", View::passages, 10) ==
          bm25_search(index, "apple banana", View::passages, 10));
    const auto only = bm25_search(index, "cherry", View::passages, 10);
    REQUIRE(only.size() == 1);
    CHECK(only.entries[0].id == "D2");
    CHECK(bm25_search(index, "zebra", View::passages, 10).empty());
    CHECK(bm25_search(index, "apple banana", View::passages, 1).size() == 1);
  }

  TEST_CASE("bm25 scores a single-document corpus") {
    const auto index = build_index({{"P", "", "solo text"}}, {}, std::make_shared<HashEmbedder>(16));
    const auto hits = bm25_search(index, "solo", View::passages, 5);
    REQUIRE(hits.size() == 1);
    CHECK(hits.entries[0].score > 0.0);
  }

  TEST_CASE("dense search equals a brute-force cosine scan") {
    const auto corpus = oracle::random_corpus(300, 11);
    const auto index = build_index(corpus, {}, std::make_shared<HashEmbedder>(64));
    for (const char* q : {"river stone", "amber", "the quick fox"}) {
      const auto expected = oracle::brute_force_dense(corpus, q, 64, 20);
      const auto got = dense_search(index, q, View::passages, 20);
      REQUIRE(got.size() == expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got.entries[i].id == expected[i].first);
        CHECK(std::abs(got.entries[i].score - expected[i].second) < 1e-9);
      }
    }
  }

  TEST_CASE("dense search on an empty view") {
    const auto index = build_index({{"P", "", "x y z"}}, {}, std::make_shared<HashEmbedder>(16));
    CHECK(dense_search(index, "x", View::triples, 3).empty());
  }

  TEST_CASE("rrf hand case") {
    const RankedList lists[] = {list_of({{"A", 9.0}, {"B", 1.0}}), list_of({{"B", 0.3}, {"C", 0.2}, {"A", 0.1}})};
    const auto fused = rrf_fuse(lists, 60);
    REQUIRE(fused.ids() == std::vector<std::string>{"B", "A", "C"});
    CHECK(std::abs(fused.entries[0].score - 0.03252247488101534) < 1e-9);
    CHECK(std::abs(fused.entries[1].score - 0.032266458495966696) < 1e-9);
    CHECK(std::abs(fused.entries[2].score - 0.016129032258064516) < 1e-9);
  }

  TEST_CASE("rrf ignores input scores") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int round = 0; round < 50; ++round) {
      auto lists = oracle::random_rankings(rng, 4, 12);
      const auto before = rrf_fuse(lists, 60);
      for (auto& l : lists) {
        const double s = scale(rng);
        for (auto& e : l.entries) e.score *= s;
      }
      CHECK(rrf_fuse(lists, 60) == before);
    }
  }

  TEST_CASE("rrf output is sorted with unique ids and ties broken by id") {
    const RankedList lists[] = {list_of({{"Z", 1}}), list_of({{"Y", 1}})};
    const auto fused = rrf_fuse(lists, 60);
    CHECK(fused.ids() == std::vector<std::string>{"Y", "Z"});
    CHECK(rrf_fuse(std::span<const RankedList>{}, 60).empty());
  }

  TEST_CASE("hybrid is the rrf of bm25 and dense at the same k") {
    const auto corpus = oracle::random_corpus(80, 5);
    const auto index = build_index(corpus, {}, std::make_shared<HashEmbedder>(32));
    RetrievalConfig config;
    const RankedList parts[] = {bm25_search(index, "amber river", View::passages, 7),
                                dense_search(index, "amber river", View::passages, 7)};
    auto expected = rrf_fuse(parts, 60);
    expected.truncate(7);
    const auto got = hybrid_search(index, "amber river", View::passages, 7, config);
    CHECK(got.ids() == expected.ids());
    config.retriever = RetrieverKind::bm25;
    CHECK(base_search(index, "amber river", View::passages, 7, config).ids() == parts[0].ids());
    config.retriever = RetrieverKind::dense;
    CHECK(base_search(index, "amber river", View::passages, 7, config).ids() == parts[1].ids());
  }

  TEST_CASE("ranked lists are ordered and unique") {
    const auto corpus = oracle::random_corpus(120, 9);
    const auto index = build_index(corpus, {}, std::make_shared<HashEmbedder>(32));
    RetrievalConfig config;
    for (auto kind : {RetrieverKind::bm25, RetrieverKind::dense, RetrieverKind::hybrid}) {
      config.retriever = kind;
      const auto list = base_search(index, "stone fox amber", View::passages, 15, config);
      CHECK(list.size() <= 15);
      for (std::size_t i = 1; i < list.size(); ++i) {
        CHECK(list.entries[i - 1].score >= list.entries[i].score);
        if (list.entries[i - 1].score == list.entries[i].score) CHECK(list.entries[i - 1].id < list.entries[i].id);
      }
      auto ids = list.ids();
      std::sort(ids.begin(), ids.end());
      CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    }
  }

  TEST_CASE("config validation and parsing") {
    RetrievalConfig c;
    CHECK_NOTHROW(c.validate());
    c.k = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.bm25_b = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.rrf_constant = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK(parse_retriever_kind("dense") == RetrieverKind::dense);
    CHECK_THROWS_AS(parse_retriever_kind("colbert"), ConfigError);
  }
}
