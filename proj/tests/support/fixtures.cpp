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

#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hopgraph/persistence.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph::testing {

std::filesystem::path fixture_dir() { return HOPGRAPH_FIXTURE_DIR; }

CorpusIndex load_fixture_corpus(const std::string& name, int dim) {
  const auto dir = fixture_dir() / name;
  return build_index(read_passages(dir / "passages.jsonl"), read_triples(dir / "triples.jsonl"),
                     std::make_shared<HashEmbedder>(dim));
}

std::vector<std::string> doc_titles(const std::string& docs) {
  std::vector<std::string> out;
  bool block_start = true;
  std::istringstream in(docs);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      block_start = true;
      continue;
    }
    if (block_start) out.push_back(line);
    block_start = false;
  }
  return out;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string facts_or_none(const std::vector<ProximalTriple>& facts) {
  return facts.empty() ? std::string("No relevant facts.") : format_facts(facts);
}

std::string var(const CompletionRequest& r, const std::string& name) {
  auto it = r.variables.find(name);
  return it == r.variables.end() ? std::string() : it->second;
}

bool is_reader(const CompletionRequest& r) { return r.kind == "reader" || r.kind == "reader_with_memory"; }

}  // namespace

ScriptedBackend::Handler walkthrough_handler() {
  return [](const CompletionRequest& r) -> std::optional<std::string> {
    if (is_reader(r)) {
      // title -> (cue, facts). Cued facts are reported once the question, the
      // memory or another cued fact from the same read names the cue.
      static const std::map<std::string, std::pair<std::string, std::vector<ProximalTriple>>> table = {
          {"Bremen Cathedral",
           {"", {{"Bremen Cathedral", "dedicated to", "St. Peter"}, {"Bremen", "is located in", "Germany"}}}},
          {"Alatri Cathedral",
           {"",
            {{"Alatri Cathedral", "dedicated to", "Saint Paul"},
             {"Alatri Cathedral", "co-cathedral of", "Diocese Anagni-Alatri"}}}},
          {"Lund Cathedral", {"", {{"Lund Cathedral", "dedicated to", "Saint Lawrence"}}}},
          {"St. Peter's Basilica", {"St. Peter", {{"St. Peter's Basilica", "located in", "Vatican City"}}}},
          {"Vatican City", {"Vatican City", {{"Vatican City", "became a country in", "1929"}}}},
      };
      const auto titles = doc_titles(var(r, "docs"));
      std::string known = var(r, "query") + "\n" + var(r, "triples");
      std::vector<ProximalTriple> facts;
      std::set<std::string> used;
      for (bool grew = true; grew;) {
        grew = false;
        for (const auto& title : titles) {
          auto it = table.find(title);
          if (it == table.end() || used.contains(title)) continue;
          const auto& [cue, found] = it->second;
          if (!cue.empty() && known.find(cue) == std::string::npos) continue;
          used.insert(title);
          facts.insert(facts.end(), found.begin(), found.end());
          if (!cue.empty()) known += "\n" + format_facts(found);
          grew = true;
        }
      }
      return facts_or_none(facts);
    }
    if (r.kind == "reasoner") {
      if (var(r, "triples").find("1929") != std::string::npos) return "Answerable: Yes\nAnswer: 1929";
      return std::string("Answerable: No\nWhy: ") + kWalkthroughReason;
    }
    if (r.kind == "rewriter") return std::string("Next Question: ") + kWalkthroughRewrite;
    if (r.kind == "qa_with_passages" || r.kind == "qa_no_passages") return "1929";
    return std::nullopt;
  };
}

// --- three-hop --------------------------------------------------------------

namespace {

ThreeHopFixture build_three_hop() {
  ThreeHopFixture f;
  f.chains = {
      {"Kestrel Dynamics", "Halvorsen Group", "Ingrid Tallis", "Vesper Medal", "1971", "Oslo", "Lyon"},
      {"Orvane Labs", "Marrow Holdings", "Mateo Ruiz", "Golden Lyre", "1972", "Porto", "Quito"},
      {"Pellucid Systems", "Ostrava Capital", "Yuki Arakawa", "Orchid Laurel", "1973", "Gdansk", "Sapporo"},
      {"Quillon Foods", "Lindqvist Partners", "Desmond Okafor", "Meridian Cup", "1974", "Leeds", "Lagos"},
      {"Brisa Motors", "Corvid Industries", "Priya Menon", "Cobalt Star", "1975", "Tampere", "Kochi"},
      {"Tamsin Textiles", "Saffron Ventures", "Lars Eklund", "Aster Ribbon", "1976", "Brno", "Malmo"},
  };
  const auto add_triple = [&](const std::string& pid, std::string s, std::string p, std::string o) {
    const std::size_t n = static_cast<std::size_t>(
        std::count_if(f.triples.begin(), f.triples.end(), [&](const Triple& t) { return t.passage_id == pid; }));
    f.triples.push_back({pid + "#" + std::to_string(n), std::move(s), std::move(p), std::move(o), pid});
  };

  for (std::size_t i = 0; i < f.chains.size(); ++i) {
    const Chain& c = f.chains[i];
    const std::string base = "C" + std::to_string(i + 1);
    f.passages.push_back({base + "a", c.company,
                          c.company + " was bought by " + c.owner + " in 1998. " + c.company +
                              " was founded in " + c.founded + "."});
    f.passages.push_back({base + "b", c.owner,
                          c.owner + " is a firm headquartered in " + c.city + ". Its chief is " + c.chief + "."});
    f.passages.push_back({base + "c", c.chief,
                          c.chief + ", born in " + c.birthplace + ", received " + c.honour + " honours in 2004."});
    add_triple(base + "a", c.company, "bought by", c.owner);
    add_triple(base + "a", c.company, "founded in", c.founded);
    add_triple(base + "b", c.owner, "has chief", c.chief);
    add_triple(base + "b", c.owner, "headquartered in", c.city);
    add_triple(base + "c", c.chief, "received", c.honour);
    add_triple(base + "c", c.chief, "born in", c.birthplace);
    f.questions.push_back({"q" + std::to_string(i + 1),
                           "Which prize did the chief of the firm that bought " + c.company + " win?",
                           {base + "a", base + "b", base + "c"},
                           {c.honour}});
  }

  const std::vector<std::string> firms = {"Apex Forge",    "Birch Analytics", "Cinder Works",  "Delta Loom",
                                          "Ember Foundry", "Fjord Mining",    "Granite Media", "Harbor Optics",
                                          "Iris Pharma",   "Juniper Rail",    "Krona Steel",   "Lumen Paper"};
  const std::vector<std::string> targets = {"Arden Mills",   "Bexley Tools", "Carver Paints", "Dunmore Glass",
                                            "Elwood Farms",  "Fenwick Audio", "Glenrock Tiles", "Hollis Books",
                                            "Ivory Salt",    "Jarrow Ships", "Keswick Wool",  "Larch Toys"};
  const std::vector<std::string> people = {"Ada Vance", "Ben Oro",   "Cleo Marsh", "Dov Ruhl", "Eli Stone", "Fay Lund",
                                           "Gus Hart",  "Hal Reyes", "Ivy Chen",   "Jon Park", "Kai Moss",  "Lea Voss"};
  for (std::size_t k = 0; k < firms.size(); ++k) {
    const std::string id = "D" + std::string(k < 9 ? "0" : "") + std::to_string(k + 1);
    f.passages.push_back({id, firms[k],
                          "The firm " + firms[k] + " bought " + targets[k] + ", but the chief of the firm, " +
                              people[k] + ", did not win a prize."});
    add_triple(id, firms[k], "bought", targets[k]);
    add_triple(id, firms[k], "has chief", people[k]);
  }
  return f;
}

}  // namespace

const ThreeHopFixture& three_hop() {
  static const ThreeHopFixture fixture = build_three_hop();
  return fixture;
}

CorpusIndex three_hop_index(int dim) {
  const auto& f = three_hop();
  return build_index(f.passages, f.triples, std::make_shared<HashEmbedder>(dim));
}

ScriptedBackend::Handler three_hop_handler(const ThreeHopFixture& fixture) {
  return [&fixture](const CompletionRequest& r) -> std::optional<std::string> {
    const std::string query = r.variables.contains("query") ? var(r, "query") : var(r, "question");
    const Chain* chain = nullptr;
    for (const auto& c : fixture.chains) {
      if (query.find(c.company) != std::string::npos || query.find(c.owner) != std::string::npos ||
          query.find(c.chief) != std::string::npos) {
        chain = &c;
      }
    }
    if (is_reader(r)) {
      std::vector<ProximalTriple> facts;
      if (chain) {
        const auto titles = doc_titles(var(r, "docs"));
        if (contains(titles, chain->company)) facts.push_back({chain->company, "bought by", chain->owner});
        if (contains(titles, chain->owner)) facts.push_back({chain->owner, "has chief", chain->chief});
        if (contains(titles, chain->chief)) facts.push_back({chain->chief, "received", chain->honour});
      }
      return facts_or_none(facts);
    }
    if (r.kind == "reasoner") {
      const std::string memory = var(r, "triples");
      if (chain && memory.find(chain->honour) != std::string::npos) {
        return "Answerable: Yes\nAnswer: " + chain->honour;
      }
      return "Answerable: No\nWhy: The facts do not name the honour.";
    }
    if (r.kind == "rewriter") {
      if (!chain) return "Next Question: " + query;
      if (var(r, "triples").find(chain->chief) != std::string::npos) {
        return "Next Question: Which honours did " + chain->chief + " receive?";
      }
      return "Next Question: Who is the chief of " + chain->owner + "?";
    }
    if (r.kind == "qa_with_passages" || r.kind == "qa_no_passages") {
      return chain ? chain->honour : std::string("unknown");
    }
    return std::nullopt;
  };
}

// --- recording --------------------------------------------------------------

Completion RecordingBackend::complete(const CompletionRequest& request) {
  Completion out = inner_->complete(request);
  std::lock_guard lock(mutex_);
  const std::string key = ScriptedBackend::key_for(request.variables);
  const bool seen = std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return e.kind == request.kind && e.key == key;
  });
  if (!seen) entries_.push_back({request.kind, key, out.text});
  return out;
}

std::string RecordingBackend::fixtures_jsonl() const {
  std::lock_guard lock(mutex_);
  std::string out;
  for (const auto& e : entries_) {
    out += nlohmann::json{{"kind", e.kind}, {"key", e.key}, {"response", e.response}}.dump() + "\n";
  }
  return out;
}

}  // namespace hopgraph::testing
