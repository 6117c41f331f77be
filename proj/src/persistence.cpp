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

#include "hopgraph/persistence.hpp"

#include <cereal/archives/binary.hpp>
#include <cereal/types/map.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include <fstream>
#include <map>

#include <json.hpp>

#include "hopgraph/errors.hpp"

namespace hopgraph {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string require_string(const json& obj, const char* field, std::size_t line, bool optional = false) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    if (optional) return {};
    throw FormatError("line " + std::to_string(line) + ": missing field '" + field + "'");
  }
  if (!it->is_string()) {
    throw FormatError("line " + std::to_string(line) + ": field '" + field + "' must be a string");
  }
  return it->get<std::string>();
}

template <typename F>
void for_each_json_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("line " + std::to_string(number) + ": " + e.what());
    }
    if (!obj.is_object()) throw FormatError("line " + std::to_string(number) + ": expected a JSON object");
    f(obj, number);
  }
}

std::ifstream open_in(const fs::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  return out;
}

// Eigen matrices go through cereal as (rows, cols, row-major data).
struct MatrixBlob {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> data;

  static MatrixBlob from(const EmbeddingMatrix& m) {
    MatrixBlob b{m.rows(), m.cols(), std::vector<double>(m.data(), m.data() + m.size())};
    return b;
  }
  EmbeddingMatrix to_matrix() const {
    if (static_cast<std::int64_t>(data.size()) != rows * cols) throw FormatError("corrupt embedding sidecar");
    EmbeddingMatrix m(rows, cols);
    std::copy(data.begin(), data.end(), m.data());
    return m;
  }
  template <class Archive>
  void serialize(Archive& ar) {
    ar(rows, cols, data);
  }
};

}  // namespace

std::vector<Passage> read_passages(std::istream& in) {
  std::vector<Passage> out;
  for_each_json_line(in, [&](const json& obj, std::size_t line) {
    out.push_back({require_string(obj, "id", line), require_string(obj, "title", line, true),
                   require_string(obj, "text", line)});
  });
  return out;
}

std::vector<Passage> read_passages(const fs::path& path) {
  auto in = open_in(path);
  return read_passages(in);
}

std::vector<Triple> read_triples(std::istream& in) {
  std::vector<Triple> out;
  std::map<std::string, std::size_t> ordinal;
  for_each_json_line(in, [&](const json& obj, std::size_t line) {
    Triple t;
    t.passage_id = require_string(obj, "passage_id", line);
    t.subject = require_string(obj, "subject", line);
    t.predicate = require_string(obj, "predicate", line);
    t.object = require_string(obj, "object", line);
    t.id = require_string(obj, "id", line, true);
    const std::size_t n = ordinal[t.passage_id]++;
    if (t.id.empty()) t.id = t.passage_id + "#" + std::to_string(n);
    out.push_back(std::move(t));
  });
  return out;
}

std::vector<Triple> read_triples(const fs::path& path) {
  auto in = open_in(path);
  return read_triples(in);
}

void write_passages(std::ostream& out, const std::vector<Passage>& passages) {
  for (const auto& p : passages) out << json{{"id", p.id}, {"title", p.title}, {"text", p.body}}.dump() << '\n';
}

void write_triples(std::ostream& out, const std::vector<Triple>& triples) {
  for (const auto& t : triples) {
    out << json{{"id", t.id},
                {"passage_id", t.passage_id},
                {"subject", t.subject},
                {"predicate", t.predicate},
                {"object", t.object}}
               .dump()
        << '\n';
  }
}

void save_index(const CorpusIndex& index, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create '" + dir.string() + "': " + ec.message());

  {
    auto out = open_out(dir / "passages.jsonl");
    write_passages(out, index.passages());
  }
  {
    auto out = open_out(dir / "triples.jsonl");
    write_triples(out, index.triples());
  }
  {
    auto out = open_out(dir / "lexical.bin", true);
    cereal::BinaryOutputArchive ar(out);
    ar(index.lexical(View::passages), index.lexical(View::triples));
  }
  {
    auto out = open_out(dir / "embeddings.bin", true);
    cereal::BinaryOutputArchive ar(out);
    ar(MatrixBlob::from(index.embeddings(View::passages)), MatrixBlob::from(index.embeddings(View::triples)));
  }
  const auto& pe = index.embeddings(View::passages);
  const auto& te = index.embeddings(View::triples);
  const std::int64_t dimension = pe.rows() > 0 ? pe.cols() : te.rows() > 0 ? te.cols() : index.embedder().dimension();
  const json manifest = {
      {"format_version", kIndexFormatVersion},
      {"embedder", index.embedder().name()},
      {"dimension", dimension},
      {"passages", index.size(View::passages)},
      {"triples", index.size(View::triples)},
  };
  auto out = open_out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
}

CorpusIndex load_index(const fs::path& dir, const std::string& http_model, const std::string& http_api_key) {
  json manifest;
  try {
    auto in = open_in(dir / "manifest.json");
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("bad index manifest: " + std::string(e.what()));
  }
  if (manifest.value("format_version", 0) != kIndexFormatVersion) {
    throw FormatError("unsupported index format version in '" + dir.string() + "'");
  }
  const std::string descriptor = manifest.value("embedder", "");
  auto embedder = make_embedder(descriptor, http_model, http_api_key);

  auto passages = read_passages(dir / "passages.jsonl");
  auto triples = read_triples(dir / "triples.jsonl");

  IndexSidecars sidecars;
  try {
    {
      auto in = open_in(dir / "lexical.bin", true);
      cereal::BinaryInputArchive ar(in);
      ar(sidecars.passage_lexical, sidecars.triple_lexical);
    }
    auto in = open_in(dir / "embeddings.bin", true);
    cereal::BinaryInputArchive ar(in);
    MatrixBlob p, t;
    ar(p, t);
    sidecars.passage_embeddings = p.to_matrix();
    sidecars.triple_embeddings = t.to_matrix();
  } catch (const cereal::Exception& e) {
    throw FormatError("corrupt index sidecar: " + std::string(e.what()));
  }
  const auto dim = manifest.value("dimension", std::int64_t{-1});
  if ((sidecars.passage_embeddings.rows() > 0 && sidecars.passage_embeddings.cols() != dim) ||
      (sidecars.triple_embeddings.rows() > 0 && sidecars.triple_embeddings.cols() != dim)) {
    throw FormatError("embedding dimension does not match the manifest");
  }
  return CorpusIndex::assemble(std::move(passages), std::move(triples), std::move(embedder), std::move(sidecars));
}

}  // namespace hopgraph
