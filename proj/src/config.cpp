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

#include "hopgraph/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hopgraph/errors.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph {
namespace {

namespace pt = boost::property_tree;

template <typename T>
T parse_value(const std::string& section, const std::string& key, const std::string& raw) {
  std::istringstream in(raw);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw ConfigError("bad value for " + section + "." + key + ": '" + raw + "'");
  }
  return value;
}

template <>
bool parse_value<bool>(const std::string& section, const std::string& key, const std::string& raw) {
  const std::string v = to_lower(trim(raw));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for " + section + "." + key + ": '" + raw + "'");
}

template <>
std::string parse_value<std::string>(const std::string&, const std::string&, const std::string& raw) {
  return trim(raw);
}

std::vector<std::size_t> parse_cutoffs(const std::string& raw) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto k = parse_value<std::size_t>("eval", "cutoffs", item);
    if (k < 1) throw ConfigError("eval.cutoffs entries must be >= 1");
    out.push_back(k);
  }
  if (out.empty()) throw ConfigError("eval.cutoffs must list at least one cutoff");
  return out;
}

}  // namespace

GraphRetrievalOptions EngineConfig::single_step_options() const {
  GraphRetrievalOptions o;
  o.retrieval = retrieval;
  o.expansion = expansion;
  o.base_k = retrieval.k;
  o.output_k = retrieval.k;
  o.read_cap = agent.per_iteration_k;
  return o;
}

void EngineConfig::validate() const {
  retrieval.validate();
  expansion.validate();
  agent.validate();
  if (llm.backend != "scripted" && llm.backend != "remote") {
    throw ConfigError("llm.backend must be 'scripted' or 'remote'");
  }
  if (llm.max_retries < 1) throw ConfigError("llm.max_retries must be >= 1");
  if (llm.max_in_flight < 1) throw ConfigError("llm.max_in_flight must be >= 1");
  if (eval.workers < 1) throw ConfigError("eval.workers must be >= 1");
}

EngineConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }

  EngineConfig c;
  bool gamma_set = false;
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw ConfigError("config key '" + section + "' must be inside a section");
    }
    for (const auto& [key, node] : entries) {
      const std::string& v = node.data();
      const auto unknown = [&] { throw ConfigError("unknown config key " + section + "." + key); };
      if (section == "retrieval") {
        if (key == "retriever") c.retrieval.retriever = parse_retriever_kind(trim(v));
        else if (key == "k") c.retrieval.k = parse_value<std::size_t>(section, key, v);
        else if (key == "bm25_k1") c.retrieval.bm25_k1 = parse_value<double>(section, key, v);
        else if (key == "bm25_b") c.retrieval.bm25_b = parse_value<double>(section, key, v);
        else if (key == "rrf_constant") c.retrieval.rrf_constant = parse_value<int>(section, key, v);
        else if (key == "embedder") c.retrieval.embedder = parse_value<std::string>(section, key, v);
        else if (key == "embedding_model") c.retrieval.embedding_model = parse_value<std::string>(section, key, v);
        else unknown();
      } else if (section == "expansion") {
        if (key == "beam_width") c.expansion.beam_width = parse_value<std::size_t>(section, key, v);
        else if (key == "max_length") c.expansion.max_length = parse_value<std::size_t>(section, key, v);
        else if (key == "neighbour_cap") c.expansion.neighbour_cap = parse_value<std::size_t>(section, key, v);
        else if (key == "gamma") c.expansion.gamma = parse_value<double>(section, key, v), gamma_set = true;
        else if (key == "keep_stranded_beams") c.expansion.keep_stranded_beams = parse_value<bool>(section, key, v);
        else if (key == "diversity") c.expansion.diversity = parse_value<bool>(section, key, v);
        else unknown();
      } else if (section == "agent") {
        if (key == "max_iterations") c.agent.max_iterations = parse_value<std::size_t>(section, key, v);
        else if (key == "per_iteration_k") c.agent.per_iteration_k = parse_value<std::size_t>(section, key, v);
        else if (key == "passage_link_k") c.agent.passage_link_k = parse_value<std::size_t>(section, key, v);
        else if (key == "reuse_first_read") c.agent.reuse_first_read = parse_value<bool>(section, key, v);
        else unknown();
      } else if (section == "llm") {
        if (key == "backend") c.llm.backend = parse_value<std::string>(section, key, v);
        else if (key == "fixtures") c.llm.fixtures = parse_value<std::string>(section, key, v);
        else if (key == "endpoint") c.llm.endpoint = parse_value<std::string>(section, key, v);
        else if (key == "model") c.llm.model = parse_value<std::string>(section, key, v);
        else if (key == "api_key_env") c.llm.api_key_env = parse_value<std::string>(section, key, v);
        else if (key == "temperature") c.llm.temperature = parse_value<double>(section, key, v);
        else if (key == "max_output_tokens") c.llm.max_output_tokens = parse_value<int>(section, key, v);
        else if (key == "max_retries") c.llm.max_retries = parse_value<int>(section, key, v);
        else if (key == "backoff_ms") c.llm.backoff_ms = parse_value<int>(section, key, v);
        else if (key == "timeout_seconds") c.llm.timeout_seconds = parse_value<int>(section, key, v);
        else if (key == "max_in_flight") c.llm.max_in_flight = parse_value<int>(section, key, v);
        else unknown();
      } else if (section == "eval") {
        if (key == "cutoffs") c.eval.cutoffs = parse_cutoffs(v);
        else if (key == "workers") c.eval.workers = parse_value<std::size_t>(section, key, v);
        else if (key == "binary_recall") c.eval.binary_recall = parse_value<bool>(section, key, v);
        else if (key == "qa") c.eval.qa = parse_value<bool>(section, key, v);
        else if (key == "qa_passages") c.eval.qa_passages = parse_value<std::size_t>(section, key, v);
        else unknown();
      } else {
        throw ConfigError("unknown config section [" + section + "]");
      }
    }
  }
  if (!gamma_set) c.expansion.gamma = 2.0 * static_cast<double>(c.expansion.beam_width);
  c.validate();
  return c;
}

EngineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

nlohmann::json to_json(const EngineConfig& c) {
  return {
      {"retrieval",
       {{"retriever", std::string(to_string(c.retrieval.retriever))},
        {"k", c.retrieval.k},
        {"bm25_k1", c.retrieval.bm25_k1},
        {"bm25_b", c.retrieval.bm25_b},
        {"rrf_constant", c.retrieval.rrf_constant},
        {"embedder", c.retrieval.embedder},
        {"embedding_model", c.retrieval.embedding_model}}},
      {"expansion",
       {{"beam_width", c.expansion.beam_width},
        {"max_length", c.expansion.max_length},
        {"neighbour_cap", c.expansion.neighbour_cap},
        {"gamma", c.expansion.gamma},
        {"keep_stranded_beams", c.expansion.keep_stranded_beams},
        {"diversity", c.expansion.diversity}}},
      {"agent",
       {{"max_iterations", c.agent.max_iterations},
        {"per_iteration_k", c.agent.per_iteration_k},
        {"passage_link_k", c.agent.passage_link_k},
        {"reuse_first_read", c.agent.reuse_first_read}}},
      {"llm",
       {{"backend", c.llm.backend},
        {"fixtures", c.llm.fixtures},
        {"endpoint", c.llm.endpoint},
        {"model", c.llm.model},
        {"api_key_env", c.llm.api_key_env},
        {"temperature", c.llm.temperature},
        {"max_output_tokens", c.llm.max_output_tokens},
        {"max_retries", c.llm.max_retries},
        {"backoff_ms", c.llm.backoff_ms},
        {"timeout_seconds", c.llm.timeout_seconds},
        {"max_in_flight", c.llm.max_in_flight}}},
      {"eval",
       {{"cutoffs", c.eval.cutoffs},
        {"workers", c.eval.workers},
        {"binary_recall", c.eval.binary_recall},
        {"qa", c.eval.qa},
        {"qa_passages", c.eval.qa_passages}}},
  };
}

std::shared_ptr<LlmBackend> make_backend(const LlmConfig& config) {
  if (config.backend == "scripted") {
    auto backend = std::make_shared<ScriptedBackend>();
    if (!config.fixtures.empty()) backend->load_fixtures(config.fixtures);
    return backend;
  }
  if (config.backend == "remote") {
    if (config.endpoint.empty()) throw ConfigError("llm.endpoint is required for the remote backend");
    if (config.model.empty()) throw ConfigError("llm.model is required for the remote backend");
    RemoteBackend::Options o;
    o.endpoint = config.endpoint;
    o.model = config.model;
    if (const char* key = std::getenv(config.api_key_env.c_str())) o.api_key = key;
    o.max_retries = config.max_retries;
    o.backoff_ms = config.backoff_ms;
    o.timeout_seconds = config.timeout_seconds;
    o.max_in_flight = config.max_in_flight;
    return std::make_shared<RemoteBackend>(std::move(o));
  }
  throw ConfigError("unknown llm.backend '" + config.backend + "'");
}

}  // namespace hopgraph
