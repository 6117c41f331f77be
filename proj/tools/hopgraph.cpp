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

// Command-line driver: index building, retrieval, agent runs and evaluation.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "hopgraph/agent.hpp"
#include "hopgraph/config.hpp"
#include "hopgraph/errors.hpp"
#include "hopgraph/eval.hpp"
#include "hopgraph/graph_expansion.hpp"
#include "hopgraph/persistence.hpp"

namespace {

using namespace hopgraph;
using nlohmann::json;

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

EngineConfig load_or_default(const std::string& path) {
  if (path.empty()) return EngineConfig{};
  return load_config(path);
}

std::string api_key(const EngineConfig& config) {
  const char* key = std::getenv(config.llm.api_key_env.c_str());
  return key ? key : "";
}

Gateway make_gateway(const EngineConfig& config) {
  CompletionParams params;
  params.temperature = config.llm.temperature;
  params.max_output_tokens = config.llm.max_output_tokens;
  return Gateway(make_backend(config.llm), params);
}

void write_json(const std::string& path, const json& value) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << value.dump(2) << '\n';
}

std::vector<Triple> extract_triples(const std::vector<Passage>& passages, Gateway& gateway) {
  std::vector<Triple> out;
  for (const auto& p : passages) {
    try {
      const auto reply =
          gateway.complete(PromptKind::triple_extraction, {{"wiki_title", p.title}, {"passage", p.body}}, 0);
      const auto found = parse_extracted_triples(reply.text);
      if (found.empty()) std::cerr << "warning: no triples extracted for passage " << p.id << "\n";
      for (std::size_t i = 0; i < found.size(); ++i) {
        out.push_back({p.id + "#" + std::to_string(i), found[i].subject, found[i].predicate, found[i].object, p.id});
      }
    } catch (const std::exception& e) {
      std::cerr << "warning: extraction failed for passage " << p.id << ": " << e.what() << "\n";
    }
  }
  return out;
}

void print_ranking(std::ostream& out, const CorpusIndex& index, const RankedList& list) {
  out << std::left << std::setw(6) << "rank" << std::setw(16) << "passage" << std::setw(12) << "score"
      << "title\n";
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& e = list.entries[i];
    std::ostringstream score;
    score << std::fixed << std::setprecision(6) << e.score;
    out << std::left << std::setw(6) << (i + 1) << std::setw(16) << e.id << std::setw(12) << score.str()
        << index.passage(e.id).title << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopgraph: graph-expanded multi-hop passage retrieval"};
  app.require_subcommand(1);

  std::string config_path;

  // index build
  auto* index_cmd = app.add_subcommand("index", "Index management");
  index_cmd->require_subcommand(1);
  auto* build_cmd = index_cmd->add_subcommand("build", "Build and persist an index");
  std::string passages_path, triples_path, out_dir;
  bool extract_llm = false;
  build_cmd->add_option("--passages", passages_path, "Passages JSONL")->required();
  auto* triples_opt = build_cmd->add_option("--triples", triples_path, "Triples JSONL");
  auto* extract_opt = build_cmd->add_flag("--extract-llm", extract_llm, "Extract triples with the LLM");
  triples_opt->excludes(extract_opt);
  build_cmd->add_option("--out", out_dir, "Output directory")->required();
  build_cmd->add_option("--config", config_path, "Engine config file");

  // retrieve
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Single-step retrieval");
  std::string index_dir, query, mode = "base";
  std::optional<std::size_t> k;
  retrieve_cmd->add_option("--index", index_dir, "Index directory")->required();
  retrieve_cmd->add_option("--query", query, "Query text")->required();
  retrieve_cmd->add_option("--mode", mode, "base | naive-ge | sync-ge")
      ->check(CLI::IsMember({"base", "naive-ge", "sync-ge"}));
  retrieve_cmd->add_option("--k", k, "Result cutoff")->check(CLI::PositiveNumber);
  retrieve_cmd->add_option("--config", config_path, "Engine config file");

  // agent
  auto* agent_cmd = app.add_subcommand("agent", "Multi-step agent run");
  std::string trace_path;
  agent_cmd->add_option("--index", index_dir, "Index directory")->required();
  agent_cmd->add_option("--query", query, "Question")->required();
  agent_cmd->add_option("--config", config_path, "Engine config file");
  agent_cmd->add_option("--trace", trace_path, "Write the trace JSON here");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate over a dataset");
  std::string dataset_path, report_path, system = "base";
  eval_cmd->add_option("--index", index_dir, "Index directory")->required();
  eval_cmd->add_option("--dataset", dataset_path, "Dataset JSONL")->required();
  eval_cmd->add_option("--system", system, "base | naive-ge | sync-ge | agent")
      ->check(CLI::IsMember({"base", "naive-ge", "sync-ge", "agent"}));
  eval_cmd->add_option("--config", config_path, "Engine config file");
  eval_cmd->add_option("--report", report_path, "Write the report JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsageError;
  }

  try {
    EngineConfig config = load_or_default(config_path);

    if (*build_cmd) {
      if (!extract_llm && triples_path.empty()) {
        std::cerr << "index build: one of --triples or --extract-llm is required\n" << build_cmd->help();
        return kUsageError;
      }
      auto passages = read_passages(passages_path);
      std::vector<Triple> triples;
      if (extract_llm) {
        Gateway gateway = make_gateway(config);
        triples = extract_triples(passages, gateway);
      } else {
        triples = read_triples(triples_path);
      }
      auto embedder = make_embedder(config.retrieval.embedder, config.retrieval.embedding_model, api_key(config));
      const CorpusIndex index = build_index(std::move(passages), std::move(triples), std::move(embedder));
      save_index(index, out_dir);
      std::cout << "indexed " << index.size(View::passages) << " passages and " << index.size(View::triples)
                << " triples into " << out_dir << "\n";
      return 0;
    }

    if (*retrieve_cmd) {
      if (k) config.retrieval.k = *k;
      config.validate();
      const CorpusIndex index = load_index(index_dir, config.retrieval.embedding_model, api_key(config));
      RankedList list;
      if (mode == "base") {
        list = base_search(index, query, View::passages, config.retrieval.k, config.retrieval);
      } else if (mode == "naive-ge") {
        list = naive_ge_retrieve(query, index, config.single_step_options()).fused;
      } else {
        Gateway gateway = make_gateway(config);
        list = sync_ge_retrieve(query, index, config.single_step_options(), gateway, 1).fused;
      }
      print_ranking(std::cout, index, list);
      return 0;
    }

    if (*agent_cmd) {
      const CorpusIndex index = load_index(index_dir, config.retrieval.embedding_model, api_key(config));
      Gateway gateway = make_gateway(config);
      std::optional<AgentTrace> trace;
      int status = 0;
      try {
        trace = run_agent(query, index, config.agent_options(), gateway);
      } catch (const AgentRunError& e) {
        std::cerr << "error: " << e.what() << "\n";
        trace = e.partial_trace();
        status = kRuntimeError;
      }
      if (!trace_path.empty()) {
        json out = to_json(*trace);
        out["config"] = to_json(config);
        write_json(trace_path, out);
      }
      if (status != 0) return status;
      print_ranking(std::cout, index, trace->final_list);
      std::cout << "termination: " << to_string(*trace->termination) << "\n";
      std::cout << "answer: " << trace->answer << "\n";
      return 0;
    }

    if (*eval_cmd) {
      const CorpusIndex index = load_index(index_dir, config.retrieval.embedding_model, api_key(config));
      const auto dataset = read_dataset(dataset_path);
      const Gateway gateway = make_gateway(config);
      const EvalReport report = run_eval(dataset, index, parse_system_mode(system), config, gateway);
      if (!report_path.empty()) write_json(report_path, to_json(report));
      std::cout << format_table(report);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
