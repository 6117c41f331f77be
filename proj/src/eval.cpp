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

#include "hopgraph/eval.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "hopgraph/agent.hpp"
#include "hopgraph/errors.hpp"
#include "hopgraph/graph_expansion.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph {

using nlohmann::json;

std::vector<EvalQuestion> read_dataset(std::istream& in) {
  std::vector<EvalQuestion> out;
  std::string line;
  std::size_t number = 0;
  const auto fail = [&](const std::string& what) {
    throw FormatError("dataset line " + std::to_string(number) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(e.what());
    }
    EvalQuestion q;
    try {
      q.id = obj.at("id").get<std::string>();
      q.question = obj.at("question").get<std::string>();
      q.gold_passage_ids = obj.at("gold_passage_ids").get<std::vector<std::string>>();
      q.answers = obj.value("answers", std::vector<std::string>{});
    } catch (const json::exception& e) {
      fail(e.what());
    }
    if (q.gold_passage_ids.empty()) fail("gold_passage_ids must not be empty");
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<EvalQuestion> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dataset '" + path.string() + "'");
  return read_dataset(in);
}

double recall_at_k(std::span<const std::string> retrieved, std::span<const std::string> gold, std::size_t k,
                   bool binary) {
  if (gold.empty()) throw ContractError("recall_at_k needs a non-empty gold set");
  if (k < 1) throw ContractError("recall_at_k needs k >= 1");
  const std::unordered_set<std::string> wanted(gold.begin(), gold.end());
  std::unordered_set<std::string> found;
  for (std::size_t i = 0; i < std::min(k, retrieved.size()); ++i) {
    if (wanted.contains(retrieved[i])) found.insert(retrieved[i]);
  }
  if (binary) return found.size() == wanted.size() ? 1.0 : 0.0;
  return static_cast<double>(found.size()) / static_cast<double>(wanted.size());
}

std::string normalize_answer(std::string_view text) {
  std::u32string cps = utf8_to_codepoints(to_lower(text));
  std::u32string kept;
  kept.reserve(cps.size());
  for (char32_t c : cps) {
    if (u_ispunct(static_cast<UChar32>(c))) continue;
    kept.push_back(c);
  }
  std::vector<std::string> words;
  for (auto& w : whitespace_tokens(codepoints_to_utf8(kept))) {
    if (w == "a" || w == "an" || w == "the") continue;
    words.push_back(std::move(w));
  }
  return join(words, " ");
}

int exact_match(std::string_view prediction, std::span<const std::string> gold_answers) {
  const std::string p = normalize_answer(prediction);
  for (const auto& g : gold_answers) {
    if (normalize_answer(g) == p) return 1;
  }
  return 0;
}

namespace {

double f1_single(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::unordered_map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int common = 0;
  for (const auto& t : pred) {
    if (auto it = counts.find(t); it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double f1_answer(std::string_view prediction, std::span<const std::string> gold_answers) {
  const auto pred = whitespace_tokens(normalize_answer(prediction));
  double best = 0.0;
  for (const auto& g : gold_answers) best = std::max(best, f1_single(pred, whitespace_tokens(normalize_answer(g))));
  return best;
}

std::string_view to_string(SystemMode mode) noexcept {
  switch (mode) {
    case SystemMode::base: return "base";
    case SystemMode::naive_ge: return "naive-ge";
    case SystemMode::sync_ge: return "sync-ge";
    case SystemMode::agent: return "agent";
  }
  return "?";
}

SystemMode parse_system_mode(std::string_view name) {
  for (SystemMode m : {SystemMode::base, SystemMode::naive_ge, SystemMode::sync_ge, SystemMode::agent}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown system '" + std::string(name) + "' (expected base, naive-ge, sync-ge or agent)");
}

std::string answer_with_passages(std::string_view question, const CorpusIndex& index,
                                 std::span<const std::string> passage_ids, Gateway& gateway, int iteration) {
  std::string reply;
  if (passage_ids.empty()) {
    reply = gateway.complete(PromptKind::qa_no_passages, {{"question", std::string(question)}}, iteration).text;
  } else {
    std::string docs;
    for (const auto& id : passage_ids) {
      const Passage& p = index.passage(id);
      docs += render_prompt(PromptKind::qa_passage, {{"title", p.title}, {"text", p.body}});
      docs += "\n\n";
    }
    reply = gateway
                .complete(PromptKind::qa_with_passages, {{"docs", docs}, {"question", std::string(question)}},
                          iteration)
                .text;
  }
  // First non-blank line, without a leading "Answer:".
  std::istringstream lines(reply);
  std::string line;
  while (std::getline(lines, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (to_lower(line.substr(0, 7)) == "answer:") line = trim(line.substr(7));
    return line;
  }
  return {};
}

namespace {

std::vector<std::string> top_ids(const RankedList& list, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, list.size()); ++i) out.push_back(list.entries[i].id);
  return out;
}

EvalRow evaluate_one(const EvalQuestion& q, const CorpusIndex& index, SystemMode mode, const EngineConfig& config,
                     Gateway gateway) {
  EvalRow row;
  row.id = q.id;
  row.question = q.question;
  const std::size_t max_cutoff = *std::max_element(config.eval.cutoffs.begin(), config.eval.cutoffs.end());
  try {
    RankedList ranking;
    std::optional<std::string> agent_answer;
    switch (mode) {
      case SystemMode::base:
        ranking = base_search(index, q.question, View::passages, max_cutoff, config.retrieval);
        row.iterations = 1;
        break;
      case SystemMode::naive_ge:
      case SystemMode::sync_ge: {
        GraphRetrievalOptions options = config.single_step_options();
        options.base_k = std::max(options.base_k, max_cutoff);
        options.output_k = std::max(options.output_k, max_cutoff);
        ranking = mode == SystemMode::naive_ge ? naive_ge_retrieve(q.question, index, options).fused
                                               : sync_ge_retrieve(q.question, index, options, gateway, 1).fused;
        row.iterations = 1;
        break;
      }
      case SystemMode::agent: {
        const AgentTrace trace = run_agent(q.question, index, config.agent_options(), gateway);
        ranking = trace.final_list;
        row.iterations = trace.iterations.size();
        if (trace.termination) row.termination = std::string(to_string(*trace.termination));
        if (trace.termination == Termination::answerable) agent_answer = trace.answer;
        break;
      }
    }
    row.retrieved = top_ids(ranking, max_cutoff);
    for (std::size_t k : config.eval.cutoffs) {
      row.recall[k] = recall_at_k(row.retrieved, q.gold_passage_ids, k, config.eval.binary_recall);
    }
    if (config.eval.qa) {
      if (agent_answer) {
        row.prediction = *agent_answer;
      } else {
        const auto docs = top_ids(ranking, config.eval.qa_passages);
        row.prediction = answer_with_passages(q.question, index, docs, gateway, 0);
      }
      row.em = exact_match(*row.prediction, q.answers);
      row.f1 = f1_answer(*row.prediction, q.answers);
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.tokens = gateway.ledger().totals();
  return row;
}

std::optional<double> mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

EvalAggregates aggregate(std::span<const EvalRow> rows, std::span<const std::size_t> cutoffs, bool qa) {
  EvalAggregates a;
  a.questions = rows.size();
  std::map<std::size_t, std::vector<double>> recall;
  std::vector<double> em, f1, iterations, input, output;
  for (const auto& row : rows) {
    if (!row.ok) {
      ++a.failed;
      continue;
    }
    ++a.completed;
    for (std::size_t k : cutoffs) {
      if (auto it = row.recall.find(k); it != row.recall.end()) recall[k].push_back(it->second);
    }
    if (row.em) em.push_back(*row.em);
    if (row.f1) f1.push_back(*row.f1);
    iterations.push_back(static_cast<double>(row.iterations));
    input.push_back(static_cast<double>(row.tokens.input_tokens));
    output.push_back(static_cast<double>(row.tokens.output_tokens));
  }
  for (std::size_t k : cutoffs) a.recall[k] = mean_of(recall[k]);
  if (qa) {
    a.em = mean_of(em);
    a.f1 = mean_of(f1);
  }
  a.iterations = mean_of(iterations);
  a.input_tokens = mean_of(input);
  a.output_tokens = mean_of(output);
  return a;
}

EvalReport run_eval(std::span<const EvalQuestion> dataset, const CorpusIndex& index, SystemMode mode,
                    const EngineConfig& config, const Gateway& gateway) {
  config.validate();
  for (const auto& q : dataset) {
    if (q.gold_passage_ids.empty()) throw ContractError("question '" + q.id + "' has no gold passages");
    for (const auto& g : q.gold_passage_ids) {
      if (!index.has_passage(g)) {
        throw ContractError("gold passage '" + g + "' of question '" + q.id + "' is not in the index");
      }
    }
  }

  EvalReport report;
  report.mode = mode;
  report.config = to_json(config);
  report.rows.resize(dataset.size());

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < dataset.size(); i = next++) {
      report.rows[i] = evaluate_one(dataset[i], index, mode, config, gateway.fork());
    }
  };
  const std::size_t workers = std::min(config.eval.workers, std::max<std::size_t>(dataset.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  report.aggregates = aggregate(report.rows, config.eval.cutoffs, config.eval.qa);
  return report;
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const EvalReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json recall = json::object();
    for (const auto& [k, v] : row.recall) recall[std::to_string(k)] = v;
    json r = {
        {"id", row.id},
        {"question", row.question},
        {"status", row.ok ? "ok" : "failed"},
        {"retrieved", row.retrieved},
        {"recall", std::move(recall)},
        {"iterations", row.iterations},
        {"input_tokens", row.tokens.input_tokens},
        {"output_tokens", row.tokens.output_tokens},
        {"llm_calls", row.tokens.calls},
    };
    if (!row.termination.empty()) r["termination"] = row.termination;
    if (row.prediction) r["prediction"] = *row.prediction;
    if (row.em) r["em"] = *row.em;
    if (row.f1) r["f1"] = *row.f1;
    if (!row.ok) r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  const auto& a = report.aggregates;
  json recall = json::object();
  for (const auto& [k, v] : a.recall) recall[std::to_string(k)] = optional_json(v);
  json aggregates = {
      {"questions", a.questions},
      {"completed", a.completed},
      {"failed", a.failed},
      {"recall", std::move(recall)},
      {"iterations", optional_json(a.iterations)},
      {"input_tokens", optional_json(a.input_tokens)},
      {"output_tokens", optional_json(a.output_tokens)},
  };
  if (report.config.value("eval", json::object()).value("qa", false)) {
    aggregates["em"] = optional_json(a.em);
    aggregates["f1"] = optional_json(a.f1);
  }
  return {
      {"system", std::string(to_string(report.mode))},
      {"recall_variant", report.config.value("eval", json::object()).value("binary_recall", false) ? "binary"
                                                                                                    : "fractional"},
      {"config", report.config},
      {"rows", std::move(rows)},
      {"aggregates", std::move(aggregates)},
  };
}

std::string format_table(const EvalReport& report) {
  const bool qa = report.aggregates.em.has_value() || std::any_of(report.rows.begin(), report.rows.end(),
                                                                   [](const EvalRow& r) { return r.em.has_value(); });
  std::vector<std::size_t> cutoffs;
  for (const auto& [k, v] : report.aggregates.recall) cutoffs.push_back(k);

  std::vector<std::string> header{"id"};
  for (auto k : cutoffs) header.push_back("R@" + std::to_string(k));
  if (qa) {
    header.push_back("EM");
    header.push_back("F1");
  }
  for (const char* h : {"iters", "in_tok", "out_tok", "status"}) header.push_back(h);

  const auto fixed = [](std::optional<double> v, int precision = 3) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << *v;
    return s.str();
  };

  std::vector<std::vector<std::string>> table{header};
  for (const auto& row : report.rows) {
    std::vector<std::string> cells{row.id};
    for (auto k : cutoffs) {
      auto it = row.recall.find(k);
      cells.push_back(row.ok && it != row.recall.end() ? fixed(it->second) : "-");
    }
    if (qa) {
      cells.push_back(row.em ? std::to_string(*row.em) : "-");
      cells.push_back(fixed(row.f1));
    }
    cells.push_back(std::to_string(row.iterations));
    cells.push_back(std::to_string(row.tokens.input_tokens));
    cells.push_back(std::to_string(row.tokens.output_tokens));
    cells.push_back(row.ok ? "ok" : "failed");
    table.push_back(std::move(cells));
  }
  const auto& a = report.aggregates;
  std::vector<std::string> mean{"mean"};
  for (auto k : cutoffs) mean.push_back(fixed(a.recall.at(k)));
  if (qa) {
    mean.push_back(fixed(a.em));
    mean.push_back(fixed(a.f1));
  }
  mean.push_back(fixed(a.iterations, 2));
  mean.push_back(fixed(a.input_tokens, 1));
  mean.push_back(fixed(a.output_tokens, 1));
  mean.push_back(std::to_string(a.completed) + "/" + std::to_string(a.questions));
  table.push_back(std::move(mean));

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& r : table) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  out << "system: " << to_string(report.mode) << "\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i + 1 == table.size()) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total - 2, '-') << "\n";
    }
    for (std::size_t c = 0; c < table[i].size(); ++c) {
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << table[i][c];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << table[i][c];
      }
    }
    out << "\n";
  }
  if (a.failed > 0) out << "failed questions: " << a.failed << " (excluded from means)\n";
  return out.str();
}

}  // namespace hopgraph
