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

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "hopgraph/llm_gateway.hpp"
#include "hopgraph/text.hpp"

namespace hopgraph {
namespace {

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Reads a double-quoted string starting at raw[pos] == '"'. Backslash
// escapes the next character. Returns false when the closing quote is missing.
bool read_quoted(std::string_view raw, std::size_t& pos, std::string& out) {
  out.clear();
  for (std::size_t i = pos + 1; i < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 1 < raw.size()) {
      out.push_back(raw[++i]);
    } else if (raw[i] == '"') {
      pos = i + 1;
      return true;
    } else {
      out.push_back(raw[i]);
    }
  }
  return false;
}

// Parses one parenthesized group at raw[open] == '('. On success `end` is
// one past the closing parenthesis.
bool read_group(std::string_view raw, std::size_t open, std::vector<std::string>& fields, std::size_t& end) {
  fields.clear();
  std::size_t i = open + 1;
  const auto skip = [&] {
    while (i < raw.size() && is_ascii_space(raw[i])) ++i;
  };
  while (true) {
    skip();
    if (i >= raw.size() || raw[i] != '"') return false;
    std::string field;
    if (!read_quoted(raw, i, field)) return false;
    fields.push_back(std::move(field));
    skip();
    if (i >= raw.size()) return false;
    if (raw[i] == ',') {
      ++i;
      continue;
    }
    if (raw[i] == ')') {
      end = i + 1;
      return true;
    }
    return false;
  }
}

std::optional<ProximalTriple> make_triple(const std::vector<std::string>& fields) {
  if (fields.size() != 3) return std::nullopt;
  ProximalTriple t{trim(fields[0]), trim(fields[1]), trim(fields[2])};
  if (t.subject.empty() || t.predicate.empty() || t.object.empty()) return std::nullopt;
  return t;
}

void collect_json_triples(const nlohmann::json& j, std::vector<ProximalTriple>& out) {
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("triples")) return;
    list = &j["triples"];
  }
  if (!list->is_array()) return;
  for (const auto& item : *list) {
    if (!item.is_array() || item.size() != 3) continue;
    if (!std::all_of(item.begin(), item.end(), [](const auto& v) { return v.is_string(); })) continue;
    if (auto t = make_triple({item[0].get<std::string>(), item[1].get<std::string>(), item[2].get<std::string>()})) {
      out.push_back(std::move(*t));
    }
  }
}

}  // namespace

std::vector<ProximalTriple> parse_facts(std::string_view raw) {
  std::vector<ProximalTriple> out;
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '(') {
      ++i;
      continue;
    }
    std::size_t end = 0;
    if (read_group(raw, i, fields, end)) {
      if (auto t = make_triple(fields)) out.push_back(std::move(*t));
      i = end;
    } else {
      ++i;
    }
  }
  return out;
}

ReasonOutcome parse_reason(std::string_view raw) {
  const std::string lower = ascii_lower(raw);
  const std::string fallback = trim(raw).empty() ? std::string("(empty reply)") : trim(raw);

  std::size_t search_from = 0;
  while (true) {
    const auto pos = lower.find("answerable:", search_from);
    if (pos == std::string::npos) return {false, fallback};
    search_from = pos + 1;

    std::size_t v = pos + std::string_view("answerable:").size();
    while (v < lower.size() && (lower[v] == ' ' || lower[v] == '\t' || lower[v] == '*')) ++v;
    const std::string_view rest = std::string_view(lower).substr(v);
    bool answerable;
    std::size_t word = 0;
    if (rest.starts_with("yes")) {
      answerable = true, word = 3;
    } else if (rest.starts_with("true")) {
      answerable = true, word = 4;
    } else if (rest.starts_with("no")) {
      answerable = false, word = 2;
    } else if (rest.starts_with("false")) {
      answerable = false, word = 5;
    } else {
      continue;
    }

    const std::size_t after = v + word;
    const std::string marker = answerable ? "answer:" : "why:";
    const auto m = lower.find(marker, after);
    std::string payload = m == std::string::npos ? trim(raw.substr(after))
                                                  : trim(raw.substr(m + marker.size()));
    if (payload.empty()) payload = fallback;
    return {answerable, std::move(payload)};
  }
}

std::string parse_next_question(std::string_view raw) {
  const std::string lower = ascii_lower(raw);
  const auto pos = lower.rfind("next question:");
  std::string_view rest = raw;
  if (pos != std::string::npos) rest = raw.substr(pos + std::string_view("next question:").size());

  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto nl = rest.find('\n', start);
    const std::string line = trim(rest.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    if (!line.empty()) return line;
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return {};
}

std::vector<ProximalTriple> parse_extracted_triples(std::string_view raw) {
  auto out = parse_facts(raw);
  if (!out.empty()) return out;

  const auto open_obj = raw.find('{');
  const auto close_obj = raw.rfind('}');
  if (open_obj != std::string_view::npos && close_obj != std::string_view::npos && close_obj > open_obj) {
    // Replies often hold several objects (entities, then triples); try each
    // top-level candidate that ends at a closing brace.
    for (auto start = open_obj; start != std::string_view::npos && start < close_obj;
         start = raw.find('{', start + 1)) {
      const auto j = nlohmann::json::parse(raw.substr(start, close_obj - start + 1), nullptr, false);
      if (!j.is_discarded()) {
        collect_json_triples(j, out);
        if (!out.empty()) return out;
      }
      auto end = raw.find('}', start);
      while (end != std::string_view::npos && end <= close_obj) {
        const auto k = nlohmann::json::parse(raw.substr(start, end - start + 1), nullptr, false);
        if (!k.is_discarded()) {
          collect_json_triples(k, out);
          if (!out.empty()) return out;
          break;
        }
        end = raw.find('}', end + 1);
      }
    }
  }
  const auto open_arr = raw.find('[');
  const auto close_arr = raw.rfind(']');
  if (open_arr != std::string_view::npos && close_arr != std::string_view::npos && close_arr > open_arr) {
    const auto j = nlohmann::json::parse(raw.substr(open_arr, close_arr - open_arr + 1), nullptr, false);
    if (!j.is_discarded()) collect_json_triples(j, out);
  }
  return out;
}

}  // namespace hopgraph
