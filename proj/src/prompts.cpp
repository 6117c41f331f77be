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
#include <array>
#include <utility>

#include "hopgraph/errors.hpp"
#include "hopgraph/llm_gateway.hpp"

namespace hopgraph {
namespace {

struct TemplateEntry {
  std::string_view name;
  std::string_view text;
};

constexpr TemplateEntry kTemplates[] = {
#include "hopgraph/prompt_templates.inc"
};

constexpr std::array kKinds = {
    PromptKind::triple_extraction, PromptKind::reader,           PromptKind::reader_with_memory,
    PromptKind::reasoner,          PromptKind::rewriter,         PromptKind::qa_with_passages,
    PromptKind::qa_passage,        PromptKind::qa_no_passages,
};

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

std::string_view to_string(PromptKind kind) noexcept {
  switch (kind) {
    case PromptKind::triple_extraction: return "triple_extraction";
    case PromptKind::reader: return "reader";
    case PromptKind::reader_with_memory: return "reader_with_memory";
    case PromptKind::reasoner: return "reasoner";
    case PromptKind::rewriter: return "rewriter";
    case PromptKind::qa_with_passages: return "qa_with_passages";
    case PromptKind::qa_passage: return "qa_passage";
    case PromptKind::qa_no_passages: return "qa_no_passages";
  }
  return "?";
}

PromptKind parse_prompt_kind(std::string_view name) {
  for (PromptKind kind : kKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw RenderError("unknown prompt template '" + std::string(name) + "'");
}

std::string_view template_text(PromptKind kind) {
  const std::string_view name = to_string(kind);
  for (const auto& entry : kTemplates) {
    if (entry.name == name) return entry.text;
  }
  throw RenderError("prompt template '" + std::string(name) + "' is not compiled in");
}

std::string render_template(std::string_view text, const Variables& variables) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '{') {
      if (i + 1 < text.size() && text[i + 1] == '{') {
        out.push_back('{');
        ++i;
        continue;
      }
      const auto close = text.find('}', i + 1);
      if (close == std::string_view::npos) throw RenderError("unterminated placeholder in template");
      const std::string_view name = text.substr(i + 1, close - i - 1);
      if (name.empty() || !std::all_of(name.begin(), name.end(), is_name_char)) {
        throw RenderError("malformed placeholder '{" + std::string(name) + "}'");
      }
      auto it = variables.find(std::string(name));
      if (it == variables.end()) throw RenderError("unbound placeholder {" + std::string(name) + "}");
      out += it->second;
      i = close;
    } else if (c == '}') {
      if (i + 1 < text.size() && text[i + 1] == '}') {
        out.push_back('}');
        ++i;
        continue;
      }
      throw RenderError("stray '}' in template");
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string render_prompt(PromptKind kind, const Variables& variables) {
  return render_template(template_text(kind), variables);
}

std::string render_prompt(std::string_view template_name, const Variables& variables) {
  return render_prompt(parse_prompt_kind(template_name), variables);
}

}  // namespace hopgraph
