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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopgraph/types.hpp"

namespace hopgraph {

/// Strips leading and trailing Unicode whitespace.
std::string trim(std::string_view text);

/// Full Unicode lowercase of UTF-8 text.
std::string to_lower(std::string_view text);

/// Entity key used for neighbourhood matching: NFC, lowercase, internal
/// whitespace runs collapsed to one space, trimmed.
std::string normalize_entity(std::string_view text);

/// Lowercases and splits on every non-alphanumeric code point.
std::vector<std::string> tokenize(std::string_view text);

/// Splits on whitespace only.
std::vector<std::string> whitespace_tokens(std::string_view text);

/// Decodes UTF-8 into code points. Invalid sequences become U+FFFD.
std::u32string utf8_to_codepoints(std::string_view text);
std::string codepoints_to_utf8(std::u32string_view cps);

/// "subject predicate object" with each field trimmed.
std::string serialize_triple(std::string_view subject, std::string_view predicate,
                             std::string_view object);
std::string serialize_triple(const Triple& t);
std::string serialize_triple(const ProximalTriple& t);

/// Per-triple texts joined with "; ".
std::string serialize_sequence(std::span<const std::string> triple_texts);

/// ("s", "p", "o") as shown to the LLM.
std::string format_fact(const ProximalTriple& t);
/// Comma-separated format_fact groups.
std::string format_facts(std::span<const ProximalTriple> facts);

std::string join(std::span<const std::string> parts, std::string_view sep);

}  // namespace hopgraph
