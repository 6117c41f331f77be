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

#include "hopgraph/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>

namespace hopgraph {
namespace {

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

std::string nfc(const icu::UnicodeString& in) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  std::string out;
  if (U_FAILURE(status)) {
    in.toUTF8String(out);
    return out;
  }
  icu::UnicodeString normalized = norm->normalize(in, status);
  if (U_FAILURE(status)) normalized = in;
  normalized.toUTF8String(out);
  return out;
}

}  // namespace

std::u32string utf8_to_codepoints(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::string codepoints_to_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string trim(std::string_view text) {
  std::u32string cps = utf8_to_codepoints(text);
  auto first = std::find_if_not(cps.begin(), cps.end(), is_space);
  auto last = std::find_if_not(cps.rbegin(), cps.rend(), is_space).base();
  if (first >= last) return {};
  return codepoints_to_utf8(std::u32string_view(&*first, static_cast<std::size_t>(last - first)));
}

std::string to_lower(std::string_view text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::string normalize_entity(std::string_view text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u = icu::UnicodeString::fromUTF8(nfc(u));
  u.toLower(icu::Locale::getRoot());
  std::u32string cps = utf8_to_codepoints(nfc(u));

  std::u32string collapsed;
  collapsed.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
    if (is_space(c)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed.push_back(U' ');
    pending_space = false;
    collapsed.push_back(c);
  }
  return codepoints_to_utf8(collapsed);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string current;
  for (char32_t c : utf8_to_codepoints(to_lower(text))) {
    if (u_isalnum(static_cast<UChar32>(c))) {
      current.push_back(c);
    } else if (!current.empty()) {
      tokens.push_back(codepoints_to_utf8(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(codepoints_to_utf8(current));
  return tokens;
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string current;
  for (char32_t c : utf8_to_codepoints(text)) {
    if (is_space(c)) {
      if (!current.empty()) tokens.push_back(codepoints_to_utf8(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(codepoints_to_utf8(current));
  return tokens;
}

std::string serialize_triple(std::string_view subject, std::string_view predicate,
                             std::string_view object) {
  return trim(subject) + ' ' + trim(predicate) + ' ' + trim(object);
}

std::string serialize_triple(const Triple& t) {
  return serialize_triple(t.subject, t.predicate, t.object);
}

std::string serialize_triple(const ProximalTriple& t) {
  return serialize_triple(t.subject, t.predicate, t.object);
}

std::string serialize_sequence(std::span<const std::string> triple_texts) {
  return join(triple_texts, "; ");
}

std::string format_fact(const ProximalTriple& t) {
  return "(\"" + trim(t.subject) + "\", \"" + trim(t.predicate) + "\", \"" + trim(t.object) + "\")";
}

std::string format_facts(std::span<const ProximalTriple> facts) {
  std::string out;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (i) out += ", ";
    out += format_fact(facts[i]);
  }
  return out;
}

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace hopgraph
