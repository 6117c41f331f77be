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

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "hopgraph/types.hpp"

namespace hopgraph {

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

/// Names of the shipped templates (prompts/<name>.txt). qa_passage is the
/// per-passage block spliced into qa_with_passages.
enum class PromptKind {
  triple_extraction,
  reader,
  reader_with_memory,
  reasoner,
  rewriter,
  qa_with_passages,
  qa_passage,
  qa_no_passages,
};

std::string_view to_string(PromptKind kind) noexcept;
/// Throws RenderError for unknown names.
PromptKind parse_prompt_kind(std::string_view name);

using Variables = std::map<std::string, std::string>;

/// Raw template text with {placeholders} and {{ }} brace escapes.
std::string_view template_text(PromptKind kind);

/// Substitutes {name} placeholders and unescapes {{ and }}. Nothing else is
/// transformed. Throws RenderError on an unbound placeholder or a stray brace.
std::string render_template(std::string_view text, const Variables& variables);

std::string render_prompt(PromptKind kind, const Variables& variables);
/// Name-based overload; unknown names raise RenderError.
std::string render_prompt(std::string_view template_name, const Variables& variables);

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

struct CompletionParams {
  double temperature = 0.0;
  int max_output_tokens = 1024;
};

struct CompletionRequest {
  std::string kind;     // template name, or a caller-chosen label
  Variables variables;  // what the prompt was rendered from
  std::string prompt;
  CompletionParams params;
};

struct Completion {
  std::string text;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string name() const = 0;
  /// Must be safe to call from several threads at once.
  virtual Completion complete(const CompletionRequest& request) = 0;
};

/// Deterministic offline backend keyed by (kind, SHA-256 of the canonical
/// variable map). Fixture files are JSON Lines of
/// {"kind": str, "key": str, "response": str}; a "variables" object may be
/// given instead of "key" and is hashed on load.
class ScriptedBackend final : public LlmBackend {
 public:
  /// Optional fallback consulted on a fixture miss. Returning nullopt keeps
  /// the miss.
  using Handler = std::function<std::optional<std::string>(const CompletionRequest&)>;

  ScriptedBackend() = default;

  /// Lowercase hex SHA-256 of the compact JSON object of `variables` (keys sorted).
  static std::string key_for(const Variables& variables);

  void add(std::string kind, std::string key, std::string response);
  void add(std::string_view kind, const Variables& variables, std::string response);
  /// Appends fixtures from a JSONL file. Throws FormatError on bad lines.
  void load_fixtures(const std::string& path);
  void set_handler(Handler handler);
  std::size_t size() const;

  std::string name() const override { return "scripted"; }
  /// Token counts are whitespace tokens of the prompt and the response.
  Completion complete(const CompletionRequest& request) override;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::string> fixtures_;
  Handler handler_;
};

/// Chat-completion client: POST {"model", "messages", "temperature",
/// "max_tokens"} and read choices[0].message.content plus usage.
class RemoteBackend final : public LlmBackend {
 public:
  struct Options {
    std::string endpoint;  // full URL of the chat completions route
    std::string model;
    std::string api_key;
    int max_retries = 3;  // total attempts per call
    int backoff_ms = 500;
    int timeout_seconds = 120;
    int max_in_flight = 4;
  };

  explicit RemoteBackend(Options options);

  std::string name() const override { return "remote:" + options_.model; }
  Completion complete(const CompletionRequest& request) override;

 private:
  Options options_;
  std::counting_semaphore<1024> in_flight_;
};

// ---------------------------------------------------------------------------
// Token accounting
// ---------------------------------------------------------------------------

struct TokenRecord {
  std::string kind;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  int iteration = 0;

  friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

struct TokenTotals {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  std::size_t calls = 0;

  friend bool operator==(const TokenTotals&, const TokenTotals&) = default;
};

/// Append-only, internally synchronized.
class TokenLedger {
 public:
  void append(TokenRecord record);
  std::vector<TokenRecord> records() const;
  std::size_t size() const;
  TokenTotals totals() const;
  /// iteration tag -> totals over the records carrying it.
  std::map<int, TokenTotals> by_iteration() const;

 private:
  mutable std::mutex mutex_;
  std::vector<TokenRecord> records_;
};

// ---------------------------------------------------------------------------
// Gateway
// ---------------------------------------------------------------------------

/// The only place LLM requests are built. Each call renders a template,
/// invokes the backend and appends one ledger record.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<LlmBackend> backend, CompletionParams params = {});

  Completion complete(PromptKind kind, const Variables& variables, int iteration);
  /// For prompts assembled by the caller (labelled with `kind`).
  Completion complete(std::string kind, std::string prompt, Variables variables, int iteration);

  /// A gateway over the same backend with a fresh ledger.
  Gateway fork() const { return Gateway(backend_, params_); }

  TokenLedger& ledger() noexcept { return *ledger_; }
  const TokenLedger& ledger() const noexcept { return *ledger_; }
  const LlmBackend& backend() const noexcept { return *backend_; }
  const CompletionParams& params() const noexcept { return params_; }

 private:
  std::shared_ptr<LlmBackend> backend_;
  CompletionParams params_;
  std::shared_ptr<TokenLedger> ledger_;
};

// ---------------------------------------------------------------------------
// Response parsing
// ---------------------------------------------------------------------------

/// Every ("a", "b", "c") group in order. Groups with the wrong arity, blank
/// fields or unbalanced quotes are skipped.
std::vector<ProximalTriple> parse_facts(std::string_view raw);

struct ReasonOutcome {
  bool answerable = false;
  std::string payload;  // the answer, or the reason it is not answerable

  friend bool operator==(const ReasonOutcome&, const ReasonOutcome&) = default;
};

/// Looks for an "Answerable: Yes|No" line (case-insensitive; True/False are
/// accepted too). The payload is what follows "Answer:" or "Why:". Without
/// that structure the result is not answerable and carries the raw text.
ReasonOutcome parse_reason(std::string_view raw);

/// The text after the last "Next Question:" marker, or the first non-blank
/// line when there is no marker; trimmed. Empty when the reply is blank.
std::string parse_next_question(std::string_view raw);

/// Triples from an extraction reply: quoted tuples as in parse_facts, or
/// JSON arrays of three strings under "triples".
std::vector<ProximalTriple> parse_extracted_triples(std::string_view raw);

}  // namespace hopgraph
