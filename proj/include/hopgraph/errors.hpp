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

#include <stdexcept>
#include <string>

namespace hopgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input while building or loading an index (duplicate ids, dangling references).
class BuildError : public Error {
 public:
  using Error::Error;
};

/// Unknown passage or triple id.
class LookupError : public Error {
 public:
  using Error::Error;
};

class RenderError : public Error {
 public:
  using Error::Error;
};

/// Scripted backend has no response registered for a request.
class FixtureMissError : public Error {
 public:
  FixtureMissError(std::string kind, std::string key)
      : Error("no scripted response for kind '" + kind + "' key " + key),
        kind_(std::move(kind)),
        key_(std::move(key)) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::string kind_;
  std::string key_;
};

/// Remote LLM / embedding endpoint failure after retries were exhausted.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(what), attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

/// Precondition violated by the caller (e.g. recall over an empty gold set).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace hopgraph
