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

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hopgraph/text.hpp"

namespace hopgraph {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// One embedding per row.
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using VectorXr = Vector<double>;
using EmbeddingMatrix = RowMatrix<double>;

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Scales to unit L2 norm in place; a zero vector stays zero.
template <typename Derived>
void normalize_or_zero(Eigen::MatrixBase<Derived>& v) {
  const auto norm = v.norm();
  if (norm > typename Derived::Scalar(0)) v /= norm;
}

/// Cosine similarity; defined as 0 when either side is the zero vector.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0)) return Scalar(0);
  return a.dot(b) / (na * nb);
}

/// Signed feature hashing of lowercase character 3-grams, L2-normalized.
///
/// Each 3-gram is hashed with FNV-1a over its UTF-8 bytes. The low 32 bits
/// pick the bucket, bit 63 picks the sign. Text with fewer than three code
/// points hashes to the zero vector.
template <typename Scalar = double>
Vector<Scalar> hash_embed(std::string_view text, Eigen::Index dim) {
  Vector<Scalar> v = Vector<Scalar>::Zero(dim);
  const std::u32string cps = utf8_to_codepoints(to_lower(text));
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) {
    const std::string gram = codepoints_to_utf8(std::u32string_view(cps).substr(i, 3));
    const std::uint64_t h = fnv1a(gram);
    const auto bucket = static_cast<Eigen::Index>((h & 0xffffffffULL) % static_cast<std::uint64_t>(dim));
    v[bucket] += (h >> 63) ? Scalar(-1) : Scalar(1);
  }
  normalize_or_zero(v);
  return v;
}

/// Text to vector function used at index build and query time.
class Embedder {
 public:
  virtual ~Embedder() = default;

  /// Descriptor persisted in the index manifest, e.g. "hash:256".
  virtual std::string name() const = 0;
  virtual Eigen::Index dimension() const = 0;
  /// Unit-length or zero vector.
  virtual VectorXr embed(std::string_view text) const = 0;

  /// Default implementation embeds one text at a time.
  virtual EmbeddingMatrix embed_batch(const std::vector<std::string>& texts) const;
};

class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(Eigen::Index dim);

  std::string name() const override { return "hash:" + std::to_string(dim_); }
  Eigen::Index dimension() const override { return dim_; }
  VectorXr embed(std::string_view text) const override { return hash_embed<double>(text, dim_); }

 private:
  Eigen::Index dim_;
};

/// OpenAI-compatible embeddings endpoint: POST {"model", "input"} and read
/// data[i].embedding. The returned vectors are re-normalized locally.
class HttpEmbedder final : public Embedder {
 public:
  struct Options {
    std::string endpoint;  // full URL, e.g. http://localhost:8080/v1/embeddings
    std::string model;
    std::string api_key;
    int max_retries = 3;
    int timeout_seconds = 60;
  };

  explicit HttpEmbedder(Options options);

  std::string name() const override { return "http:" + options_.endpoint; }
  Eigen::Index dimension() const override;
  VectorXr embed(std::string_view text) const override;
  EmbeddingMatrix embed_batch(const std::vector<std::string>& texts) const override;

 private:
  Options options_;
  mutable Eigen::Index dim_ = 0;
};

/// Parses "hash:<dim>" or "http:<endpoint>". The model and key for http
/// embedders come from the extra arguments.
std::shared_ptr<const Embedder> make_embedder(const std::string& descriptor,
                                              const std::string& http_model = {},
                                              const std::string& http_api_key = {});

}  // namespace hopgraph
