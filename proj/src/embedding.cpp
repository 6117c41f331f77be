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

#include "hopgraph/embedding.hpp"

#include <cstdlib>

#include "hopgraph/errors.hpp"
#include "http_util.hpp"

namespace hopgraph {

EmbeddingMatrix Embedder::embed_batch(const std::vector<std::string>& texts) const {
  EmbeddingMatrix out(static_cast<Eigen::Index>(texts.size()), dimension());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = embed(texts[i]).transpose();
  }
  return out;
}

HashEmbedder::HashEmbedder(Eigen::Index dim) : dim_(dim) {
  if (dim < 8) throw ConfigError("hash embedder dimension must be >= 8, got " + std::to_string(dim));
}

HttpEmbedder::HttpEmbedder(Options options) : options_(std::move(options)) {
  detail::parse_url(options_.endpoint);
}

Eigen::Index HttpEmbedder::dimension() const {
  if (dim_ == 0) dim_ = embed("dimension probe").size();
  return dim_;
}

VectorXr HttpEmbedder::embed(std::string_view text) const {
  EmbeddingMatrix m = embed_batch({std::string(text)});
  return m.row(0).transpose();
}

EmbeddingMatrix HttpEmbedder::embed_batch(const std::vector<std::string>& texts) const {
  if (texts.empty()) return EmbeddingMatrix(0, dim_);
  nlohmann::json body = {{"model", options_.model}, {"input", texts}};
  std::map<std::string, std::string> headers;
  if (!options_.api_key.empty()) headers["Authorization"] = "Bearer " + options_.api_key;
  detail::RetryPolicy policy;
  policy.max_attempts = options_.max_retries;
  const nlohmann::json reply =
      detail::post_json(options_.endpoint, body, headers, policy, options_.timeout_seconds);

  const auto& data = reply.at("data");
  if (!data.is_array() || data.size() != texts.size()) {
    throw TransportError("embedding reply has " + std::to_string(data.size()) + " rows for " +
                             std::to_string(texts.size()) + " inputs",
                         1);
  }
  EmbeddingMatrix out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& row = data[i].at("embedding");
    if (i == 0) out.resize(static_cast<Eigen::Index>(texts.size()), static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != out.cols()) {
      throw TransportError("embedding rows have inconsistent dimensions", 1);
    }
    // Rows may arrive out of order; "index" says where each belongs.
    const std::size_t slot = data[i].value("index", i);
    VectorXr v(out.cols());
    for (Eigen::Index j = 0; j < out.cols(); ++j) v[j] = row[static_cast<std::size_t>(j)].get<double>();
    normalize_or_zero(v);
    out.row(static_cast<Eigen::Index>(slot)) = v.transpose();
  }
  dim_ = out.cols();
  return out;
}

std::shared_ptr<const Embedder> make_embedder(const std::string& descriptor,
                                              const std::string& http_model,
                                              const std::string& http_api_key) {
  if (descriptor.rfind("hash:", 0) == 0) {
    const std::string dim_text = descriptor.substr(5);
    char* end = nullptr;
    const long dim = std::strtol(dim_text.c_str(), &end, 10);
    if (dim_text.empty() || *end != '\0') throw ConfigError("bad embedder descriptor: " + descriptor);
    return std::make_shared<HashEmbedder>(static_cast<Eigen::Index>(dim));
  }
  if (descriptor.rfind("http:", 0) == 0) {
    HttpEmbedder::Options options;
    options.endpoint = descriptor.substr(5);
    options.model = http_model;
    options.api_key = http_api_key;
    return std::make_shared<HttpEmbedder>(std::move(options));
  }
  throw ConfigError("unknown embedder '" + descriptor + "' (expected hash:<dim> or http:<endpoint>)");
}

}  // namespace hopgraph
