// Copyright 2026 The SkillGraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillgraph/trajectory.hpp"

namespace skillgraph {

using Embedding = std::vector<float>;

inline constexpr std::size_t kDefaultEmbeddingDim = 384;
inline constexpr std::string_view kBuiltinEncoderTag = "builtin-hash-tfidf";
inline constexpr std::string_view kExternalEncoderTag = "external";

struct ScoredTool {
  ToolId tool;
  double score = 0.0;

  bool operator==(const ScoredTool&) const = default;
};

/// Lowercase ASCII, split on non-alphanumerics. Bytes >= 0x80 are kept
/// inside tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

/// 64-bit FNV-1a; the bucket is hash % dim, the sign is bit 63.
std::uint64_t token_hash(std::string_view token);

/// Signed feature hashing with log(1 + tf) weights, L2-normalized. Text with
/// no tokens (or whose buckets cancel exactly) maps to the first basis
/// vector and logs a warning.
Embedding builtin_encode(std::string_view text, std::size_t dim = kDefaultEmbeddingDim);

/// Dot product accumulated in double. Sizes must match.
double dot(std::span<const float> a, std::span<const float> b);

/// Unit-normalized description embeddings keyed by tool id. Immutable once
/// populated; concurrent reads are safe.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim = kDefaultEmbeddingDim,
                          std::string encoder_tag = std::string(kBuiltinEncoderTag));

  /// Encodes every description with builtin_encode.
  static EmbeddingStore from_descriptions(const std::map<ToolId, std::string>& descriptions,
                                          std::size_t dim = kDefaultEmbeddingDim);

  /// Normalizes and stores. Throws FormatError on a dimension mismatch or a
  /// zero vector.
  void add(const ToolId& tool, std::span<const float> vector);

  std::size_t dimension() const noexcept { return dim_; }
  const std::string& encoder_tag() const noexcept { return encoder_tag_; }
  bool is_builtin() const noexcept { return encoder_tag_ == kBuiltinEncoderTag; }
  std::size_t size() const noexcept { return vectors_.size(); }
  bool contains(const ToolId& tool) const { return vectors_.contains(tool); }

  /// Throws MissingEmbedding.
  const Embedding& vector(const ToolId& tool) const;
  const std::map<ToolId, Embedding>& vectors() const noexcept { return vectors_; }
  std::set<ToolId> tools() const;

  /// Cosine similarity of a unit query vector and a stored tool vector.
  double semantic_similarity(std::span<const float> query_vec, const ToolId& tool) const;

  /// The k highest-similarity tools of `universe`, descending, ties by id.
  /// Returns fewer than k entries when the universe is smaller.
  std::vector<ScoredTool> top_k(std::span<const float> query_vec, std::size_t k,
                                const std::set<ToolId>& universe) const;
  /// Same over every stored tool.
  std::vector<ScoredTool> top_k(std::span<const float> query_vec, std::size_t k) const;

  /// Line-delimited {"id": ..., "vector": [...]}.
  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  static EmbeddingStore read(std::istream& in, std::string encoder_tag = std::string(kExternalEncoderTag));
  static EmbeddingStore load(const std::string& path,
                             std::string encoder_tag = std::string(kExternalEncoderTag));

 private:
  std::size_t dim_;
  std::string encoder_tag_;
  std::map<ToolId, Embedding> vectors_;
};

/// Orders scored tools by descending score, ties by ascending id.
void sort_by_score(std::vector<ScoredTool>& items);

/// Line-delimited {"id": ..., "text": ...}; also the exporter's input format.
std::map<std::string, std::string> read_descriptions(std::istream& in);
std::map<std::string, std::string> load_descriptions(const std::string& path);
void write_descriptions(const std::map<std::string, std::string>& descriptions, std::ostream& out);

/// Maps query text to a unit vector, either with the builtin encoder or by
/// exact lookup in an external query-embedding file keyed by query text.
class QueryEncoder {
 public:
  static QueryEncoder builtin(std::size_t dim = kDefaultEmbeddingDim);
  static QueryEncoder external(EmbeddingStore queries);

  /// Throws MissingEmbedding for an external encoder without the query.
  Embedding encode(std::string_view query) const;
  std::size_t dimension() const noexcept { return dim_; }

 private:
  QueryEncoder(std::size_t dim, std::optional<EmbeddingStore> table)
      : dim_(dim), table_(std::move(table)) {}

  std::size_t dim_;
  std::optional<EmbeddingStore> table_;
};

}  // namespace skillgraph
