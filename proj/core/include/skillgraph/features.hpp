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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillgraph/embeddings.hpp"
#include "skillgraph/graph.hpp"
#include "skillgraph/retrieval.hpp"

namespace skillgraph {

inline constexpr std::size_t kFeatureCount = 8;

/// Per-tool reranker features:
///   [0] cosine similarity to the query
///   [1] semantic rank within the candidates / (K - 1), 0 = best
///   [2] total outgoing weight to other candidates
///   [3] total incoming weight from other candidates
///   [4] strongest outgoing weight to a candidate
///   [5] strongest incoming weight from a candidate
///   [6] mean normalized training position (0.5 when unseen)
///   [7] K / 10
using FeatureVector = std::array<double, kFeatureCount>;

inline constexpr double kUnseenPosition = 0.5;

struct ToolFeatures {
  ToolId tool;
  FeatureVector f{};
};

/// Feature groups that can be zeroed at inference for ablations.
struct FeatureMask {
  bool semantic = false;  // f1-f2
  bool graph = false;     // f3-f6
  bool position = false;  // f7-f8

  void apply(FeatureVector& f) const;
  bool any() const noexcept { return semantic || graph || position; }
  /// Comma-separated group names, e.g. "graph,position"; "" for none.
  std::string to_string() const;
  /// Parses the same syntax; throws InvalidArgument on unknown names.
  static FeatureMask parse(std::string_view spec);
};

/// Features for `tools` given their query similarities. Transition features
/// only consider edges between members of `tools`.
std::vector<ToolFeatures> extract_features(std::span<const ToolId> tools,
                                           std::span<const double> similarities,
                                           const SkillGraph& g);

/// Features for a Stage-1 candidate set, with similarities recomputed from
/// the store. Throws MissingEmbedding.
std::vector<ToolFeatures> extract_features(const CandidateSet& candidates, const SkillGraph& g,
                                           const EmbeddingStore& emb,
                                           std::span<const float> query_vec);

}  // namespace skillgraph
