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
#include <map>
#include <span>
#include <vector>

#include "skillgraph/embeddings.hpp"
#include "skillgraph/graph.hpp"

namespace skillgraph {

struct RetrievalConfig {
  std::size_t pool_multiplier = 3;  // c
  double alpha = 0.5;               // weight of the local transition term
  double gamma = 0.1;               // weight of the position bonus
  std::size_t max_bridges = 2;
  std::size_t bridge_path_limit = 3;  // edges

  void validate() const;
};

/// Stage-1 output. `tools` keeps the provisional greedy order for audit;
/// downstream stages treat it as a set.
struct CandidateSet {
  std::vector<ToolId> tools;
  std::map<ToolId, double> semantic_scores;
  std::size_t k_eval = 0;

  std::size_t size() const noexcept { return tools.size(); }
  bool operator==(const CandidateSet&) const = default;
};

/// max(k_eval + 2, c * k_eval).
std::size_t pool_size(std::size_t k_eval, std::size_t pool_multiplier);

/// 1 - |p - mean position| for tools with position statistics, else 0.
double position_bonus(const SkillGraph& g, const ToolId& tool, double p);

/// Graph-semantic hybrid candidate construction.
///
///  1. Take the top pool_size(k_eval, c) tools of the library by cosine
///     similarity.
///  2. If the graph induced on the pool splits into several weakly
///     connected components, connect each smaller component to the largest
///     by a shortest undirected path (at most bridge_path_limit edges) in the
///     full graph between the components' best-scoring members, inserting
///     the path's interior tools, at most max_bridges tools overall.
///  3. Starting from the best-scoring tool, greedily append the unused pool
///     tool maximizing
///       alpha * w_loc(prev, t) + (1 - alpha) * sim(t) + gamma * b_pos(t, p)
///     where w_loc is the induced edge weight prev -> t, or half of t -> prev
///     when only the reverse edge exists, and p = position / (k_eval - 1).
///  4. Truncate to k_eval, or pad with the next-best unused library tools.
///
/// The library is every tool in `emb`. Ties are broken by ascending id.
/// Throws EmptyLibrary when the store is empty.
CandidateSet gs_hybrid_retrieve(std::span<const float> query_vec, const SkillGraph& g,
                                const EmbeddingStore& emb, std::size_t k_eval,
                                const RetrievalConfig& cfg = {});

/// Plain top-k semantic retrieval wrapped as a candidate set.
CandidateSet semantic_retrieve(std::span<const float> query_vec, const EmbeddingStore& emb,
                               std::size_t k_eval);

}  // namespace skillgraph
