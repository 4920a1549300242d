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
#include "skillgraph/features.hpp"
#include "skillgraph/graph.hpp"
#include "skillgraph/pairwise_model.hpp"
#include "skillgraph/retrieval.hpp"

namespace skillgraph {

// Stage-2 rerankers. Every one returns a permutation of the candidate set.

using RankedSequence = std::vector<ToolId>;

/// Candidate sets up to this size are searched exhaustively (7! = 5040).
inline constexpr std::size_t kExhaustiveLimit = 7;
inline constexpr double kDefaultHybridAlpha = 0.4;
inline constexpr double kLogEpsilon = 1e-6;

/// Descending semantic score, ties by id.
RankedSequence rerank_sem_sort(const CandidateSet& candidates);

/// alpha * sum_i w(s_i, s_i+1) + (1 - alpha) * sum_i sim(s_i) / i  (1-based i).
double hybrid_score(std::span<const ToolId> seq, const SkillGraph& g,
                    const std::map<ToolId, double>& sims, double alpha);

/// sum_i log(w(s_i, s_i+1) + kLogEpsilon).
double log_transition_score(std::span<const ToolId> seq, const SkillGraph& g);

/// Argmax of hybrid_score; exhaustive up to kExhaustiveLimit with ties going
/// to the lexicographically smallest sequence, greedy beyond.
RankedSequence rerank_hybrid(const CandidateSet& candidates, const SkillGraph& g,
                             double alpha = kDefaultHybridAlpha);

/// Argmax of log_transition_score; exhaustive up to kExhaustiveLimit,
/// best-of-all-starts greedy beyond. Ties are lexicographic.
RankedSequence rerank_opt_perm(const CandidateSet& candidates, const SkillGraph& g);

/// Pairwise scores v(a) = sum_{b != a} p_ab for every candidate, after
/// masking the selected feature groups.
std::vector<ScoredTool> pairwise_scores(const PairwiseModel& model,
                                        std::span<const ToolFeatures> features,
                                        const FeatureMask& mask = {});

/// Learned reranker: sorts by pairwise_scores descending, ties by id.
RankedSequence rerank_lr(const PairwiseModel& model, const CandidateSet& candidates,
                         const SkillGraph& g, const EmbeddingStore& emb,
                         std::span<const float> query_vec, const FeatureMask& mask = {});

}  // namespace skillgraph
