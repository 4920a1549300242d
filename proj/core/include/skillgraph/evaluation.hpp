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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillgraph/embeddings.hpp"
#include "skillgraph/features.hpp"
#include "skillgraph/graph.hpp"
#include "skillgraph/metrics.hpp"
#include "skillgraph/pairwise_model.hpp"
#include "skillgraph/rerank.hpp"
#include "skillgraph/retrieval.hpp"
#include "skillgraph/trajectory.hpp"

namespace skillgraph {

enum class Stage2Method { kSemSort, kHybrid, kOptPerm, kLearned };

std::string_view method_name(Stage2Method m);  // sem-sort | hybrid | opt-perm | lr
Stage2Method parse_method(std::string_view name);

/// Prediction budget per instance: oracle length max(L*, 3) or a fixed K.
struct KMode {
  std::size_t fixed = 0;  // 0 selects the oracle protocol

  std::size_t k_for(std::size_t gold_length) const;
  std::string to_string() const;  // "oracle" or "fixed:<n>"
  /// Throws InvalidArgument for anything but "oracle" or "fixed:<n>", n >= 1.
  static KMode parse(std::string_view spec);
};

struct PipelineContext {
  const SkillGraph& graph;
  const EmbeddingStore& embeddings;
  const QueryEncoder& encoder;
  const PairwiseModel* model = nullptr;  // required for the learned reranker
};

struct RerankConfig {
  Stage2Method method = Stage2Method::kLearned;
  double hybrid_alpha = kDefaultHybridAlpha;
  FeatureMask ablation;
};

/// Stage-1 output for every test instance, in input order.
std::vector<CandidateSet> retrieve_all(const TrajectoryDataset& test, const PipelineContext& ctx,
                                       const RetrievalConfig& retrieval, const KMode& k_mode);

/// Orders one candidate set.
RankedSequence rerank(const CandidateSet& candidates, const std::string& query,
                      const PipelineContext& ctx, const RerankConfig& cfg);

struct EvaluatedInstance {
  std::size_t index = 0;
  RankedSequence prediction;
  InstanceScore score;
};

struct MethodRun {
  std::string label;
  RerankConfig config;
  std::vector<EvaluatedInstance> instances;
  AggregateReport aggregate;

  std::vector<InstanceScore> scores() const;
};

/// Reranks and scores pre-computed candidate sets. Throws InvalidArgument
/// when the sizes disagree or the learned method has no model.
MethodRun run_method(const TrajectoryDataset& test, std::span<const CandidateSet> candidates,
                     const PipelineContext& ctx, const RerankConfig& cfg, std::string label = "");

nlohmann::json to_json(const MetricMeans& m);
nlohmann::json to_json(const AggregateReport& r);
nlohmann::json to_json(const BootstrapResult& b);
nlohmann::json to_json(const InstanceScore& s);

}  // namespace skillgraph
