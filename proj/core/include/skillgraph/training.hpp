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
#include <span>
#include <vector>

#include "skillgraph/embeddings.hpp"
#include "skillgraph/graph.hpp"
#include "skillgraph/pairwise_model.hpp"
#include "skillgraph/trajectory.hpp"

namespace skillgraph {

struct TrainingConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 2048;
  std::size_t max_epochs = 30;
  std::size_t patience = 5;
  double validation_fraction = 0.05;
  // Adam moment decay rates and denominator guard.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Pairs from gold trajectories. For every a before b in a trajectory this
/// emits (f_a - f_b, 1) and (f_b - f_a, 0), where features treat the gold
/// tool set as the candidate set and similarities come from the query.
std::vector<PairExample> make_training_pairs(const TrajectoryDataset& ds, const SkillGraph& g,
                                             const EmbeddingStore& emb,
                                             const QueryEncoder& encoder);

/// Adam over a flat parameter view of the model.
class AdamOptimizer {
 public:
  AdamOptimizer(const PairwiseModel& model, const TrainingConfig& cfg);
  void step(PairwiseModel& model, const ModelGradient& grad);

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  std::size_t t_ = 0;
  ModelGradient m_;
  ModelGradient v_;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double validation_loss = 0.0;  // equals train_loss without a validation set
};

struct TrainingResult {
  PairwiseModel model;  // parameters from the best validation epoch
  std::vector<EpochStats> history;
  std::size_t best_epoch = 0;
  std::size_t train_pairs = 0;
  std::size_t validation_pairs = 0;
};

/// Mini-batch training on pre-built pairs with early stopping on
/// `validation`. An empty validation set disables early stopping and keeps
/// the final epoch. Deterministic for a fixed seed. Throws
/// InsufficientData when `train_pairs` is empty.
TrainingResult train_on_pairs(std::span<const PairExample> train_pairs,
                              std::span<const PairExample> validation,
                              const TrainingConfig& cfg);

/// Splits the trajectories into train/validation, builds pairs, and trains.
/// Throws InsufficientData when no trajectory has two or more tools.
TrainingResult train_reranker(const TrajectoryDataset& ds, const SkillGraph& g,
                              const EmbeddingStore& emb, const QueryEncoder& encoder,
                              const TrainingConfig& cfg = {});

}  // namespace skillgraph
