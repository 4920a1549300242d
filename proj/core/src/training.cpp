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

#include "skillgraph/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "skillgraph/error.hpp"
#include "skillgraph/features.hpp"
#include "skillgraph/random.hpp"

namespace skillgraph {

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  if (max_epochs < 1) throw InvalidArgument("max epochs must be >= 1");
  if (patience < 1) throw InvalidArgument("patience must be >= 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw InvalidArgument("validation fraction must lie in (0, 1)");
  }
}

std::vector<PairExample> make_training_pairs(const TrajectoryDataset& ds, const SkillGraph& g,
                                             const EmbeddingStore& emb,
                                             const QueryEncoder& encoder) {
  std::vector<PairExample> pairs;
  std::vector<double> sims;
  for (const auto& traj : ds) {
    const std::size_t n = traj.tools.size();
    if (n < 2) continue;
    const auto q = encoder.encode(traj.query);
    sims.clear();
    for (const auto& t : traj.tools) sims.push_back(emb.semantic_similarity(q, t));
    const auto feats = extract_features(traj.tools, sims, g);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        PairExample fwd;
        PairExample rev;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
          fwd.diff[i] = feats[a].f[i] - feats[b].f[i];
          rev.diff[i] = feats[b].f[i] - feats[a].f[i];
        }
        fwd.label = 1.0;
        rev.label = 0.0;
        pairs.push_back(fwd);
        pairs.push_back(rev);
      }
    }
  }
  return pairs;
}

AdamOptimizer::AdamOptimizer(const PairwiseModel& model, const TrainingConfig& cfg)
    : lr_(cfg.learning_rate),
      beta1_(cfg.beta1),
      beta2_(cfg.beta2),
      eps_(cfg.epsilon),
      m_(model),
      v_(model) {}

void AdamOptimizer::step(PairwiseModel& model, const ModelGradient& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto update = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                    std::vector<double>& v) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      p[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  };
  for (std::size_t l = 0; l < 3; ++l) {
    auto& layer = model.layers()[l];
    update(layer.weights, grad.layers[l].weights, m_.layers[l].weights, v_.layers[l].weights);
    update(layer.biases, grad.layers[l].biases, m_.layers[l].biases, v_.layers[l].biases);
  }
}

TrainingResult train_on_pairs(std::span<const PairExample> train_pairs,
                              std::span<const PairExample> validation,
                              const TrainingConfig& cfg) {
  cfg.validate();
  if (train_pairs.empty()) throw InsufficientData("no training pairs");

  TrainingResult result{PairwiseModel::initialize(cfg.seed), {}, 0, train_pairs.size(),
                        validation.size()};
  PairwiseModel model = result.model;
  AdamOptimizer adam(model, cfg);
  ModelGradient grad(model);
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::size_t> order(train_pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<PairExample> batch;
  batch.reserve(cfg.batch_size);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_pairs[order[i]]);
      epoch_loss += batch_loss(model, batch, &grad) * static_cast<double>(batch.size());
      adam.step(model, grad);
    }
    EpochStats stats{epoch, epoch_loss / static_cast<double>(order.size()), 0.0};
    stats.validation_loss = validation.empty() ? stats.train_loss : batch_loss(model, validation);
    result.history.push_back(stats);

    if (validation.empty()) {
      result.model = model;
      result.best_epoch = epoch;
      continue;
    }
    if (stats.validation_loss < best) {
      best = stats.validation_loss;
      result.model = model;
      result.best_epoch = epoch;
    } else if (epoch - result.best_epoch >= cfg.patience) {
      break;
    }
  }
  return result;
}

TrainingResult train_reranker(const TrajectoryDataset& ds, const SkillGraph& g,
                              const EmbeddingStore& emb, const QueryEncoder& encoder,
                              const TrainingConfig& cfg) {
  cfg.validate();
  auto all_pairs = make_training_pairs(ds, g, emb, encoder);
  if (all_pairs.empty()) {
    throw InsufficientData("no trajectory has two or more tools; nothing to learn from");
  }
  if (ds.size() >= 2) {
    auto [train_ds, val_ds] = split_train_validation(ds, cfg.validation_fraction, cfg.seed);
    auto train_pairs = make_training_pairs(train_ds, g, emb, encoder);
    auto val_pairs = make_training_pairs(val_ds, g, emb, encoder);
    if (!train_pairs.empty() && !val_pairs.empty()) {
      return train_on_pairs(train_pairs, val_pairs, cfg);
    }
  }
  return train_on_pairs(all_pairs, {}, cfg);
}

}  // namespace skillgraph
