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

#include <gtest/gtest.h>

#include "skillgraph/error.hpp"
#include "skillgraph/random.hpp"
#include "skillgraph/training.hpp"

namespace skillgraph {
namespace {

struct Fixture {
  TrajectoryDataset ds;
  SkillGraph graph;
  EmbeddingStore emb;
  QueryEncoder encoder = QueryEncoder::builtin(64);

  explicit Fixture(std::vector<Trajectory> ts)
      : ds(std::move(ts)),
        graph(SkillGraph::build(ds)),
        emb(EmbeddingStore::from_descriptions(
            {{"A", "alpha"}, {"B", "bravo"}, {"C", "charlie"}, {"D", "delta"}}, 64)) {}
};

TEST(Training, PairGeneration) {
  Fixture fx({{"alpha bravo", {"A", "B", "C"}, 0}});
  const auto pairs = make_training_pairs(fx.ds, fx.graph, fx.emb, fx.encoder);
  ASSERT_EQ(pairs.size(), 6u);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < pairs.size(); i += 2) {
    EXPECT_EQ(pairs[i].label, 1.0);
    EXPECT_EQ(pairs[i + 1].label, 0.0);
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      EXPECT_EQ(pairs[i].diff[k], -pairs[i + 1].diff[k]);
    }
    // Earlier gold tools have smaller mean position.
    EXPECT_LT(pairs[i].diff[6], 0.0);
    ++positives;
  }
  EXPECT_EQ(positives, 3u);

  Fixture singles({{"q", {"A"}, 0}, {"q", {"B"}, 1}});
  EXPECT_TRUE(make_training_pairs(singles.ds, singles.graph, singles.emb, singles.encoder).empty());
  EXPECT_THROW(train_reranker(singles.ds, singles.graph, singles.emb, singles.encoder),
               InsufficientData);
}

// Pairs whose label is decided by the sign of the position difference alone.
std::vector<PairExample> separable_pairs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PairExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    PairExample fwd;
    for (auto& x : fwd.diff) x = rng.uniform(-0.2, 0.2);
    const double gap = rng.uniform(0.1, 1.0);
    fwd.diff[6] = -gap;
    fwd.label = 1.0;
    PairExample rev;
    for (std::size_t k = 0; k < kFeatureCount; ++k) rev.diff[k] = -fwd.diff[k];
    rev.label = 0.0;
    out.push_back(fwd);
    out.push_back(rev);
  }
  return out;
}

TEST(Training, SeparablePairsReachLowLoss) {
  const auto pairs = separable_pairs(1000, 3);
  TrainingConfig cfg;
  cfg.batch_size = 32;
  const auto result = train_on_pairs(pairs, {}, cfg);
  EXPECT_LE(result.history.size(), 30u);
  EXPECT_LT(batch_loss(result.model, pairs), 0.1);
  EXPECT_LT(result.history.back().train_loss, result.history.front().train_loss);
}

TEST(Training, DeterministicForFixedSeed) {
  const auto pairs = separable_pairs(200, 4);
  const auto val = separable_pairs(20, 5);
  TrainingConfig cfg;
  cfg.batch_size = 16;
  cfg.max_epochs = 5;
  cfg.seed = 12;
  const auto a = train_on_pairs(pairs, val, cfg);
  const auto b = train_on_pairs(pairs, val, cfg);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.best_epoch, b.best_epoch);
  cfg.seed = 13;
  EXPECT_NE(train_on_pairs(pairs, val, cfg).model, a.model);
}

TEST(Training, EarlyStoppingKeepsBestEpoch) {
  const auto pairs = separable_pairs(100, 6);
  // Validation labels flipped: validation loss rises as training improves.
  auto val = separable_pairs(20, 7);
  for (auto& p : val) p.label = 1.0 - p.label;
  TrainingConfig cfg;
  cfg.batch_size = 8;
  cfg.patience = 2;
  cfg.learning_rate = 1e-2;
  const auto r = train_on_pairs(pairs, val, cfg);
  EXPECT_LT(r.history.size(), cfg.max_epochs);
  EXPECT_EQ(r.history.size(), r.best_epoch + cfg.patience);
  double best = r.history[r.best_epoch - 1].validation_loss;
  for (const auto& e : r.history) EXPECT_GE(e.validation_loss, best);
  EXPECT_DOUBLE_EQ(batch_loss(r.model, val), best);
}

TEST(Training, EndToEndOnTrajectories) {
  std::vector<Trajectory> ts;
  for (std::size_t i = 0; i < 40; ++i) {
    ts.push_back({"alpha bravo charlie", {"A", "B", "C"}, ts.size()});
    ts.push_back({"bravo delta", {"B", "D"}, ts.size()});
  }
  Fixture fx(ts);
  TrainingConfig cfg;
  cfg.batch_size = 16;
  cfg.validation_fraction = 0.1;
  const auto r = train_reranker(fx.ds, fx.graph, fx.emb, fx.encoder, cfg);
  EXPECT_GT(r.train_pairs, 0u);
  EXPECT_GT(r.validation_pairs, 0u);
  EXPECT_GE(r.best_epoch, 1u);
  EXPECT_EQ(r.model, train_reranker(fx.ds, fx.graph, fx.emb, fx.encoder, cfg).model);
}

TEST(Training, ConfigValidation) {
  const auto pairs = separable_pairs(4, 1);
  TrainingConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(train_on_pairs(pairs, {}, cfg), InvalidArgument);
  cfg = {};
  cfg.batch_size = 0;
  EXPECT_THROW(train_on_pairs(pairs, {}, cfg), InvalidArgument);
  cfg = {};
  cfg.validation_fraction = 1.0;
  EXPECT_THROW(train_on_pairs(pairs, {}, cfg), InvalidArgument);
  EXPECT_THROW(train_on_pairs({}, {}, TrainingConfig{}), InsufficientData);
}

}  // namespace
}  // namespace skillgraph
