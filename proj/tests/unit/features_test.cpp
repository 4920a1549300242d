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
#include "skillgraph/features.hpp"

namespace skillgraph {
namespace {

SkillGraph graph_of(std::vector<std::pair<std::vector<ToolId>, int>> repeated) {
  std::vector<Trajectory> ts;
  for (auto& [tools, n] : repeated) {
    for (int i = 0; i < n; ++i) ts.push_back({"", tools, ts.size()});
  }
  return SkillGraph::build(TrajectoryDataset(ts));
}

TEST(Features, SingleInternalEdge) {
  // w(A, B) = 0.7: A -> B seven times, A -> Z three times. Z is not a candidate.
  const auto g = graph_of({{{"A", "B"}, 7}, {{"A", "Z"}, 3}});
  ASSERT_DOUBLE_EQ(g.transition_weight("A", "B"), 0.7);
  const std::vector<ToolId> tools{"A", "B"};
  const std::vector<double> sims{0.3, 0.6};
  const auto f = extract_features(tools, sims, g);
  EXPECT_DOUBLE_EQ(f[0].f[2], 0.7);
  EXPECT_DOUBLE_EQ(f[0].f[4], 0.7);
  EXPECT_DOUBLE_EQ(f[0].f[3], 0.0);
  EXPECT_DOUBLE_EQ(f[0].f[5], 0.0);
  EXPECT_DOUBLE_EQ(f[1].f[2], 0.0);
  EXPECT_DOUBLE_EQ(f[1].f[4], 0.0);
  EXPECT_DOUBLE_EQ(f[1].f[3], 0.7);
  EXPECT_DOUBLE_EQ(f[1].f[5], 0.7);
  // Semantic rank: B is the most similar.
  EXPECT_DOUBLE_EQ(f[1].f[1], 0.0);
  EXPECT_DOUBLE_EQ(f[0].f[1], 1.0);
  EXPECT_DOUBLE_EQ(f[0].f[0], 0.3);
  // Positions: A always first, B always last.
  EXPECT_DOUBLE_EQ(f[0].f[6], 0.0);
  EXPECT_DOUBLE_EQ(f[1].f[6], 1.0);
}

TEST(Features, SizeFeatureRankTiesAndUnseenPosition) {
  const auto g = graph_of({{{"A"}, 1}});
  const std::vector<ToolId> tools{"E", "D", "C", "B", "A"};
  const std::vector<double> sims{0.5, 0.5, 0.5, 0.5, 0.5};
  const auto f = extract_features(tools, sims, g);
  for (const auto& tf : f) EXPECT_DOUBLE_EQ(tf.f[7], 0.5);
  // Equal similarity ranks by id: A first, E last.
  EXPECT_DOUBLE_EQ(f[4].f[1], 0.0);
  EXPECT_DOUBLE_EQ(f[0].f[1], 1.0);
  EXPECT_DOUBLE_EQ(f[2].f[1], 0.5);
  EXPECT_DOUBLE_EQ(f[0].f[6], kUnseenPosition);
  EXPECT_DOUBLE_EQ(f[4].f[6], 0.5);

  const std::vector<ToolId> one{"A"};
  const std::vector<double> one_sim{0.2};
  EXPECT_DOUBLE_EQ(extract_features(one, one_sim, g)[0].f[1], 0.0);
  EXPECT_DOUBLE_EQ(extract_features(one, one_sim, g)[0].f[7], 0.1);
}

TEST(Features, InvariantsHold) {
  const auto g = graph_of({{{"A", "B", "C"}, 3}, {{"B", "A", "D"}, 2}, {{"C", "D"}, 1}});
  const std::vector<ToolId> tools{"A", "B", "C", "D"};
  const std::vector<double> sims{0.1, 0.9, -0.2, 0.4};
  for (const auto& tf : extract_features(tools, sims, g)) {
    EXPECT_GE(tf.f[1], 0.0);
    EXPECT_LE(tf.f[1], 1.0);
    EXPECT_GE(tf.f[2], 0.0);
    EXPECT_GE(tf.f[3], 0.0);
    EXPECT_LE(tf.f[4], tf.f[2]);
    EXPECT_LE(tf.f[5], tf.f[3]);
    EXPECT_GE(tf.f[6], 0.0);
    EXPECT_LE(tf.f[6], 1.0);
    EXPECT_GT(tf.f[7], 0.0);
  }
}

TEST(Features, EmptyCandidatesAndMissingEmbedding) {
  const auto g = graph_of({{{"A"}, 1}});
  EXPECT_THROW(extract_features(std::vector<ToolId>{}, std::vector<double>{}, g),
               InvalidArgument);
  CandidateSet c{{"A"}, {{"A", 1.0}}, 1};
  EmbeddingStore emb(2, std::string(kExternalEncoderTag));
  EXPECT_THROW(extract_features(c, g, emb, Embedding{1, 0}), MissingEmbedding);
}

TEST(FeatureMask, ZeroesOnlyItsGroup) {
  const FeatureVector f{1, 2, 3, 4, 5, 6, 7, 8};
  auto apply = [&](const char* spec) {
    FeatureVector g = f;
    FeatureMask::parse(spec).apply(g);
    return g;
  };
  EXPECT_EQ(apply("semantic"), (FeatureVector{0, 0, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(apply("graph"), (FeatureVector{1, 2, 0, 0, 0, 0, 7, 8}));
  EXPECT_EQ(apply("position"), (FeatureVector{1, 2, 3, 4, 5, 6, 0, 0}));
  EXPECT_EQ(apply(""), f);
  EXPECT_EQ(FeatureMask::parse("position,graph").to_string(), "graph,position");
  EXPECT_THROW(FeatureMask::parse("graph,colour"), InvalidArgument);
}

}  // namespace
}  // namespace skillgraph
