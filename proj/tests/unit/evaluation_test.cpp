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
#include "skillgraph/evaluation.hpp"
#include "skillgraph/synthetic.hpp"
#include "skillgraph/training.hpp"

namespace skillgraph {
namespace {

TEST(Evaluation, MethodAndKModeParsing) {
  for (auto m : {Stage2Method::kSemSort, Stage2Method::kHybrid, Stage2Method::kOptPerm,
                 Stage2Method::kLearned}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_THROW(parse_method("random"), InvalidArgument);
  EXPECT_EQ(KMode::parse("oracle").k_for(1), 3u);
  EXPECT_EQ(KMode::parse("oracle").k_for(6), 6u);
  EXPECT_EQ(KMode::parse("fixed:4").k_for(9), 4u);
  EXPECT_EQ(KMode::parse("fixed:4").to_string(), "fixed:4");
  EXPECT_EQ(KMode{}.to_string(), "oracle");
  for (const char* bad : {"fixed:0", "fixed:", "fixed:3x", "auto"}) {
    EXPECT_THROW(KMode::parse(bad), InvalidArgument) << bad;
  }
}

class EvaluationPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    WorkflowSpec spec;
    spec.domain_count = 3;
    spec.tools_per_domain = 8;
    spec.chains_per_domain = 4;
    spec.trajectories_per_chain = 20;
    spec.test_trajectories_per_chain = 3;
    corpus_ = new SyntheticCorpus(generate(spec));
    graph_ = new SkillGraph(SkillGraph::build(corpus_->train));
    emb_ = new EmbeddingStore(EmbeddingStore::from_descriptions(corpus_->descriptions, 1024));
    encoder_ = new QueryEncoder(QueryEncoder::builtin(1024));
    TrainingConfig cfg;
    cfg.batch_size = 128;
    cfg.max_epochs = 10;
    model_ = new PairwiseModel(train_reranker(corpus_->train, *graph_, *emb_, *encoder_, cfg).model);
  }
  static void TearDownTestSuite() {
    delete model_;
    delete encoder_;
    delete emb_;
    delete graph_;
    delete corpus_;
  }

  PipelineContext ctx() const { return {*graph_, *emb_, *encoder_, model_}; }

  static SyntheticCorpus* corpus_;
  static SkillGraph* graph_;
  static EmbeddingStore* emb_;
  static QueryEncoder* encoder_;
  static PairwiseModel* model_;
};

SyntheticCorpus* EvaluationPipeline::corpus_ = nullptr;
SkillGraph* EvaluationPipeline::graph_ = nullptr;
EmbeddingStore* EvaluationPipeline::emb_ = nullptr;
QueryEncoder* EvaluationPipeline::encoder_ = nullptr;
PairwiseModel* EvaluationPipeline::model_ = nullptr;

TEST_F(EvaluationPipeline, CandidatesFollowKMode) {
  const auto& test = corpus_->test;
  const auto oracle = retrieve_all(test, ctx(), {}, KMode{});
  const auto fixed = retrieve_all(test, ctx(), {}, KMode{2});
  ASSERT_EQ(oracle.size(), test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    EXPECT_EQ(oracle[i].size(), oracle_k(test[i].tools.size()));
    EXPECT_EQ(fixed[i].size(), 2u);
  }
  EXPECT_EQ(oracle, retrieve_all(test, ctx(), {}, KMode{}));
}

TEST_F(EvaluationPipeline, RunMatchesSequentialScoring) {
  const auto& test = corpus_->test;
  const auto cands = retrieve_all(test, ctx(), {}, KMode{});
  for (auto method : {Stage2Method::kSemSort, Stage2Method::kHybrid, Stage2Method::kOptPerm,
                      Stage2Method::kLearned}) {
    const RerankConfig cfg{method};
    const auto run = run_method(test, cands, ctx(), cfg);
    ASSERT_EQ(run.instances.size(), test.size());
    double tau = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto pred = rerank(cands[i], test[i].query, ctx(), cfg);
      ASSERT_EQ(run.instances[i].prediction, pred);
      ASSERT_EQ(run.instances[i].score, score_instance(pred, test[i].tools));
      tau += run.instances[i].score.kendall_tau;
    }
    EXPECT_NEAR(run.aggregate.overall[Metric::kKendallTau], tau / static_cast<double>(test.size()),
                1e-12);
    EXPECT_EQ(run.label, method_name(method));
  }
}

TEST_F(EvaluationPipeline, AblationKeepsCandidateSets) {
  const auto& test = corpus_->test;
  const auto cands = retrieve_all(test, ctx(), {}, KMode{});
  const auto full = run_method(test, cands, ctx(), {});
  for (const char* group : {"semantic", "graph", "position"}) {
    RerankConfig cfg;
    cfg.ablation = FeatureMask::parse(group);
    const auto arm = run_method(test, cands, ctx(), cfg, group);
    EXPECT_EQ(arm.label, group);
    EXPECT_EQ(arm.aggregate.overall[Metric::kSetF1], full.aggregate.overall[Metric::kSetF1]);
  }
}

TEST_F(EvaluationPipeline, Errors) {
  const auto& test = corpus_->test;
  const auto cands = retrieve_all(test, ctx(), {}, KMode{});
  const PipelineContext no_model{*graph_, *emb_, *encoder_, nullptr};
  EXPECT_THROW(run_method(test, cands, no_model, {}), InvalidArgument);
  EXPECT_THROW(run_method(test, std::span(cands).first(1), ctx(), {}), InvalidArgument);
  EXPECT_THROW(run_method(TrajectoryDataset{}, {}, ctx(), {}), EmptyDataset);
  RerankConfig bad{Stage2Method::kHybrid};
  bad.hybrid_alpha = -0.1;
  EXPECT_THROW(run_method(test, cands, ctx(), bad), InvalidArgument);
}

TEST_F(EvaluationPipeline, JsonShapes) {
  const auto s = score_instance(std::vector<ToolId>{"A", "C", "B"}, std::vector<ToolId>{"A", "B", "C"});
  const auto j = to_json(s);
  EXPECT_EQ(j.at("gold_length"), 3);
  EXPECT_DOUBLE_EQ(j.at("kendall_tau").get<double>(), 1.0 / 3.0);
  const std::vector<InstanceScore> one{s};
  const auto r = to_json(aggregate(one));
  EXPECT_EQ(r.at("buckets").at("3-4").at("count"), 1);
  EXPECT_EQ(r.at("buckets").at("5+").at("count"), 0);
}

}  // namespace
}  // namespace skillgraph
