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

#include "skillgraph/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "skillgraph/error.hpp"

namespace skillgraph {

namespace {

std::vector<ToolId> sorted_tools(const CandidateSet& c) {
  std::vector<ToolId> tools = c.tools;
  std::sort(tools.begin(), tools.end());
  return tools;
}

double sim_of(const std::map<ToolId, double>& sims, const ToolId& t) {
  auto it = sims.find(t);
  if (it == sims.end()) throw InvalidArgument("candidate '" + t + "' has no semantic score");
  return it->second;
}

// Enumerates permutations in lexicographic order and keeps the first
// strict maximum.
RankedSequence exhaustive_argmax(std::vector<ToolId> tools,
                                 const std::function<double(std::span<const ToolId>)>& score) {
  RankedSequence best = tools;
  double best_score = -std::numeric_limits<double>::infinity();
  do {
    const double s = score(tools);
    if (s > best_score) {
      best_score = s;
      best = tools;
    }
  } while (std::next_permutation(tools.begin(), tools.end()));
  return best;
}

}  // namespace

RankedSequence rerank_sem_sort(const CandidateSet& candidates) {
  std::vector<ScoredTool> scored;
  for (const auto& t : candidates.tools) scored.push_back({t, sim_of(candidates.semantic_scores, t)});
  sort_by_score(scored);
  RankedSequence out;
  for (auto& st : scored) out.push_back(std::move(st.tool));
  return out;
}

double hybrid_score(std::span<const ToolId> seq, const SkillGraph& g,
                    const std::map<ToolId, double>& sims, double alpha) {
  double transitions = 0.0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    transitions += g.transition_weight(seq[i], seq[i + 1]);
  }
  double semantic = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    semantic += sim_of(sims, seq[i]) / static_cast<double>(i + 1);
  }
  return alpha * transitions + (1.0 - alpha) * semantic;
}

double log_transition_score(std::span<const ToolId> seq, const SkillGraph& g) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    s += std::log(g.transition_weight(seq[i], seq[i + 1]) + kLogEpsilon);
  }
  return s;
}

RankedSequence rerank_hybrid(const CandidateSet& candidates, const SkillGraph& g, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  auto tools = sorted_tools(candidates);
  const auto& sims = candidates.semantic_scores;
  if (tools.size() <= kExhaustiveLimit) {
    return exhaustive_argmax(std::move(tools), [&](std::span<const ToolId> seq) {
      return hybrid_score(seq, g, sims, alpha);
    });
  }

  // Greedy: append the tool with the largest marginal contribution.
  RankedSequence seq;
  std::vector<bool> used(tools.size(), false);
  while (seq.size() < tools.size()) {
    const double pos = static_cast<double>(seq.size() + 1);
    std::size_t pick = tools.size();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tools.size(); ++i) {
      if (used[i]) continue;
      const double w = seq.empty() ? 0.0 : g.transition_weight(seq.back(), tools[i]);
      const double gain = alpha * w + (1.0 - alpha) * sim_of(sims, tools[i]) / pos;
      if (gain > best) {
        best = gain;
        pick = i;
      }
    }
    used[pick] = true;
    seq.push_back(tools[pick]);
  }
  return seq;
}

RankedSequence rerank_opt_perm(const CandidateSet& candidates, const SkillGraph& g) {
  auto tools = sorted_tools(candidates);
  if (tools.size() <= kExhaustiveLimit) {
    return exhaustive_argmax(std::move(tools), [&g](std::span<const ToolId> seq) {
      return log_transition_score(seq, g);
    });
  }

  // Greedy chain from every start; keep the best-scoring chain.
  RankedSequence best_seq;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < tools.size(); ++s) {
    RankedSequence seq{tools[s]};
    std::vector<bool> used(tools.size(), false);
    used[s] = true;
    while (seq.size() < tools.size()) {
      std::size_t pick = tools.size();
      double top = -1.0;
      for (std::size_t i = 0; i < tools.size(); ++i) {
        if (used[i]) continue;
        const double w = g.transition_weight(seq.back(), tools[i]);
        if (w > top) {
          top = w;
          pick = i;
        }
      }
      used[pick] = true;
      seq.push_back(tools[pick]);
    }
    const double score = log_transition_score(seq, g);
    if (score > best || (score == best && seq < best_seq)) {
      best = score;
      best_seq = std::move(seq);
    }
  }
  return best_seq;
}

std::vector<ScoredTool> pairwise_scores(const PairwiseModel& model,
                                        std::span<const ToolFeatures> features,
                                        const FeatureMask& mask) {
  std::vector<FeatureVector> f;
  f.reserve(features.size());
  for (const auto& tf : features) {
    f.push_back(tf.f);
    mask.apply(f.back());
  }
  std::vector<ScoredTool> out;
  for (const auto& tf : features) out.push_back({tf.tool, 0.0});
  for (std::size_t a = 0; a < f.size(); ++a) {
    for (std::size_t b = a + 1; b < f.size(); ++b) {
      const double p_ab = model.predict(f[a], f[b]);
      out[a].score += p_ab;
      out[b].score += 1.0 - p_ab;
    }
  }
  return out;
}

RankedSequence rerank_lr(const PairwiseModel& model, const CandidateSet& candidates,
                         const SkillGraph& g, const EmbeddingStore& emb,
                         std::span<const float> query_vec, const FeatureMask& mask) {
  const auto features = extract_features(candidates, g, emb, query_vec);
  auto scored = pairwise_scores(model, features, mask);
  sort_by_score(scored);
  RankedSequence out;
  for (auto& st : scored) out.push_back(std::move(st.tool));
  return out;
}

}  // namespace skillgraph
