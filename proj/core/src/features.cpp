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

#include "skillgraph/features.hpp"

#include <algorithm>
#include <numeric>

#include "skillgraph/error.hpp"

namespace skillgraph {

void FeatureMask::apply(FeatureVector& f) const {
  if (semantic) f[0] = f[1] = 0.0;
  if (graph) f[2] = f[3] = f[4] = f[5] = 0.0;
  if (position) f[6] = f[7] = 0.0;
}

std::string FeatureMask::to_string() const {
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += ',';
    out += name;
  };
  if (semantic) add("semantic");
  if (graph) add("graph");
  if (position) add("position");
  return out;
}

FeatureMask FeatureMask::parse(std::string_view spec) {
  FeatureMask m;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const auto name = spec.substr(0, comma);
    if (name == "semantic") {
      m.semantic = true;
    } else if (name == "graph") {
      m.graph = true;
    } else if (name == "position") {
      m.position = true;
    } else if (!name.empty()) {
      throw InvalidArgument("unknown feature group '" + std::string(name) + "'");
    }
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  return m;
}

std::vector<ToolFeatures> extract_features(std::span<const ToolId> tools,
                                           std::span<const double> similarities,
                                           const SkillGraph& g) {
  const std::size_t k = tools.size();
  if (k == 0) throw InvalidArgument("cannot extract features for an empty candidate set");
  if (similarities.size() != k) throw InvalidArgument("one similarity per tool is required");

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (similarities[a] != similarities[b]) return similarities[a] > similarities[b];
    return tools[a] < tools[b];
  });
  std::vector<std::size_t> rank(k);
  for (std::size_t r = 0; r < k; ++r) rank[order[r]] = r;

  std::vector<ToolFeatures> out(k);
  for (std::size_t a = 0; a < k; ++a) {
    auto& f = out[a].f;
    out[a].tool = tools[a];
    f[0] = similarities[a];
    f[1] = k == 1 ? 0.0 : static_cast<double>(rank[a]) / static_cast<double>(k - 1);
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const double w_out = g.transition_weight(tools[a], tools[b]);
      const double w_in = g.transition_weight(tools[b], tools[a]);
      f[2] += w_out;
      f[3] += w_in;
      f[4] = std::max(f[4], w_out);
      f[5] = std::max(f[5], w_in);
    }
    f[6] = g.position_mean(tools[a]).value_or(kUnseenPosition);
    f[7] = static_cast<double>(k) / 10.0;
  }
  return out;
}

std::vector<ToolFeatures> extract_features(const CandidateSet& candidates, const SkillGraph& g,
                                           const EmbeddingStore& emb,
                                           std::span<const float> query_vec) {
  std::vector<double> sims;
  sims.reserve(candidates.size());
  for (const auto& t : candidates.tools) sims.push_back(emb.semantic_similarity(query_vec, t));
  return extract_features(candidates.tools, sims, g);
}

}  // namespace skillgraph
