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

#include "skillgraph/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

#include "skillgraph/error.hpp"

namespace skillgraph {

void RetrievalConfig::validate() const {
  if (pool_multiplier < 1) throw InvalidArgument("pool multiplier must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  if (bridge_path_limit < 1) throw InvalidArgument("bridge path limit must be >= 1");
}

std::size_t pool_size(std::size_t k_eval, std::size_t pool_multiplier) {
  return std::max(k_eval + 2, pool_multiplier * k_eval);
}

double position_bonus(const SkillGraph& g, const ToolId& tool, double p) {
  const auto mean = g.position_mean(tool);
  return mean ? 1.0 - std::abs(p - *mean) : 0.0;
}

namespace {

bool better(const ScoredTool& x, const ScoredTool& y) {
  if (x.score != y.score) return x.score > y.score;
  return x.tool < y.tool;
}

std::vector<ScoredTool> rank_library(std::span<const float> query_vec,
                                     const EmbeddingStore& emb) {
  std::vector<ScoredTool> ranked;
  ranked.reserve(emb.size());
  for (const auto& [tool, v] : emb.vectors()) {
    if (query_vec.size() != v.size()) {
      throw InvalidArgument("query vector dimension does not match the embedding store");
    }
    ranked.push_back({tool, dot(query_vec, v)});
  }
  std::sort(ranked.begin(), ranked.end(), better);
  return ranked;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Component {
  std::vector<std::size_t> members;  // indices into the pool
  std::size_t best = 0;              // pool index of the best-scoring member
};

// Shortest undirected path from `from` to `to` over library tools, at most
// `max_edges` long. Neighbors are expanded in id order. Empty if none.
std::vector<ToolId> short_path(const SkillGraph& g, const EmbeddingStore& emb,
                               const ToolId& from, const ToolId& to, std::size_t max_edges) {
  std::map<ToolId, ToolId> parent;
  std::map<ToolId, std::size_t> depth;
  std::deque<ToolId> frontier{from};
  depth.emplace(from, 0);
  while (!frontier.empty()) {
    const ToolId cur = frontier.front();
    frontier.pop_front();
    if (cur == to) break;
    const std::size_t d = depth.at(cur);
    if (d == max_edges) continue;
    std::set<ToolId> next;
    for (const auto& [b, e] : g.successors(cur)) next.insert(b);
    for (const auto& [a, c] : g.predecessors(cur)) next.insert(a);
    for (const auto& nb : next) {
      if (depth.contains(nb) || !emb.contains(nb)) continue;
      depth.emplace(nb, d + 1);
      parent.emplace(nb, cur);
      frontier.push_back(nb);
    }
  }
  if (!depth.contains(to)) return {};
  std::vector<ToolId> path{to};
  while (path.back() != from) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

CandidateSet gs_hybrid_retrieve(std::span<const float> query_vec, const SkillGraph& g,
                                const EmbeddingStore& emb, std::size_t k_eval,
                                const RetrievalConfig& cfg) {
  cfg.validate();
  if (k_eval < 1) throw InvalidArgument("k_eval must be >= 1");
  if (emb.size() == 0) throw EmptyLibrary();

  const auto ranked = rank_library(query_vec, emb);
  std::map<ToolId, double> sim;
  for (const auto& st : ranked) sim.emplace(st.tool, st.score);

  // Step 1: semantic pool.
  const std::size_t n_pool = std::min(pool_size(k_eval, cfg.pool_multiplier), ranked.size());
  std::vector<ToolId> pool;
  std::set<ToolId> in_pool;
  for (std::size_t i = 0; i < n_pool; ++i) {
    pool.push_back(ranked[i].tool);
    in_pool.insert(ranked[i].tool);
  }

  // Step 2: bridge weakly connected components of the induced subgraph.
  if (cfg.max_bridges > 0 && pool.size() > 1) {
    std::map<ToolId, std::size_t> pos;
    for (std::size_t i = 0; i < pool.size(); ++i) pos.emplace(pool[i], i);
    DisjointSets ds(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (const auto& [b, e] : g.successors(pool[i])) {
        if (auto it = pos.find(b); it != pos.end()) ds.unite(i, it->second);
      }
    }
    std::map<std::size_t, Component> by_root;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      auto& comp = by_root[ds.find(i)];
      // Pool indices follow descending similarity, so the first member is the best.
      if (comp.members.empty()) comp.best = i;
      comp.members.push_back(i);
    }
    if (by_root.size() > 1) {
      std::vector<Component> comps;
      for (auto& [root, c] : by_root) comps.push_back(std::move(c));
      const auto hub = std::min_element(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.best < b.best;
      });
      const ToolId hub_tool = pool[hub->best];
      std::vector<std::size_t> others;
      for (const auto& c : comps) {
        if (&c != &*hub) others.push_back(c.best);
      }
      std::sort(others.begin(), others.end());

      std::size_t budget = cfg.max_bridges;
      for (std::size_t other_best : others) {
        if (budget == 0) break;
        const auto path = short_path(g, emb, hub_tool, pool[other_best], cfg.bridge_path_limit);
        if (path.size() < 3) continue;
        std::vector<ToolId> fresh;
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
          if (!in_pool.contains(path[i])) fresh.push_back(path[i]);
        }
        if (fresh.empty() || fresh.size() > budget) continue;
        budget -= fresh.size();
        for (auto& t : fresh) {
          in_pool.insert(t);
          pool.push_back(std::move(t));
        }
      }
    }
  }

  // Step 3: greedy provisional sequencing.
  const std::size_t target = std::min(k_eval, pool.size());
  std::vector<ToolId> seq;
  std::set<ToolId> used;
  {
    const auto start = std::min_element(pool.begin(), pool.end(), [&sim](const ToolId& a, const ToolId& b) {
      return better({a, sim.at(a)}, {b, sim.at(b)});
    });
    seq.push_back(*start);
    used.insert(*start);
  }
  while (seq.size() < target) {
    const ToolId& prev = seq.back();
    const double p = k_eval == 1 ? 0.0
                                 : static_cast<double>(seq.size()) / static_cast<double>(k_eval - 1);
    ScoredTool best{{}, -std::numeric_limits<double>::infinity()};
    for (const auto& t : pool) {
      if (used.contains(t)) continue;
      double w_loc = g.transition_weight(prev, t);
      if (w_loc == 0.0) w_loc = 0.5 * g.transition_weight(t, prev);
      const double score = cfg.alpha * w_loc + (1.0 - cfg.alpha) * sim.at(t) +
                           cfg.gamma * position_bonus(g, t, p);
      if (better({t, score}, best)) best = {t, score};
    }
    seq.push_back(best.tool);
    used.insert(best.tool);
  }

  // Step 4: pad from the full library when the pool ran short.
  for (std::size_t i = 0; seq.size() < k_eval && i < ranked.size(); ++i) {
    if (used.insert(ranked[i].tool).second) seq.push_back(ranked[i].tool);
  }

  CandidateSet out;
  out.k_eval = k_eval;
  for (const auto& t : seq) out.semantic_scores.emplace(t, sim.at(t));
  out.tools = std::move(seq);
  return out;
}

CandidateSet semantic_retrieve(std::span<const float> query_vec, const EmbeddingStore& emb,
                               std::size_t k_eval) {
  if (k_eval < 1) throw InvalidArgument("k_eval must be >= 1");
  if (emb.size() == 0) throw EmptyLibrary();
  CandidateSet out;
  out.k_eval = k_eval;
  for (auto& st : emb.top_k(query_vec, k_eval)) {
    out.semantic_scores.emplace(st.tool, st.score);
    out.tools.push_back(std::move(st.tool));
  }
  return out;
}

}  // namespace skillgraph
