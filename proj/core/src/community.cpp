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

#include "skillgraph/community.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "skillgraph/error.hpp"
#include "skillgraph/io.hpp"
#include "skillgraph/random.hpp"

namespace skillgraph {

using json = nlohmann::json;

UndirectedGraph::UndirectedGraph(std::vector<ToolId> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);
  adj_.resize(nodes_.size());
}

std::size_t UndirectedGraph::index_of(const ToolId& tool) const {
  auto it = index_.find(tool);
  if (it == index_.end()) throw InvalidArgument("unknown node '" + tool + "'");
  return it->second;
}

void UndirectedGraph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u == v) throw InvalidArgument("self-loops are not allowed");
  if (u >= nodes_.size() || v >= nodes_.size()) throw InvalidArgument("node index out of range");
  auto upsert = [](std::vector<std::pair<std::size_t, double>>& row, std::size_t to, double w) {
    auto it = std::lower_bound(row.begin(), row.end(), to,
                               [](const auto& e, std::size_t x) { return e.first < x; });
    if (it != row.end() && it->first == to) {
      it->second += w;
    } else {
      row.insert(it, {to, w});
    }
  };
  upsert(adj_[u], v, weight);
  upsert(adj_[v], u, weight);
  total_weight_ += weight;
}

std::vector<UndirectedGraph::Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    for (const auto& [v, w] : adj_[u]) {
      if (u < v) out.push_back({u, v, w});
    }
  }
  return out;
}

std::optional<double> UndirectedGraph::weight(const ToolId& a, const ToolId& b) const {
  auto ia = index_.find(a);
  auto ib = index_.find(b);
  if (ia == index_.end() || ib == index_.end()) return std::nullopt;
  for (const auto& [v, w] : adj_[ia->second]) {
    if (v == ib->second) return w;
  }
  return std::nullopt;
}

UndirectedGraph undirected_projection(const SkillGraph& g) {
  UndirectedGraph ug(std::vector<ToolId>(g.nodes().begin(), g.nodes().end()));
  for (const auto& [a, row] : g.rows()) {
    for (const auto& [b, e] : row) {
      const double reverse = g.transition_weight(b, a);
      // Each unordered pair is added once, from its smaller endpoint, unless
      // only the larger endpoint has the edge.
      if (a < b || reverse == 0.0) {
        ug.add_edge(ug.index_of(a), ug.index_of(b), (e.weight + reverse) / 2.0);
      }
    }
  }
  return ug;
}

namespace {

// Working graph for one Louvain level; self_loop holds collapsed
// intra-community weight.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self_loop;

  std::size_t size() const { return adj.size(); }
};

// Local-moving phase. Returns the community of every node and whether any
// node moved.
std::pair<std::vector<std::size_t>, bool> move_nodes(const LevelGraph& g,
                                                     const std::vector<std::size_t>& order,
                                                     double m) {
  const std::size_t n = g.size();
  std::vector<double> degree(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& [v, w] : g.adj[u]) degree[u] += w;
    degree[u] += 2.0 * g.self_loop[u];
  }
  std::vector<std::size_t> com(n);
  std::iota(com.begin(), com.end(), std::size_t{0});
  std::vector<double> tot = degree;

  std::vector<double> w_to(n, 0.0);
  std::vector<std::size_t> touched;
  const double two_m2 = 2.0 * m * m;
  constexpr double kMinGain = 1e-12;

  bool improved = false;
  for (;;) {
    bool moved = false;
    for (std::size_t u : order) {
      touched.clear();
      for (const auto& [v, w] : g.adj[u]) {
        const auto c = com[v];
        if (w_to[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end()) {
          touched.push_back(c);
        }
        w_to[c] += w;
      }
      const auto cu = com[u];
      const double k = degree[u];
      tot[cu] -= k;
      const double remove_cost = -w_to[cu] / m + k * tot[cu] / two_m2;
      std::size_t best = cu;
      double best_gain = 0.0;
      for (std::size_t c : touched) {
        const double gain = remove_cost + w_to[c] / m - k * tot[c] / two_m2;
        if (gain > best_gain + kMinGain) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k;
      if (best != cu) {
        com[u] = best;
        moved = true;
        improved = true;
      }
      for (std::size_t c : touched) w_to[c] = 0.0;
      w_to[cu] = 0.0;
    }
    if (!moved) break;
  }
  return {std::move(com), improved};
}

}  // namespace

Partition louvain(const UndirectedGraph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  Partition p;
  if (n == 0) return p;

  std::vector<std::size_t> membership(n);
  std::iota(membership.begin(), membership.end(), std::size_t{0});

  const double m = g.total_weight();
  if (m > 0.0) {
    LevelGraph level;
    level.adj.resize(n);
    level.self_loop.assign(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) level.adj[u] = g.neighbors(u);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span(order));

    for (;;) {
      auto [com, improved] = move_nodes(level, order, m);
      if (!improved) break;

      // Renumber communities by first appearance along the sweep order.
      constexpr auto kUnset = static_cast<std::size_t>(-1);
      std::vector<std::size_t> renum(level.size(), kUnset);
      std::size_t next = 0;
      for (std::size_t u : order) {
        if (renum[com[u]] == kUnset) renum[com[u]] = next++;
      }
      for (auto& c : membership) c = renum[com[c]];

      LevelGraph agg;
      agg.adj.resize(next);
      agg.self_loop.assign(next, 0.0);
      std::vector<std::map<std::size_t, double>> acc(next);
      for (std::size_t u = 0; u < level.size(); ++u) {
        const auto cu = renum[com[u]];
        agg.self_loop[cu] += level.self_loop[u];
        for (const auto& [v, w] : level.adj[u]) {
          if (u >= v) continue;
          const auto cv = renum[com[v]];
          if (cu == cv) {
            agg.self_loop[cu] += w;
          } else {
            acc[cu][cv] += w;
            acc[cv][cu] += w;
          }
        }
      }
      for (std::size_t c = 0; c < next; ++c) {
        agg.adj[c].assign(acc[c].begin(), acc[c].end());
      }
      level = std::move(agg);
      order.resize(next);
      std::iota(order.begin(), order.end(), std::size_t{0});
    }
  }

  // Final labels ordered by smallest member (node indices follow id order).
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, kUnset);
  std::size_t next = 0;
  for (std::size_t u = 0; u < n; ++u) {
    auto& l = label[membership[u]];
    if (l == kUnset) l = next++;
    p.assignment.emplace(g.nodes()[u], l);
  }
  p.community_count = next;
  return p;
}

double modularity(const UndirectedGraph& g, const Partition& p) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> com(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto it = p.assignment.find(g.nodes()[u]);
    if (it == p.assignment.end()) {
      throw InvalidArgument("partition does not cover node '" + g.nodes()[u] + "'");
    }
    com[u] = it->second;
  }
  const double m = g.total_weight();
  if (m == 0.0) return 0.0;

  std::map<std::size_t, double> internal;
  std::map<std::size_t, double> degree_sum;
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& [v, w] : g.neighbors(u)) {
      degree_sum[com[u]] += w;
      if (u < v && com[u] == com[v]) internal[com[u]] += w;
    }
  }
  double q = 0.0;
  for (const auto& [c, d] : degree_sum) {
    const double frac = d / (2.0 * m);
    q += internal[c] / m - frac * frac;
  }
  return q;
}

namespace {

// Groups partition members by community and checks label coverage.
std::vector<std::vector<const std::string*>> labels_by_community(const Partition& p,
                                                                 const CategoryLabels& labels) {
  std::vector<std::vector<const std::string*>> groups(p.community_count);
  for (const auto& [tool, c] : p.assignment) {
    auto it = labels.find(tool);
    if (it == labels.end()) throw MissingLabel(tool);
    if (c >= groups.size()) groups.resize(c + 1);
    groups[c].push_back(&it->second);
  }
  return groups;
}

}  // namespace

PurityResult purity(const Partition& p, const CategoryLabels& labels) {
  PurityResult r;
  for (const auto& group : labels_by_community(p, labels)) {
    if (group.empty()) continue;
    std::map<std::string_view, std::size_t> counts;
    std::size_t best = 0;
    for (const auto* l : group) best = std::max(best, ++counts[*l]);
    r.per_community.push_back(static_cast<double>(best) / static_cast<double>(group.size()));
  }
  if (!r.per_community.empty()) {
    r.mean = std::accumulate(r.per_community.begin(), r.per_community.end(), 0.0) /
             static_cast<double>(r.per_community.size());
  }
  return r;
}

double nmi(const Partition& p, const CategoryLabels& labels) {
  const auto groups = labels_by_community(p, labels);
  std::map<std::pair<std::size_t, std::string_view>, double> joint;
  std::map<std::size_t, double> by_com;
  std::map<std::string_view, double> by_label;
  double total = 0.0;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    for (const auto* l : groups[c]) {
      joint[{c, *l}] += 1.0;
      by_com[c] += 1.0;
      by_label[*l] += 1.0;
      total += 1.0;
    }
  }
  if (total == 0.0) return 1.0;
  auto entropy = [total](const auto& counts) {
    double h = 0.0;
    for (const auto& [k, n] : counts) {
      const double q = n / total;
      h -= q * std::log(q);
    }
    return h;
  };
  const double hu = entropy(by_com);
  const double hv = entropy(by_label);
  double mi = 0.0;
  for (const auto& [key, n] : joint) {
    mi += (n / total) * std::log(n * total / (by_com[key.first] * by_label[key.second]));
  }
  const double denom = 0.5 * (hu + hv);
  if (denom <= 0.0) return 1.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

CommunityReport community_report(const UndirectedGraph& g, const Partition& p,
                                 const CategoryLabels& labels) {
  CommunityReport r;
  r.community_count = p.community_count;
  r.modularity = modularity(g, p);
  auto pur = purity(p, labels);
  r.mean_purity = pur.mean;
  r.per_community_purity = std::move(pur.per_community);
  r.nmi = nmi(p, labels);
  return r;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman inputs differ in length");
  SpearmanResult r;
  r.pair_count = x.size();
  if (x.size() < 2) return r;

  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return r;
  r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double z = r.rho * std::sqrt(n - 1.0);
  r.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  return r;
}

SpearmanResult complementarity(const SkillGraph& g, const EmbeddingStore& emb) {
  for (const auto& t : g.nodes()) {
    if (!emb.contains(t)) throw MissingEmbedding(t);
  }
  std::vector<double> weights;
  std::vector<double> sims;
  for (const auto& [a, row] : g.rows()) {
    for (const auto& [b, e] : row) {
      weights.push_back(e.weight);
      sims.push_back(dot(emb.vector(a), emb.vector(b)));
    }
  }
  return spearman(weights, sims);
}

CategoryLabels read_labels(std::istream& in) {
  CategoryLabels out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = json::parse(line);
      auto tool = rec.at("tool").get<std::string>();
      auto category = rec.at("category").get<std::string>();
      if (tool.empty()) throw ParseError(line_no, "empty tool id");
      if (!out.emplace(std::move(tool), std::move(category)).second) {
        throw ParseError(line_no, "duplicate label");
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

CategoryLabels load_labels(const std::string& path) {
  auto in = open_input(path);
  return read_labels(in);
}

void write_labels(const CategoryLabels& labels, std::ostream& out) {
  for (const auto& [tool, category] : labels) {
    json rec = {{"tool", tool}, {"category", category}};
    out << rec.dump() << '\n';
  }
}

}  // namespace skillgraph
