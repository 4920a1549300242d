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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skillgraph/embeddings.hpp"
#include "skillgraph/graph.hpp"

namespace skillgraph {

/// Symmetric weighted graph over tools, stored by node index. Node indices
/// follow ascending ToolId order.
class UndirectedGraph {
 public:
  struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;  // u < v
    double weight = 0.0;
  };

  UndirectedGraph() = default;
  explicit UndirectedGraph(std::vector<ToolId> nodes);

  /// Accumulates onto an existing edge. Self-loops are rejected.
  void add_edge(std::size_t u, std::size_t v, double weight);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<ToolId>& nodes() const noexcept { return nodes_; }
  std::size_t index_of(const ToolId& tool) const;  // throws InvalidArgument

  std::vector<Edge> edges() const;
  const std::vector<std::pair<std::size_t, double>>& neighbors(std::size_t u) const {
    return adj_[u];
  }
  /// Weight of {u, v}, or nullopt when the pair is absent.
  std::optional<double> weight(const ToolId& a, const ToolId& b) const;
  double total_weight() const noexcept { return total_weight_; }

 private:
  std::vector<ToolId> nodes_;
  std::map<ToolId, std::size_t> index_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;  // sorted by neighbor
  double total_weight_ = 0.0;
};

/// weight(a, b) = (w(a, b) + w(b, a)) / 2 for every pair joined in at least
/// one direction.
UndirectedGraph undirected_projection(const SkillGraph& g);

struct Partition {
  std::map<ToolId, std::size_t> assignment;  // community indices 0..count-1
  std::size_t community_count = 0;

  bool operator==(const Partition&) const = default;
};

/// Louvain with resolution 1. Node visiting order is shuffled once from
/// `seed`, then kept fixed; communities are numbered by their smallest
/// member id. An edgeless graph yields singletons.
Partition louvain(const UndirectedGraph& g, std::uint64_t seed);

/// Weighted Newman modularity. Throws InvalidArgument when the partition
/// does not cover every node. A graph without edges scores 0.
double modularity(const UndirectedGraph& g, const Partition& p);

using CategoryLabels = std::map<ToolId, std::string>;

struct PurityResult {
  double mean = 0.0;                // unweighted across communities
  std::vector<double> per_community;  // by community index
};

/// Throws MissingLabel when a partitioned tool has no label.
PurityResult purity(const Partition& p, const CategoryLabels& labels);

/// Mutual information normalized by the arithmetic mean of the two
/// entropies. When both entropies are zero the labelings agree trivially
/// and the result is 1.
double nmi(const Partition& p, const CategoryLabels& labels);

struct CommunityReport {
  std::size_t community_count = 0;
  double modularity = 0.0;
  double mean_purity = 0.0;
  double nmi = 0.0;
  std::vector<double> per_community_purity;
};

CommunityReport community_report(const UndirectedGraph& g, const Partition& p,
                                 const CategoryLabels& labels);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t pair_count = 0;
};

/// Spearman rank correlation with average ranks for ties. The two-sided p
/// value uses the large-sample normal approximation z = rho * sqrt(n - 1).
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

/// Correlates w(a, b) with the cosine similarity of a and b over every
/// directed edge. Throws MissingEmbedding for an uncovered node.
SpearmanResult complementarity(const SkillGraph& g, const EmbeddingStore& emb);

/// Line-delimited {"tool": ..., "category": ...}.
CategoryLabels read_labels(std::istream& in);
CategoryLabels load_labels(const std::string& path);
void write_labels(const CategoryLabels& labels, std::ostream& out);

}  // namespace skillgraph
