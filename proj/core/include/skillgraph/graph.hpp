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
#include <set>
#include <span>
#include <string>

#include "skillgraph/trajectory.hpp"

namespace skillgraph {

struct EdgeStats {
  std::uint64_t count = 0;
  double weight = 0.0;  // count / total outgoing count of the source

  bool operator==(const EdgeStats&) const = default;
};

struct PositionStats {
  double mean = 0.0;  // mean normalized position, 0 = always first
  std::uint64_t count = 0;

  bool operator==(const PositionStats&) const = default;
};

/// Directed execution-transition graph mined from successful trajectories.
///
/// An edge a -> b records that b immediately followed a after per-trajectory
/// deduplication. Edge weights are conditional transition probabilities
/// P(b | a), so every row with outgoing edges sums to one. Self-loops are
/// never stored. Per-tool position statistics average the normalized
/// position i / (L - 1) over all trajectories containing the tool; a
/// single-tool trajectory contributes 0.5.
///
/// Lookups are const and safe for concurrent readers once construction is
/// finished.
class SkillGraph {
 public:
  using Row = std::map<ToolId, EdgeStats>;

  SkillGraph() = default;

  /// Throws EmptyDataset for an empty dataset.
  static SkillGraph build(const TrajectoryDataset& ds);

  /// Adds one trajectory (deduplicated here) and re-normalizes the rows it
  /// touched. Never removes a node or an edge.
  void add_trajectory(std::span<const ToolId> tools);

  const std::set<ToolId>& nodes() const noexcept { return nodes_; }
  bool contains(const ToolId& tool) const { return nodes_.contains(tool); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  /// w(a, b), or 0 when the edge is absent (unknown tools included).
  double transition_weight(const ToolId& a, const ToolId& b) const;
  std::uint64_t transition_count(const ToolId& a, const ToolId& b) const;

  /// Outgoing / incoming edges of a tool; empty when it has none.
  const Row& successors(const ToolId& tool) const;
  const std::map<ToolId, std::uint64_t>& predecessors(const ToolId& tool) const;

  const std::map<ToolId, Row>& rows() const noexcept { return out_; }
  const std::map<ToolId, PositionStats>& positions() const noexcept {
    return positions_;
  }
  std::optional<double> position_mean(const ToolId& tool) const;

  bool operator==(const SkillGraph& other) const {
    return nodes_ == other.nodes_ && out_ == other.out_ && positions_ == other.positions_;
  }

  /// Graph file: {"format_version":1,"nodes":[...],"edges":[{src,dst,count,
  /// weight}],"positions":[{tool,mean,count}]}.
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

  /// Throws FormatError on a malformed payload and IntegrityError when a
  /// weight row does not sum to one within 1e-6.
  static SkillGraph read(std::istream& in);
  static SkillGraph load(const std::string& path);

  static constexpr int kFormatVersion = 1;
  static constexpr double kLoadRowTolerance = 1e-6;

 private:
  void insert_edge(const ToolId& a, const ToolId& b, std::uint64_t count, double weight);
  void normalize_row(const ToolId& a);

  std::set<ToolId> nodes_;
  std::map<ToolId, Row> out_;
  std::map<ToolId, std::map<ToolId, std::uint64_t>> in_;
  std::map<ToolId, PositionStats> positions_;
  std::size_t edge_count_ = 0;
};

}  // namespace skillgraph
