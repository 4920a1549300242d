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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace skillgraph {

/// Canonical tool identifier: API name and tool name joined by
/// `kToolIdSeparator`. Compared by exact byte equality.
using ToolId = std::string;

inline constexpr std::string_view kToolIdSeparator = "::";

ToolId make_tool_id(std::string_view api_name, std::string_view tool_name);

/// Removes repeated tools, keeping the first occurrence of each.
std::vector<ToolId> deduplicate(std::span<const ToolId> tools);

struct Trajectory {
  std::string query;
  std::vector<ToolId> tools;  // duplicate-free, first-occurrence order
  std::size_t source_index = 0;

  bool operator==(const Trajectory&) const = default;
};

/// Immutable collection of trajectories plus the union of their tools.
class TrajectoryDataset {
 public:
  TrajectoryDataset() = default;
  explicit TrajectoryDataset(std::vector<Trajectory> trajectories);

  const std::vector<Trajectory>& trajectories() const noexcept {
    return trajectories_;
  }
  const std::set<ToolId>& vocabulary() const noexcept { return vocabulary_; }
  std::size_t size() const noexcept { return trajectories_.size(); }
  bool empty() const noexcept { return trajectories_.empty(); }

  auto begin() const noexcept { return trajectories_.begin(); }
  auto end() const noexcept { return trajectories_.end(); }
  const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }

  bool operator==(const TrajectoryDataset&) const = default;

 private:
  std::vector<Trajectory> trajectories_;
  std::set<ToolId> vocabulary_;
};

struct ParseResult {
  TrajectoryDataset dataset;
  std::size_t skipped_empty = 0;  // records whose tool list was empty
};

/// Reads line-delimited `{"query": ..., "tools": [...]}` records. Blank
/// lines are ignored. Throws ParseError for malformed records and
/// EmptyDataset when no usable record remains.
ParseResult parse_trajectories(std::istream& in);
ParseResult load_trajectories(const std::string& path);

void write_trajectories(const TrajectoryDataset& ds, std::ostream& out);
void save_trajectories(const TrajectoryDataset& ds, const std::string& path);

/// Deterministic seeded partition into (train, validation). The validation
/// share is round(n * fraction), clamped so neither side is empty.
std::pair<TrajectoryDataset, TrajectoryDataset> split_train_validation(
    const TrajectoryDataset& ds, double validation_fraction, std::uint64_t seed);

}  // namespace skillgraph
