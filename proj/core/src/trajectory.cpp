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

#include "skillgraph/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "skillgraph/error.hpp"
#include "skillgraph/io.hpp"
#include "skillgraph/random.hpp"

namespace skillgraph {

using json = nlohmann::json;

ToolId make_tool_id(std::string_view api_name, std::string_view tool_name) {
  ToolId id;
  id.reserve(api_name.size() + kToolIdSeparator.size() + tool_name.size());
  id.append(api_name).append(kToolIdSeparator).append(tool_name);
  return id;
}

std::vector<ToolId> deduplicate(std::span<const ToolId> tools) {
  std::vector<ToolId> out;
  out.reserve(tools.size());
  std::unordered_set<std::string_view> seen;
  for (const auto& t : tools) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

TrajectoryDataset::TrajectoryDataset(std::vector<Trajectory> trajectories)
    : trajectories_(std::move(trajectories)) {
  for (auto& t : trajectories_) {
    t.tools = deduplicate(t.tools);
    vocabulary_.insert(t.tools.begin(), t.tools.end());
  }
}

ParseResult parse_trajectories(std::istream& in) {
  std::vector<Trajectory> out;
  std::size_t skipped = 0;
  std::size_t line_no = 0;
  std::size_t records = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(line_no, "record is not an object");
    auto q = rec.find("query");
    auto t = rec.find("tools");
    if (q == rec.end() || !q->is_string()) {
      throw ParseError(line_no, "missing string field 'query'");
    }
    if (t == rec.end() || !t->is_array()) {
      throw ParseError(line_no, "missing array field 'tools'");
    }
    std::vector<ToolId> tools;
    tools.reserve(t->size());
    for (const auto& item : *t) {
      if (!item.is_string() || item.get_ref<const std::string&>().empty()) {
        throw ParseError(line_no, "tool identifiers must be non-empty strings");
      }
      tools.push_back(item.get<std::string>());
    }
    ++records;
    if (tools.empty()) {
      ++skipped;
      continue;
    }
    out.push_back(Trajectory{q->get<std::string>(), deduplicate(tools), records - 1});
  }
  if (out.empty()) {
    throw EmptyDataset(records == 0 ? "no trajectory records in input"
                                    : "every trajectory record has an empty tool list");
  }
  if (skipped > 0) {
    log_warning("skipped " + std::to_string(skipped) +
                " trajectory record(s) with an empty tool list");
  }
  return ParseResult{TrajectoryDataset(std::move(out)), skipped};
}

ParseResult load_trajectories(const std::string& path) {
  auto in = open_input(path);
  return parse_trajectories(in);
}

void write_trajectories(const TrajectoryDataset& ds, std::ostream& out) {
  for (const auto& t : ds) {
    json rec = {{"query", t.query}, {"tools", t.tools}};
    out << rec.dump() << '\n';
  }
}

void save_trajectories(const TrajectoryDataset& ds, const std::string& path) {
  auto out = open_output(path);
  write_trajectories(ds, out);
}

std::pair<TrajectoryDataset, TrajectoryDataset> split_train_validation(
    const TrajectoryDataset& ds, double validation_fraction, std::uint64_t seed) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw InvalidArgument("validation fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  if (n < 2) throw InvalidArgument("split needs at least 2 trajectories");

  auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * validation_fraction));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span(order));

  std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  auto gather = [&ds](const std::vector<std::size_t>& idx) {
    std::vector<Trajectory> part;
    part.reserve(idx.size());
    for (auto i : idx) part.push_back(ds[i]);
    return TrajectoryDataset(std::move(part));
  };
  return {gather(train_idx), gather(val_idx)};
}

}  // namespace skillgraph
