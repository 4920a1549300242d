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

#include "skillgraph/graph.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>

#include <nlohmann/json.hpp>

#include "skillgraph/error.hpp"
#include "skillgraph/io.hpp"

namespace skillgraph {

using json = nlohmann::json;

namespace {

const SkillGraph::Row kEmptyRow;
const std::map<ToolId, std::uint64_t> kEmptyPredecessors;

}  // namespace

SkillGraph SkillGraph::build(const TrajectoryDataset& ds) {
  if (ds.empty()) throw EmptyDataset("cannot build a graph from an empty dataset");
  SkillGraph g;
  for (const auto& t : ds) g.add_trajectory(t.tools);
  return g;
}

void SkillGraph::add_trajectory(std::span<const ToolId> raw) {
  const auto tools = deduplicate(raw);
  const std::size_t n = tools.size();
  if (n == 0) return;

  for (std::size_t i = 0; i < n; ++i) {
    nodes_.insert(tools[i]);
    const double pos = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
    auto& ps = positions_[tools[i]];
    ++ps.count;
    ps.mean += (pos - ps.mean) / static_cast<double>(ps.count);
  }

  std::set<ToolId> touched;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& a = tools[i];
    const auto& b = tools[i + 1];
    if (a == b) continue;
    auto& e = out_[a][b];
    if (e.count == 0) ++edge_count_;
    ++e.count;
    ++in_[b][a];
    touched.insert(a);
  }
  for (const auto& a : touched) normalize_row(a);
}

void SkillGraph::normalize_row(const ToolId& a) {
  auto& row = out_[a];
  std::uint64_t total = 0;
  for (const auto& [dst, e] : row) total += e.count;
  for (auto& [dst, e] : row) {
    e.weight = static_cast<double>(e.count) / static_cast<double>(total);
  }
}

double SkillGraph::transition_weight(const ToolId& a, const ToolId& b) const {
  auto row = out_.find(a);
  if (row == out_.end()) return 0.0;
  auto e = row->second.find(b);
  return e == row->second.end() ? 0.0 : e->second.weight;
}

std::uint64_t SkillGraph::transition_count(const ToolId& a, const ToolId& b) const {
  auto row = out_.find(a);
  if (row == out_.end()) return 0;
  auto e = row->second.find(b);
  return e == row->second.end() ? 0 : e->second.count;
}

const SkillGraph::Row& SkillGraph::successors(const ToolId& tool) const {
  auto it = out_.find(tool);
  return it == out_.end() ? kEmptyRow : it->second;
}

const std::map<ToolId, std::uint64_t>& SkillGraph::predecessors(const ToolId& tool) const {
  auto it = in_.find(tool);
  return it == in_.end() ? kEmptyPredecessors : it->second;
}

std::optional<double> SkillGraph::position_mean(const ToolId& tool) const {
  auto it = positions_.find(tool);
  if (it == positions_.end()) return std::nullopt;
  return it->second.mean;
}

void SkillGraph::write(std::ostream& out) const {
  json edges = json::array();
  for (const auto& [src, row] : out_) {
    for (const auto& [dst, e] : row) {
      edges.push_back({{"src", src}, {"dst", dst}, {"count", e.count}, {"weight", e.weight}});
    }
  }
  json positions = json::array();
  for (const auto& [tool, ps] : positions_) {
    positions.push_back({{"tool", tool}, {"mean", ps.mean}, {"count", ps.count}});
  }
  json doc = {{"format_version", kFormatVersion},
              {"nodes", nodes_},
              {"edges", std::move(edges)},
              {"positions", std::move(positions)}};
  out << doc.dump() << '\n';
}

void SkillGraph::save(const std::string& path) const {
  auto out = open_output(path);
  write(out);
}

void SkillGraph::insert_edge(const ToolId& a, const ToolId& b, std::uint64_t count,
                             double weight) {
  auto [it, inserted] = out_[a].emplace(b, EdgeStats{count, weight});
  if (!inserted) throw FormatError("duplicate edge " + a + " -> " + b);
  in_[b][a] = count;
  ++edge_count_;
}

SkillGraph SkillGraph::read(std::istream& in) {
  const std::string payload(std::istreambuf_iterator<char>(in), {});
  json doc;
  try {
    doc = json::parse(payload);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("graph payload is not valid JSON: ") + e.what());
  }

  SkillGraph g;
  try {
    if (!doc.is_object()) throw FormatError("graph payload must be an object");
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw FormatError("unsupported graph format_version");
    }
    for (const auto& n : doc.at("nodes")) {
      const auto& id = n.get_ref<const std::string&>();
      if (id.empty()) throw FormatError("empty node identifier");
      if (!g.nodes_.insert(id).second) throw FormatError("duplicate node " + id);
    }
    for (const auto& e : doc.at("edges")) {
      const auto src = e.at("src").get<std::string>();
      const auto dst = e.at("dst").get<std::string>();
      const auto count = e.at("count").get<std::uint64_t>();
      const auto weight = e.at("weight").get<double>();
      if (src == dst) throw FormatError("self-loop on " + src);
      if (!g.nodes_.contains(src) || !g.nodes_.contains(dst)) {
        throw FormatError("edge endpoint not among nodes: " + src + " -> " + dst);
      }
      if (count == 0) throw FormatError("edge count must be >= 1");
      if (!(weight > 0.0 && weight <= 1.0)) {
        throw IntegrityError("edge weight outside (0, 1]: " + src + " -> " + dst);
      }
      g.insert_edge(src, dst, count, weight);
    }
    for (const auto& p : doc.at("positions")) {
      const auto tool = p.at("tool").get<std::string>();
      const auto mean = p.at("mean").get<double>();
      const auto count = p.at("count").get<std::uint64_t>();
      if (!g.nodes_.contains(tool)) throw FormatError("position for unknown tool " + tool);
      if (!(mean >= 0.0 && mean <= 1.0) || count == 0) {
        throw FormatError("invalid position statistics for " + tool);
      }
      if (!g.positions_.emplace(tool, PositionStats{mean, count}).second) {
        throw FormatError("duplicate position entry for " + tool);
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed graph payload: ") + e.what());
  }

  for (const auto& [src, row] : g.out_) {
    double sum = 0.0;
    for (const auto& [dst, e] : row) sum += e.weight;
    if (std::abs(sum - 1.0) > kLoadRowTolerance) {
      throw IntegrityError("outgoing weights of " + src + " sum to " + std::to_string(sum));
    }
  }
  return g;
}

SkillGraph SkillGraph::load(const std::string& path) {
  auto in = open_input(path);
  return read(in);
}

}  // namespace skillgraph
