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
#include <map>
#include <string>
#include <vector>

#include "skillgraph/community.hpp"
#include "skillgraph/trajectory.hpp"

namespace skillgraph {

// Synthetic workflow corpora with planted dependency chains.
//
// Every domain owns `tools_per_domain` tools with a latent tier order
// (tool i runs before tool j when i < j). Chains are ordered subsets that
// respect the tiers. Queries mention the domain topic word and one object
// word per chain tool, in random order, so bag-of-words similarity finds the
// right tools but says nothing about their order. With `invert_order` the
// descriptions repeat the topic word more for later tiers, which pushes the
// similarity of dependent tools above their prerequisites.

struct WorkflowSpec {
  std::size_t domain_count = 6;
  std::size_t tools_per_domain = 12;
  /// Used only when `dependency_chains` is empty.
  std::size_t chains_per_domain = 8;
  std::size_t min_chain_length = 3;
  std::size_t max_chain_length = 5;
  /// Explicit chains, one list per domain. Filled by make_chains when empty.
  std::vector<std::vector<std::vector<ToolId>>> dependency_chains;
  /// Fraction of each chain's training trajectories, rounded down, that swap
  /// one random adjacent pair. The swapped trajectories are drawn at random.
  double query_template_noise = 0.0;
  /// Probability that a query repeats a tool's object word, which raises
  /// that tool's similarity for the one query.
  double semantic_jitter = 0.3;
  bool invert_order = true;
  std::size_t trajectories_per_chain = 40;
  std::size_t test_trajectories_per_chain = 5;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when the spec is inconsistent.
  void validate() const;
};

/// Tool id of the `index`-th tool (tier order) of domain `domain`.
ToolId synthetic_tool_id(std::size_t domain, std::size_t index);
std::string synthetic_domain_name(std::size_t domain);

/// Draws `chains_per_domain` distinct tier-ordered chains per domain. When a
/// domain cannot supply that many distinct chains, all of its distinct
/// chains are used. With one chain per domain and max length equal to
/// tools_per_domain the chain is the whole domain.
std::vector<std::vector<std::vector<ToolId>>> make_chains(const WorkflowSpec& spec);

struct SyntheticCorpus {
  TrajectoryDataset train;
  TrajectoryDataset test;
  CategoryLabels labels;                            // tool -> domain name
  std::map<std::string, std::string> descriptions;  // tool -> text
  WorkflowSpec spec;                                // with chains resolved
};

SyntheticCorpus generate(const WorkflowSpec& spec);

/// Writes train.jsonl, test.jsonl, labels.jsonl and descriptions.jsonl into
/// `dir`, which must already exist.
void write_corpus(const SyntheticCorpus& corpus, const std::string& dir);

}  // namespace skillgraph
