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

#include "skillgraph/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <span>
#include <string_view>

#include "skillgraph/embeddings.hpp"
#include "skillgraph/error.hpp"
#include "skillgraph/io.hpp"
#include "skillgraph/random.hpp"

namespace skillgraph {

namespace {

// Object words dominate descriptions so any chain tool outranks every
// non-chain tool of the same domain.
constexpr std::size_t kObjectRepeat = 16;
constexpr std::size_t kFillerWords = 2;
constexpr std::array<std::string_view, 8> kFiller = {"please", "run",  "then", "data",
                                                     "report", "need", "help", "task"};

constexpr std::uint64_t kChainStream = 0x5bd1e995c0ffee01ULL;
constexpr std::uint64_t kCorpusStream = 0x27d4eb2f165667c5ULL;

std::string object_word(std::size_t domain, std::size_t index) {
  return "objd" + std::to_string(domain) + "t" + std::to_string(index);
}

std::string topic_word(std::size_t domain) { return "topicd" + std::to_string(domain); }

// (domain, tier) of a synthetic tool id; throws for foreign ids.
std::pair<std::size_t, std::size_t> locate(const WorkflowSpec& spec, const ToolId& id) {
  for (std::size_t d = 0; d < spec.domain_count; ++d) {
    for (std::size_t i = 0; i < spec.tools_per_domain; ++i) {
      if (synthetic_tool_id(d, i) == id) return {d, i};
    }
  }
  throw InvalidArgument("chain tool '" + id + "' is not a synthetic tool of this spec");
}

std::string repeat(const std::string& word, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

std::string make_query(const WorkflowSpec& spec, std::size_t domain,
                       const std::vector<std::size_t>& tiers, Rng& rng) {
  std::vector<std::string> words{topic_word(domain)};
  for (std::size_t t : tiers) {
    words.push_back(object_word(domain, t));
    if (rng.bernoulli(spec.semantic_jitter)) words.push_back(object_word(domain, t));
  }
  for (std::size_t i = 0; i < kFillerWords; ++i) {
    words.emplace_back(kFiller[rng.index(kFiller.size())]);
  }
  rng.shuffle(std::span(words));
  std::string q;
  for (const auto& w : words) {
    if (!q.empty()) q += ' ';
    q += w;
  }
  return q;
}

}  // namespace

ToolId synthetic_tool_id(std::size_t domain, std::size_t index) {
  return make_tool_id(synthetic_domain_name(domain), "op" + std::to_string(index));
}

std::string synthetic_domain_name(std::size_t domain) { return "domain" + std::to_string(domain); }

void WorkflowSpec::validate() const {
  if (domain_count < 1) throw InvalidArgument("domain_count must be >= 1");
  if (tools_per_domain < 1) throw InvalidArgument("tools_per_domain must be >= 1");
  if (!(query_template_noise >= 0.0 && query_template_noise <= 1.0)) {
    throw InvalidArgument("query_template_noise must lie in [0, 1]");
  }
  if (!(semantic_jitter >= 0.0 && semantic_jitter <= 1.0)) {
    throw InvalidArgument("semantic_jitter must lie in [0, 1]");
  }
  if (trajectories_per_chain < 1) throw InvalidArgument("trajectories_per_chain must be >= 1");
  if (dependency_chains.empty()) {
    if (chains_per_domain < 1) throw InvalidArgument("chains_per_domain must be >= 1");
    if (min_chain_length < 1 || min_chain_length > max_chain_length ||
        max_chain_length > tools_per_domain) {
      throw InvalidArgument("chain lengths must satisfy 1 <= min <= max <= tools_per_domain");
    }
    return;
  }
  if (dependency_chains.size() != domain_count) {
    throw InvalidArgument("dependency_chains must have one entry per domain");
  }
  for (std::size_t d = 0; d < domain_count; ++d) {
    if (dependency_chains[d].empty()) {
      throw InvalidArgument("domain " + std::to_string(d) + " has no chains");
    }
    for (const auto& chain : dependency_chains[d]) {
      if (chain.empty()) throw InvalidArgument("chains must be non-empty");
      std::set<ToolId> seen;
      for (const auto& t : chain) {
        if (locate(*this, t).first != d) {
          throw InvalidArgument("chain tool '" + t + "' belongs to another domain");
        }
        if (!seen.insert(t).second) throw InvalidArgument("chain repeats tool '" + t + "'");
      }
    }
  }
}

std::vector<std::vector<std::vector<ToolId>>> make_chains(const WorkflowSpec& spec) {
  spec.validate();
  Rng rng(spec.seed ^ kChainStream);
  std::vector<std::vector<std::vector<ToolId>>> out(spec.domain_count);
  const std::size_t span_len = spec.max_chain_length - spec.min_chain_length + 1;
  const std::size_t attempts = 1000 * spec.chains_per_domain;
  std::vector<std::size_t> idx(spec.tools_per_domain);
  for (std::size_t d = 0; d < spec.domain_count; ++d) {
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t a = 0; a < attempts && out[d].size() < spec.chains_per_domain; ++a) {
      const std::size_t len = spec.min_chain_length + rng.index(span_len);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      rng.shuffle(std::span(idx));
      std::vector<std::size_t> tiers(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(len));
      std::sort(tiers.begin(), tiers.end());
      if (!seen.insert(tiers).second) continue;
      std::vector<ToolId> chain;
      for (std::size_t t : tiers) chain.push_back(synthetic_tool_id(d, t));
      out[d].push_back(std::move(chain));
    }
  }
  return out;
}

SyntheticCorpus generate(const WorkflowSpec& spec_in) {
  spec_in.validate();
  SyntheticCorpus corpus;
  corpus.spec = spec_in;
  WorkflowSpec& spec = corpus.spec;
  if (spec.dependency_chains.empty()) spec.dependency_chains = make_chains(spec);

  for (std::size_t d = 0; d < spec.domain_count; ++d) {
    for (std::size_t i = 0; i < spec.tools_per_domain; ++i) {
      const ToolId id = synthetic_tool_id(d, i);
      corpus.labels[id] = synthetic_domain_name(d);
      const std::size_t topic_repeat = spec.invert_order ? i + 1 : 1;
      corpus.descriptions[id] =
          repeat(object_word(d, i), kObjectRepeat) + ' ' + repeat(topic_word(d), topic_repeat);
    }
  }

  Rng rng(spec.seed ^ kCorpusStream);
  std::vector<Trajectory> train;
  std::vector<Trajectory> test;
  for (std::size_t d = 0; d < spec.domain_count; ++d) {
    for (const auto& chain : spec.dependency_chains[d]) {
      std::vector<std::size_t> tiers;
      for (const auto& t : chain) tiers.push_back(locate(spec, t).second);
      // Exactly floor(noise * n) trajectories of the chain get one swap.
      std::vector<char> noisy(spec.trajectories_per_chain, 0);
      const auto swaps = static_cast<std::size_t>(
          std::floor(spec.query_template_noise * static_cast<double>(noisy.size())));
      if (chain.size() >= 2 && swaps > 0) {
        std::fill_n(noisy.begin(), swaps, 1);
        rng.shuffle(std::span(noisy));
      }
      for (std::size_t r = 0; r < spec.trajectories_per_chain; ++r) {
        Trajectory tr{make_query(spec, d, tiers, rng), chain, train.size()};
        if (noisy[r]) {
          const std::size_t at = rng.index(chain.size() - 1);
          std::swap(tr.tools[at], tr.tools[at + 1]);
        }
        train.push_back(std::move(tr));
      }
      for (std::size_t r = 0; r < spec.test_trajectories_per_chain; ++r) {
        test.push_back({make_query(spec, d, tiers, rng), chain, test.size()});
      }
    }
  }
  corpus.train = TrajectoryDataset(std::move(train));
  corpus.test = TrajectoryDataset(std::move(test));
  return corpus;
}

void write_corpus(const SyntheticCorpus& corpus, const std::string& dir) {
  save_trajectories(corpus.train, dir + "/train.jsonl");
  if (!corpus.test.empty()) save_trajectories(corpus.test, dir + "/test.jsonl");
  {
    auto out = open_output(dir + "/labels.jsonl");
    write_labels(corpus.labels, out);
  }
  auto out = open_output(dir + "/descriptions.jsonl");
  write_descriptions(corpus.descriptions, out);
}

}  // namespace skillgraph
