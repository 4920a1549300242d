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

#include "skillgraph/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <thread>

#include "skillgraph/error.hpp"

namespace skillgraph {

using json = nlohmann::json;

namespace {

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Results
// must be written to pre-sized slots so output order never depends on
// scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string_view method_name(Stage2Method m) {
  switch (m) {
    case Stage2Method::kSemSort: return "sem-sort";
    case Stage2Method::kHybrid: return "hybrid";
    case Stage2Method::kOptPerm: return "opt-perm";
    case Stage2Method::kLearned: return "lr";
  }
  return "unknown";
}

Stage2Method parse_method(std::string_view name) {
  for (auto m : {Stage2Method::kSemSort, Stage2Method::kHybrid, Stage2Method::kOptPerm,
                 Stage2Method::kLearned}) {
    if (method_name(m) == name) return m;
  }
  throw InvalidArgument("unknown stage-2 method '" + std::string(name) +
                        "' (expected sem-sort, hybrid, opt-perm or lr)");
}

std::size_t KMode::k_for(std::size_t gold_length) const {
  return fixed == 0 ? oracle_k(gold_length) : fixed;
}

std::string KMode::to_string() const {
  return fixed == 0 ? "oracle" : "fixed:" + std::to_string(fixed);
}

KMode KMode::parse(std::string_view spec) {
  if (spec == "oracle") return {};
  constexpr std::string_view prefix = "fixed:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const auto digits = spec.substr(prefix.size());
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && n >= 1) return KMode{n};
  }
  throw InvalidArgument("k mode must be 'oracle' or 'fixed:<n>' with n >= 1, got '" +
                        std::string(spec) + "'");
}

std::vector<CandidateSet> retrieve_all(const TrajectoryDataset& test, const PipelineContext& ctx,
                                       const RetrievalConfig& retrieval, const KMode& k_mode) {
  retrieval.validate();
  std::vector<CandidateSet> out(test.size());
  parallel_for(test.size(), [&](std::size_t i) {
    const auto q = ctx.encoder.encode(test[i].query);
    out[i] = gs_hybrid_retrieve(q, ctx.graph, ctx.embeddings, k_mode.k_for(test[i].tools.size()),
                                retrieval);
  });
  return out;
}

RankedSequence rerank(const CandidateSet& candidates, const std::string& query,
                      const PipelineContext& ctx, const RerankConfig& cfg) {
  switch (cfg.method) {
    case Stage2Method::kSemSort: return rerank_sem_sort(candidates);
    case Stage2Method::kHybrid: return rerank_hybrid(candidates, ctx.graph, cfg.hybrid_alpha);
    case Stage2Method::kOptPerm: return rerank_opt_perm(candidates, ctx.graph);
    case Stage2Method::kLearned: {
      if (ctx.model == nullptr) throw InvalidArgument("the lr method needs a trained model");
      const auto q = ctx.encoder.encode(query);
      return rerank_lr(*ctx.model, candidates, ctx.graph, ctx.embeddings, q, cfg.ablation);
    }
  }
  throw InvalidArgument("unknown stage-2 method");
}

std::vector<InstanceScore> MethodRun::scores() const {
  std::vector<InstanceScore> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(inst.score);
  return out;
}

MethodRun run_method(const TrajectoryDataset& test, std::span<const CandidateSet> candidates,
                     const PipelineContext& ctx, const RerankConfig& cfg, std::string label) {
  if (candidates.size() != test.size()) {
    throw InvalidArgument("candidate sets and test instances differ in count");
  }
  if (test.empty()) throw EmptyDataset("no test instances to evaluate");
  if (cfg.method == Stage2Method::kLearned && ctx.model == nullptr) {
    throw InvalidArgument("the lr method needs a trained model");
  }
  MethodRun run;
  run.label = label.empty() ? std::string(method_name(cfg.method)) : std::move(label);
  run.config = cfg;
  run.instances.resize(test.size());
  parallel_for(test.size(), [&](std::size_t i) {
    auto& inst = run.instances[i];
    inst.index = i;
    inst.prediction = rerank(candidates[i], test[i].query, ctx, cfg);
    inst.score = score_instance(inst.prediction, test[i].tools);
  });
  const auto scores = run.scores();
  run.aggregate = aggregate(scores);
  return run;
}

json to_json(const MetricMeans& m) {
  json j = {{"count", m.count}};
  for (Metric metric : kAllMetrics) j[std::string(metric_name(metric))] = m[metric];
  return j;
}

json to_json(const AggregateReport& r) {
  json buckets = json::object();
  for (auto b : {LengthBucket::kShort, LengthBucket::kMedium, LengthBucket::kLong}) {
    buckets[std::string(bucket_name(b))] = to_json(r.buckets[static_cast<std::size_t>(b)]);
  }
  return {{"overall", to_json(r.overall)}, {"buckets", std::move(buckets)}};
}

json to_json(const BootstrapResult& b) {
  return {{"observed_difference", b.observed_difference},
          {"p_value", b.p_value},
          {"ci_low", b.ci_low},
          {"ci_high", b.ci_high}};
}

json to_json(const InstanceScore& s) {
  json j = {{"gold_length", s.gold_length}, {"k_eval", s.k_eval}};
  for (Metric metric : kAllMetrics) j[std::string(metric_name(metric))] = metric_value(s, metric);
  return j;
}

}  // namespace skillgraph
