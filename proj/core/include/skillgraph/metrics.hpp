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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillgraph/trajectory.hpp"

namespace skillgraph {

/// Prediction budget under the oracle-length protocol: max(L*, 3).
std::size_t oracle_k(std::size_t gold_length);

struct InstanceScore {
  double set_precision = 0.0;
  double set_recall = 0.0;
  double set_f1 = 0.0;
  double ord_prec = 0.0;
  double kendall_tau = 0.0;
  double trans_acc = 0.0;
  double first_acc = 0.0;
  std::size_t gold_length = 0;
  std::size_t k_eval = 0;

  bool operator==(const InstanceScore&) const = default;
};

/// Scores one ranked prediction against the gold sequence. Throws
/// InvalidArgument on an empty gold list or duplicates in either list.
InstanceScore score_instance(std::span<const ToolId> pred, std::span<const ToolId> gold);

/// Concordant and discordant pair counts over the tools common to both
/// sequences, in O(C log C).
struct PairCounts {
  std::size_t common = 0;
  std::size_t concordant = 0;
  std::size_t discordant = 0;
};
PairCounts count_pairs(std::span<const ToolId> pred, std::span<const ToolId> gold);

enum class Metric {
  kSetPrecision,
  kSetRecall,
  kSetF1,
  kOrdPrec,
  kKendallTau,
  kTransAcc,
  kFirstAcc,
};

inline constexpr std::array<Metric, 7> kAllMetrics = {
    Metric::kSetPrecision, Metric::kSetRecall, Metric::kSetF1,  Metric::kOrdPrec,
    Metric::kKendallTau,   Metric::kTransAcc,  Metric::kFirstAcc};

std::string_view metric_name(Metric m);
/// Inverse of metric_name; throws InvalidArgument for unknown names.
Metric parse_metric(std::string_view name);
double metric_value(const InstanceScore& s, Metric m);

struct BootstrapResult {
  double observed_difference = 0.0;  // mean(a) - mean(b)
  double p_value = 1.0;
  double ci_low = 0.0;   // 95% percentile interval of mean(a)
  double ci_high = 0.0;
};

inline constexpr std::size_t kDefaultBootstrapIterations = 10000;

/// Paired bootstrap over instance indices. The two-sided p-value is
/// min(1, 2 * min(P(d* <= 0), P(d* >= 0))) over resampled mean differences.
BootstrapResult bootstrap_compare(std::span<const InstanceScore> a,
                                  std::span<const InstanceScore> b, Metric metric,
                                  std::size_t iterations = kDefaultBootstrapIterations,
                                  std::uint64_t seed = 0);

/// Same statistic computed from an explicit list of resample index vectors.
/// Used to validate the sampler against full enumeration at tiny n.
BootstrapResult bootstrap_from_resamples(std::span<const InstanceScore> a,
                                         std::span<const InstanceScore> b, Metric metric,
                                         std::span<const std::vector<std::size_t>> resamples);

struct MetricMeans {
  std::size_t count = 0;
  std::array<double, kAllMetrics.size()> means{};

  double operator[](Metric m) const { return means[static_cast<std::size_t>(m)]; }
};

enum class LengthBucket { kShort, kMedium, kLong };  // 1-2, 3-4, 5+

LengthBucket length_bucket(std::size_t gold_length);
std::string_view bucket_name(LengthBucket b);

struct AggregateReport {
  MetricMeans overall;
  std::array<MetricMeans, 3> buckets{};
};

/// Macro means overall and per length bucket. Throws InvalidArgument on an
/// empty list.
AggregateReport aggregate(std::span<const InstanceScore> scores);

}  // namespace skillgraph
