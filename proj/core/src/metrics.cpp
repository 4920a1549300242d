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

#include "skillgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "skillgraph/error.hpp"
#include "skillgraph/random.hpp"

namespace skillgraph {

namespace {

std::unordered_map<ToolId, std::size_t> index_of(std::span<const ToolId> seq, const char* what) {
  std::unordered_map<ToolId, std::size_t> idx;
  idx.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!idx.emplace(seq[i], i).second) {
      throw InvalidArgument(std::string(what) + " contains duplicate tool '" + seq[i] + "'");
    }
  }
  return idx;
}

// Inversions in v by merge sort; v is consumed.
std::size_t count_inversions(std::vector<std::size_t>& v, std::vector<std::size_t>& tmp,
                             std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::size_t inv = count_inversions(v, tmp, lo, mid) + count_inversions(v, tmp, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      tmp[k++] = v[i++];
    } else {
      inv += mid - i;
      tmp[k++] = v[j++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

double quantile(std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::size_t oracle_k(std::size_t gold_length) {
  if (gold_length == 0) throw InvalidArgument("gold length must be >= 1");
  return std::max<std::size_t>(gold_length, 3);
}

PairCounts count_pairs(std::span<const ToolId> pred, std::span<const ToolId> gold) {
  const auto gold_idx = index_of(gold, "gold");
  index_of(pred, "prediction");
  // Gold positions of common tools, listed in prediction order.
  std::vector<std::size_t> ranks;
  for (const auto& t : pred) {
    auto it = gold_idx.find(t);
    if (it != gold_idx.end()) ranks.push_back(it->second);
  }
  PairCounts pc;
  pc.common = ranks.size();
  if (pc.common < 2) return pc;
  std::vector<std::size_t> tmp(ranks.size());
  pc.discordant = count_inversions(ranks, tmp, 0, ranks.size());
  pc.concordant = pc.common * (pc.common - 1) / 2 - pc.discordant;
  return pc;
}

InstanceScore score_instance(std::span<const ToolId> pred, std::span<const ToolId> gold) {
  if (gold.empty()) throw InvalidArgument("gold sequence must be non-empty");
  const auto pred_idx = index_of(pred, "prediction");
  const auto gold_idx = index_of(gold, "gold");

  InstanceScore s;
  s.gold_length = gold.size();
  s.k_eval = pred.size();

  std::size_t hits = 0;
  for (const auto& t : pred) hits += gold_idx.count(t);
  s.set_precision = pred.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(pred.size());
  s.set_recall = static_cast<double>(hits) / static_cast<double>(gold.size());
  const double denom = s.set_precision + s.set_recall;
  s.set_f1 = denom > 0.0 ? 2.0 * s.set_precision * s.set_recall / denom : 0.0;

  const PairCounts pc = count_pairs(pred, gold);
  if (pc.common >= 2) {
    const double total = static_cast<double>(pc.common * (pc.common - 1) / 2);
    s.ord_prec = static_cast<double>(pc.concordant) / total;
    s.kendall_tau = (static_cast<double>(pc.concordant) - static_cast<double>(pc.discordant)) / total;
  }

  if (gold.size() >= 2) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i + 1 < gold.size(); ++i) {
      auto a = pred_idx.find(gold[i]);
      auto b = pred_idx.find(gold[i + 1]);
      if (a == pred_idx.end() || b == pred_idx.end()) continue;
      if (b->second > a->second && b->second - a->second <= 2) ++ok;
    }
    s.trans_acc = static_cast<double>(ok) / static_cast<double>(gold.size() - 1);
  }

  s.first_acc = (!pred.empty() && pred.front() == gold.front()) ? 1.0 : 0.0;
  return s;
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kSetPrecision: return "set_precision";
    case Metric::kSetRecall: return "set_recall";
    case Metric::kSetF1: return "set_f1";
    case Metric::kOrdPrec: return "ord_prec";
    case Metric::kKendallTau: return "kendall_tau";
    case Metric::kTransAcc: return "trans_acc";
    case Metric::kFirstAcc: return "first_acc";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

double metric_value(const InstanceScore& s, Metric m) {
  switch (m) {
    case Metric::kSetPrecision: return s.set_precision;
    case Metric::kSetRecall: return s.set_recall;
    case Metric::kSetF1: return s.set_f1;
    case Metric::kOrdPrec: return s.ord_prec;
    case Metric::kKendallTau: return s.kendall_tau;
    case Metric::kTransAcc: return s.trans_acc;
    case Metric::kFirstAcc: return s.first_acc;
  }
  return 0.0;
}

BootstrapResult bootstrap_from_resamples(std::span<const InstanceScore> a,
                                         std::span<const InstanceScore> b, Metric metric,
                                         std::span<const std::vector<std::size_t>> resamples) {
  if (a.size() != b.size()) throw InvalidArgument("bootstrap inputs must have equal length");
  if (a.size() < 2) throw InvalidArgument("bootstrap needs at least 2 paired instances");
  if (resamples.empty()) throw InvalidArgument("bootstrap needs at least 1 resample");
  const std::size_t n = a.size();
  std::vector<double> va(n);
  std::vector<double> diff(n);
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    va[i] = metric_value(a[i], metric);
    diff[i] = va[i] - metric_value(b[i], metric);
    observed += diff[i];
  }

  std::size_t le = 0;
  std::size_t ge = 0;
  std::vector<double> means_a;
  means_a.reserve(resamples.size());
  for (const auto& idx : resamples) {
    double sd = 0.0;
    double sa = 0.0;
    for (std::size_t i : idx) {
      sd += diff[i];
      sa += va[i];
    }
    const double m = static_cast<double>(idx.size());
    const double d = sd / m;
    if (d <= 0.0) ++le;
    if (d >= 0.0) ++ge;
    means_a.push_back(sa / m);
  }
  const double r = static_cast<double>(resamples.size());
  BootstrapResult out;
  out.observed_difference = observed / static_cast<double>(n);
  out.p_value = std::min(1.0, 2.0 * std::min(static_cast<double>(le) / r, static_cast<double>(ge) / r));
  std::sort(means_a.begin(), means_a.end());
  out.ci_low = quantile(means_a, 0.025);
  out.ci_high = quantile(means_a, 0.975);
  return out;
}

BootstrapResult bootstrap_compare(std::span<const InstanceScore> a,
                                  std::span<const InstanceScore> b, Metric metric,
                                  std::size_t iterations, std::uint64_t seed) {
  if (a.size() != b.size()) throw InvalidArgument("bootstrap inputs must have equal length");
  if (a.size() < 2) throw InvalidArgument("bootstrap needs at least 2 paired instances");
  if (iterations == 0) throw InvalidArgument("bootstrap iterations must be >= 1");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> resamples(iterations, std::vector<std::size_t>(a.size()));
  for (auto& idx : resamples) {
    for (auto& i : idx) i = rng.index(a.size());
  }
  return bootstrap_from_resamples(a, b, metric, resamples);
}

LengthBucket length_bucket(std::size_t gold_length) {
  if (gold_length <= 2) return LengthBucket::kShort;
  if (gold_length <= 4) return LengthBucket::kMedium;
  return LengthBucket::kLong;
}

std::string_view bucket_name(LengthBucket b) {
  switch (b) {
    case LengthBucket::kShort: return "1-2";
    case LengthBucket::kMedium: return "3-4";
    case LengthBucket::kLong: return "5+";
  }
  return "unknown";
}

AggregateReport aggregate(std::span<const InstanceScore> scores) {
  if (scores.empty()) throw InvalidArgument("cannot aggregate an empty score list");
  AggregateReport r;
  auto add = [](MetricMeans& mm, const InstanceScore& s) {
    ++mm.count;
    for (std::size_t i = 0; i < kAllMetrics.size(); ++i) mm.means[i] += metric_value(s, kAllMetrics[i]);
  };
  for (const auto& s : scores) {
    add(r.overall, s);
    add(r.buckets[static_cast<std::size_t>(length_bucket(s.gold_length))], s);
  }
  auto finish = [](MetricMeans& mm) {
    if (mm.count == 0) return;
    for (auto& v : mm.means) v /= static_cast<double>(mm.count);
  };
  finish(r.overall);
  for (auto& b : r.buckets) finish(b);
  return r;
}

}  // namespace skillgraph
