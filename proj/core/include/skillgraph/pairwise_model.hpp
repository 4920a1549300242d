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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skillgraph/features.hpp"

namespace skillgraph {

/// Numerically stable logistic function with sigmoid(-z) == 1 - sigmoid(z)
/// holding exactly in floating point.
double sigmoid(double z);

/// Fully connected layer, weights stored row-major as [out][in].
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  double& w(std::size_t o, std::size_t i) { return weights[o * in + i]; }
  double w(std::size_t o, std::size_t i) const { return weights[o * in + i]; }
  bool operator==(const DenseLayer&) const = default;
};

/// Pairwise preference model: an 8 -> 64 -> 32 -> 1 ReLU network `raw`
/// applied to the feature difference x = f_a - f_b, antisymmetrized as
///   logit(x) = (raw(x) - raw(-x)) / 2,   p_ab = sigmoid(logit(x)).
/// Since logit(-x) = -logit(x) exactly, p_ab + p_ba = 1 for every pair.
class PairwiseModel {
 public:
  static constexpr std::array<std::size_t, 4> kDims{kFeatureCount, 64, 32, 1};
  static constexpr int kFormatVersion = 1;

  /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static PairwiseModel initialize(std::uint64_t seed);

  double raw(const FeatureVector& x) const;
  double logit(const FeatureVector& diff) const;
  /// Probability that the tool with features `fa` runs before `fb`.
  double predict(const FeatureVector& fa, const FeatureVector& fb) const;

  std::array<DenseLayer, 3>& layers() noexcept { return layers_; }
  const std::array<DenseLayer, 3>& layers() const noexcept { return layers_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t parameter_count() const;

  bool operator==(const PairwiseModel&) const = default;

  /// {"format_version":1,"dims":[8,64,32,1],"seed":..,"layers":[{"weights":
  /// [...],"biases":[...]}, ...]}. Doubles are written in shortest
  /// round-trip form, so a reload is bit-exact.
  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  /// Throws FormatError on malformed payloads or mismatched dimensions.
  static PairwiseModel read(std::istream& in);
  static PairwiseModel load(const std::string& path);

 private:
  std::array<DenseLayer, 3> layers_;
  std::uint64_t seed_ = 0;
};

/// Parameter-shaped gradient buffer.
struct ModelGradient {
  std::array<DenseLayer, 3> layers;

  explicit ModelGradient(const PairwiseModel& like);
  void clear();
};

struct PairExample {
  FeatureVector diff{};  // f_a - f_b
  double label = 0.0;    // 1 when a precedes b
};

/// Mean binary cross-entropy of `batch`; accumulates d(loss)/d(param) into
/// `grad` when non-null (the buffer is cleared first).
double batch_loss(const PairwiseModel& model, std::span<const PairExample> batch,
                  ModelGradient* grad = nullptr);

}  // namespace skillgraph
