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

#include "skillgraph/pairwise_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>

#include <nlohmann/json.hpp>

#include "skillgraph/error.hpp"
#include "skillgraph/io.hpp"
#include "skillgraph/random.hpp"

namespace skillgraph {

using json = nlohmann::json;

double sigmoid(double z) {
  if (z < 0.0) return 1.0 - sigmoid(-z);
  return 1.0 / (1.0 + std::exp(-z));
}

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

DenseLayer make_layer(std::size_t in, std::size_t out) {
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.weights.assign(in * out, 0.0);
  l.biases.assign(out, 0.0);
  return l;
}

constexpr std::size_t kH1 = PairwiseModel::kDims[1];
constexpr std::size_t kH2 = PairwiseModel::kDims[2];

// Activations of one forward pass, kept for backprop.
struct Trace {
  std::array<double, kFeatureCount> x{};
  std::array<double, kH1> pre1{};
  std::array<double, kH1> h1{};
  std::array<double, kH2> pre2{};
  std::array<double, kH2> h2{};
  double out = 0.0;
};

void forward(const std::array<DenseLayer, 3>& L, const FeatureVector& x, Trace& t) {
  t.x = x;
  for (std::size_t o = 0; o < kH1; ++o) {
    double s = L[0].biases[o];
    const double* row = &L[0].weights[o * kFeatureCount];
    for (std::size_t i = 0; i < kFeatureCount; ++i) s += row[i] * x[i];
    t.pre1[o] = s;
    t.h1[o] = s > 0.0 ? s : 0.0;
  }
  for (std::size_t o = 0; o < kH2; ++o) {
    double s = L[1].biases[o];
    const double* row = &L[1].weights[o * kH1];
    for (std::size_t i = 0; i < kH1; ++i) s += row[i] * t.h1[i];
    t.pre2[o] = s;
    t.h2[o] = s > 0.0 ? s : 0.0;
  }
  double s = L[2].biases[0];
  for (std::size_t i = 0; i < kH2; ++i) s += L[2].weights[i] * t.h2[i];
  t.out = s;
}

// Accumulates upstream * d(out)/d(params) into g.
void backward(const std::array<DenseLayer, 3>& L, const Trace& t, double upstream,
              std::array<DenseLayer, 3>& g) {
  std::array<double, kH2> d2{};
  for (std::size_t i = 0; i < kH2; ++i) {
    g[2].weights[i] += upstream * t.h2[i];
    d2[i] = t.pre2[i] > 0.0 ? upstream * L[2].weights[i] : 0.0;
  }
  g[2].biases[0] += upstream;

  std::array<double, kH1> d1{};
  for (std::size_t o = 0; o < kH2; ++o) {
    if (d2[o] == 0.0) continue;
    g[1].biases[o] += d2[o];
    double* grow = &g[1].weights[o * kH1];
    const double* wrow = &L[1].weights[o * kH1];
    for (std::size_t i = 0; i < kH1; ++i) {
      grow[i] += d2[o] * t.h1[i];
      d1[i] += d2[o] * wrow[i];
    }
  }
  for (std::size_t o = 0; o < kH1; ++o) {
    if (t.pre1[o] <= 0.0 || d1[o] == 0.0) continue;
    g[0].biases[o] += d1[o];
    double* grow = &g[0].weights[o * kFeatureCount];
    for (std::size_t i = 0; i < kFeatureCount; ++i) grow[i] += d1[o] * t.x[i];
  }
}

FeatureVector negate(const FeatureVector& x) {
  FeatureVector n;
  for (std::size_t i = 0; i < kFeatureCount; ++i) n[i] = -x[i];
  return n;
}

}  // namespace

PairwiseModel PairwiseModel::initialize(std::uint64_t seed) {
  PairwiseModel m;
  m.seed_ = seed;
  Rng rng(seed);
  for (std::size_t l = 0; l < 3; ++l) {
    m.layers_[l] = make_layer(kDims[l], kDims[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(kDims[l] + kDims[l + 1]));
    for (auto& w : m.layers_[l].weights) w = rng.uniform(-limit, limit);
  }
  return m;
}

double PairwiseModel::raw(const FeatureVector& x) const {
  Trace t;
  forward(layers_, x, t);
  return t.out;
}

double PairwiseModel::logit(const FeatureVector& diff) const {
  return 0.5 * (raw(diff) - raw(negate(diff)));
}

double PairwiseModel::predict(const FeatureVector& fa, const FeatureVector& fb) const {
  FeatureVector diff;
  for (std::size_t i = 0; i < kFeatureCount; ++i) diff[i] = fa[i] - fb[i];
  return sigmoid(logit(diff));
}

std::size_t PairwiseModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

ModelGradient::ModelGradient(const PairwiseModel& like) {
  for (std::size_t l = 0; l < 3; ++l) {
    layers[l] = make_layer(like.layers()[l].in, like.layers()[l].out);
  }
}

void ModelGradient::clear() {
  for (auto& l : layers) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
    std::fill(l.biases.begin(), l.biases.end(), 0.0);
  }
}

double batch_loss(const PairwiseModel& model, std::span<const PairExample> batch,
                  ModelGradient* grad) {
  if (grad) grad->clear();
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  Trace pos;
  Trace neg;
  double loss = 0.0;
  for (const auto& ex : batch) {
    forward(model.layers(), ex.diff, pos);
    forward(model.layers(), negate(ex.diff), neg);
    const double z = 0.5 * (pos.out - neg.out);
    loss += softplus(z) - ex.label * z;
    if (grad) {
      const double dz = (sigmoid(z) - ex.label) * scale;
      backward(model.layers(), pos, 0.5 * dz, grad->layers);
      backward(model.layers(), neg, -0.5 * dz, grad->layers);
    }
  }
  return loss * scale;
}

void PairwiseModel::write(std::ostream& out) const {
  json layers = json::array();
  for (const auto& l : layers_) {
    layers.push_back({{"in", l.in}, {"out", l.out}, {"weights", l.weights}, {"biases", l.biases}});
  }
  json doc = {{"format_version", kFormatVersion},
              {"dims", kDims},
              {"seed", seed_},
              {"layers", std::move(layers)}};
  out << doc.dump() << '\n';
}

void PairwiseModel::save(const std::string& path) const {
  auto out = open_output(path);
  write(out);
}

PairwiseModel PairwiseModel::read(std::istream& in) {
  const std::string payload(std::istreambuf_iterator<char>(in), {});
  PairwiseModel m;
  try {
    const auto doc = json::parse(payload);
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw FormatError("unsupported model format_version");
    }
    if (doc.at("dims").get<std::vector<std::size_t>>() !=
        std::vector<std::size_t>(kDims.begin(), kDims.end())) {
      throw FormatError("model dims must be [8, 64, 32, 1]");
    }
    m.seed_ = doc.at("seed").get<std::uint64_t>();
    const auto& layers = doc.at("layers");
    if (!layers.is_array() || layers.size() != 3) {
      throw FormatError("model must have exactly 3 layers");
    }
    for (std::size_t l = 0; l < 3; ++l) {
      auto& dst = m.layers_[l];
      dst = make_layer(kDims[l], kDims[l + 1]);
      auto weights = layers[l].at("weights").get<std::vector<double>>();
      auto biases = layers[l].at("biases").get<std::vector<double>>();
      if (weights.size() != dst.weights.size() || biases.size() != dst.biases.size()) {
        throw FormatError("layer " + std::to_string(l) + " has mismatched parameter counts");
      }
      if (layers[l].value("in", dst.in) != dst.in || layers[l].value("out", dst.out) != dst.out) {
        throw FormatError("layer " + std::to_string(l) + " has mismatched dimensions");
      }
      dst.weights = std::move(weights);
      dst.biases = std::move(biases);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model payload: ") + e.what());
  }
  return m;
}

PairwiseModel PairwiseModel::load(const std::string& path) {
  auto in = open_input(path);
  return read(in);
}

}  // namespace skillgraph
