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

#include "skillgraph/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "skillgraph/error.hpp"
#include "skillgraph/io.hpp"

namespace skillgraph {

using json = nlohmann::json;

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

// Returns false for a zero vector.
bool normalize(std::span<float> v) {
  double ss = 0.0;
  for (float x : v) ss += static_cast<double>(x) * x;
  if (ss == 0.0 || !std::isfinite(ss)) return false;
  const double inv = 1.0 / std::sqrt(ss);
  for (float& x : v) x = static_cast<float>(x * inv);
  return true;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      cur.push_back(lower(c));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::uint64_t token_hash(std::string_view token) {
  std::uint64_t h = 14695981039346656037ULL;
  for (char ch : token) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

Embedding builtin_encode(std::string_view text, std::size_t dim) {
  if (dim == 0) throw InvalidArgument("embedding dimension must be >= 1");
  std::map<std::string, std::size_t> tf;
  for (auto& tok : tokenize(text)) ++tf[std::move(tok)];

  std::vector<double> acc(dim, 0.0);
  for (const auto& [tok, n] : tf) {
    const auto h = token_hash(tok);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    acc[h % dim] += sign * std::log1p(static_cast<double>(n));
  }
  Embedding v(dim);
  std::transform(acc.begin(), acc.end(), v.begin(), [](double x) { return static_cast<float>(x); });
  if (!normalize(v)) {
    log_warning("text '" + std::string(text) + "' has no usable tokens; using the zero-guard vector");
    std::fill(v.begin(), v.end(), 0.0f);
    v[0] = 1.0f;
  }
  return v;
}

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

void sort_by_score(std::vector<ScoredTool>& items) {
  std::sort(items.begin(), items.end(), [](const ScoredTool& x, const ScoredTool& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.tool < y.tool;
  });
}

EmbeddingStore::EmbeddingStore(std::size_t dim, std::string encoder_tag)
    : dim_(dim), encoder_tag_(std::move(encoder_tag)) {
  if (dim_ == 0) throw InvalidArgument("embedding dimension must be >= 1");
}

EmbeddingStore EmbeddingStore::from_descriptions(const std::map<ToolId, std::string>& descriptions,
                                                 std::size_t dim) {
  EmbeddingStore store(dim, std::string(kBuiltinEncoderTag));
  for (const auto& [tool, text] : descriptions) {
    store.vectors_.emplace(tool, builtin_encode(text, dim));
  }
  return store;
}

void EmbeddingStore::add(const ToolId& tool, std::span<const float> vector) {
  if (vector.size() != dim_) {
    throw FormatError("embedding for '" + tool + "' has dimension " +
                      std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
  }
  Embedding v(vector.begin(), vector.end());
  if (!normalize(v)) throw FormatError("embedding for '" + tool + "' is zero or non-finite");
  vectors_.insert_or_assign(tool, std::move(v));
}

const Embedding& EmbeddingStore::vector(const ToolId& tool) const {
  auto it = vectors_.find(tool);
  if (it == vectors_.end()) throw MissingEmbedding(tool);
  return it->second;
}

std::set<ToolId> EmbeddingStore::tools() const {
  std::set<ToolId> out;
  for (const auto& [tool, v] : vectors_) out.insert(out.end(), tool);
  return out;
}

double EmbeddingStore::semantic_similarity(std::span<const float> query_vec,
                                           const ToolId& tool) const {
  const auto& v = vector(tool);
  if (query_vec.size() != dim_) {
    throw InvalidArgument("query vector dimension " + std::to_string(query_vec.size()) +
                          " does not match store dimension " + std::to_string(dim_));
  }
  return dot(query_vec, v);
}

std::vector<ScoredTool> EmbeddingStore::top_k(std::span<const float> query_vec, std::size_t k,
                                              const std::set<ToolId>& universe) const {
  if (k == 0) throw InvalidArgument("top_k needs k >= 1");
  std::vector<ScoredTool> scored;
  scored.reserve(universe.size());
  for (const auto& tool : universe) {
    scored.push_back({tool, semantic_similarity(query_vec, tool)});
  }
  const auto cmp = [](const ScoredTool& x, const ScoredTool& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.tool < y.tool;
  };
  const auto n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), cmp);
  scored.resize(n);
  return scored;
}

std::vector<ScoredTool> EmbeddingStore::top_k(std::span<const float> query_vec,
                                              std::size_t k) const {
  return top_k(query_vec, k, tools());
}

void EmbeddingStore::write(std::ostream& out) const {
  for (const auto& [tool, v] : vectors_) {
    json rec = {{"id", tool}, {"vector", v}};
    out << rec.dump() << '\n';
  }
}

void EmbeddingStore::save(const std::string& path) const {
  auto out = open_output(path);
  write(out);
}

EmbeddingStore EmbeddingStore::read(std::istream& in, std::string encoder_tag) {
  std::optional<EmbeddingStore> store;
  std::string line;
  std::size_t line_no = 0;
  std::vector<float> buf;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string id;
    try {
      const auto rec = json::parse(line);
      id = rec.at("id").get<std::string>();
      const auto& vec = rec.at("vector");
      if (!vec.is_array() || vec.empty()) throw FormatError("empty vector");
      buf.clear();
      for (const auto& x : vec) buf.push_back(x.get<float>());
    } catch (const json::exception& e) {
      throw FormatError("embedding line " + std::to_string(line_no) + ": " + e.what());
    }
    if (id.empty()) throw FormatError("embedding line " + std::to_string(line_no) + ": empty id");
    if (!store) store.emplace(buf.size(), encoder_tag);
    if (store->contains(id)) {
      throw FormatError("embedding line " + std::to_string(line_no) + ": duplicate id '" + id + "'");
    }
    store->add(id, buf);
  }
  if (!store) throw FormatError("embedding file has no rows");
  return std::move(*store);
}

EmbeddingStore EmbeddingStore::load(const std::string& path, std::string encoder_tag) {
  auto in = open_input(path);
  return read(in, std::move(encoder_tag));
}

std::map<std::string, std::string> read_descriptions(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = json::parse(line);
      auto id = rec.at("id").get<std::string>();
      auto text = rec.at("text").get<std::string>();
      if (id.empty()) throw ParseError(line_no, "empty id");
      if (!out.emplace(std::move(id), std::move(text)).second) {
        throw ParseError(line_no, "duplicate description id");
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

std::map<std::string, std::string> load_descriptions(const std::string& path) {
  auto in = open_input(path);
  return read_descriptions(in);
}

void write_descriptions(const std::map<std::string, std::string>& descriptions,
                        std::ostream& out) {
  for (const auto& [id, text] : descriptions) {
    json rec = {{"id", id}, {"text", text}};
    out << rec.dump() << '\n';
  }
}

QueryEncoder QueryEncoder::builtin(std::size_t dim) { return QueryEncoder(dim, std::nullopt); }

QueryEncoder QueryEncoder::external(EmbeddingStore queries) {
  const auto dim = queries.dimension();
  return QueryEncoder(dim, std::move(queries));
}

Embedding QueryEncoder::encode(std::string_view query) const {
  if (!table_) return builtin_encode(query, dim_);
  return table_->vector(std::string(query));
}

}  // namespace skillgraph
