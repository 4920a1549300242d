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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "oracles.hpp"
#include "skillgraph/community.hpp"
#include "skillgraph/evaluation.hpp"
#include "skillgraph/graph.hpp"
#include "skillgraph/metrics.hpp"
#include "skillgraph/synthetic.hpp"
#include "skillgraph/training.hpp"

namespace sg = skillgraph;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void check(const std::string& name, const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++g_failures;
  std::printf("%s  %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

sg::PairwiseModel random_model(std::uint64_t seed) {
  auto m = sg::PairwiseModel::initialize(seed);
  sg::Rng rng(seed ^ 0xa5a5a5a5ULL);
  for (auto& layer : m.layers()) {
    for (auto& b : layer.biases) b = rng.uniform(-0.5, 0.5);
  }
  return m;
}

sg::FeatureVector random_features(sg::Rng& rng) {
  sg::FeatureVector f;
  for (auto& x : f) x = rng.uniform(-1.0, 1.0);
  return f;
}

Outcome metric_oracle() {
  const auto start = std::chrono::steady_clock::now();
  sg::Rng rng(1);
  const auto alphabet = sg::oracle::letters(14);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto gold = sg::oracle::random_sequence(rng, alphabet, 1 + rng.index(8));
    auto pred = sg::oracle::random_sequence(rng, alphabet, 1 + rng.index(12));
    auto tally = sg::oracle::all_pairs(pred, gold);
    while (tally.common > 8) {
      pred.pop_back();
      tally = sg::oracle::all_pairs(pred, gold);
    }
    const auto s = sg::score_instance(pred, gold);
    if (s.kendall_tau != sg::oracle::tau(tally) || s.ord_prec != sg::oracle::ord_prec(tally)) {
      ++mismatches;
    }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 5.0,
          fmt("1000 instances, %zu mismatches, %.3f s (limit 5 s)", mismatches, secs)};
}

Outcome worked_instance() {
  const auto s = sg::score_instance(std::vector<sg::ToolId>{"A", "C", "B"},
                                    std::vector<sg::ToolId>{"A", "B", "C"});
  const bool ok = s.kendall_tau == 1.0 / 3.0 && s.ord_prec == 2.0 / 3.0 && s.trans_acc == 0.5 &&
                  s.set_f1 == 1.0;
  return {ok, fmt("tau=%.17g ord_prec=%.17g trans_acc=%.17g set_f1=%.17g", s.kendall_tau,
                  s.ord_prec, s.trans_acc, s.set_f1)};
}

Outcome oracle_k_constants() {
  const auto k1 = sg::oracle_k(1);
  const auto k7 = sg::oracle_k(7);
  return {k1 == 3 && k7 == 7, fmt("oracle_k(1)=%zu oracle_k(7)=%zu", k1, k7)};
}

Outcome graph_stochasticity() {
  sg::Rng rng(2);
  double worst = 0.0;
  std::size_t rows = 0;
  for (std::uint64_t c = 0; c < 100; ++c) {
    sg::WorkflowSpec spec;
    spec.domain_count = 1 + rng.index(4);
    spec.tools_per_domain = 3 + rng.index(8);
    spec.chains_per_domain = 1 + rng.index(4);
    spec.min_chain_length = 2;
    spec.max_chain_length = 2 + rng.index(spec.tools_per_domain - 1);
    spec.trajectories_per_chain = 1 + rng.index(20);
    spec.test_trajectories_per_chain = 0;
    spec.query_template_noise = rng.uniform(0.0, 0.5);
    spec.seed = c;
    const auto g = sg::SkillGraph::build(sg::generate(spec).train);
    for (const auto& [src, row] : g.rows()) {
      if (row.empty()) continue;
      double sum = 0.0;
      for (const auto& [dst, e] : row) sum += e.weight;
      worst = std::max(worst, std::abs(sum - 1.0));
      ++rows;
    }
  }
  const auto hand = sg::SkillGraph::build(sg::TrajectoryDataset(
      {{"", {"A", "B", "C"}, 0}, {"", {"A", "B"}, 1}, {"", {"A", "C"}, 2}}));
  const double w = hand.transition_weight("A", "B");
  return {worst <= 1e-9 && w == 2.0 / 3.0,
          fmt("100 corpora, %zu rows, max |row sum - 1| = %.3g (tol 1e-9), w(A,B)=%.17g", rows,
              worst, w)};
}

Outcome antisymmetry() {
  sg::Rng rng(3);
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto m = random_model(i);
    const auto fa = random_features(rng);
    const auto fb = random_features(rng);
    const double dev = std::abs(m.predict(fa, fb) + m.predict(fb, fa) - 1.0);
    worst = std::max(worst, dev);
    if (dev > 2.0 * std::numeric_limits<double>::epsilon()) ++violations;
  }
  return {violations == 0,
          fmt("10000 models x pairs, max |p_ab + p_ba - 1| = %.3g, %zu above 2 ulp", worst,
              violations)};
}

Outcome gradient_check() {
  const auto start = std::chrono::steady_clock::now();
  sg::Rng rng(4);
  double worst = 0.0;
  for (std::uint64_t b = 0; b < 10; ++b) {
    const auto m = random_model(100 + b);
    std::vector<sg::PairExample> batch;
    for (int i = 0; i < 32; ++i) {
      batch.push_back({random_features(rng), rng.bernoulli(0.5) ? 1.0 : 0.0});
    }
    worst = std::max(worst, sg::oracle::gradient_check(m, batch));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-4 && secs < 30.0,
          fmt("10 batches, max relative error %.3g (tol 1e-4, h 1e-5), %.2f s (limit 30 s)",
              worst, secs)};
}

Outcome permutation_oracle() {
  sg::Rng rng(5);
  std::size_t hybrid_bad = 0;
  std::size_t opt_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.index(5);
    const auto alphabet = sg::oracle::letters(k + 2);
    std::vector<sg::Trajectory> trajs;
    for (int i = 0; i < 10; ++i) {
      trajs.push_back({"", sg::oracle::random_sequence(rng, alphabet, 2 + rng.index(3)),
                       trajs.size()});
    }
    const auto g = sg::SkillGraph::build(sg::TrajectoryDataset(trajs));
    sg::CandidateSet c;
    for (std::size_t i = 0; i < k; ++i) {
      c.tools.push_back(alphabet[i]);
      c.semantic_scores[alphabet[i]] = std::round(rng.uniform(0, 1) * 8.0) / 8.0;
    }
    c.k_eval = k;
    const double alpha = rng.uniform(0, 1);
    const auto hr = sg::oracle::brute_force_argmax(c.tools, [&](const auto& s) {
      return sg::hybrid_score(s, g, c.semantic_scores, alpha);
    });
    const auto op = sg::oracle::brute_force_argmax(c.tools, [&](const auto& s) {
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        total += std::log(g.transition_weight(s[i], s[i + 1]) + 1e-6);
      }
      return total;
    });
    if (sg::rerank_hybrid(c, g, alpha) != hr) ++hybrid_bad;
    if (sg::rerank_opt_perm(c, g) != op) ++opt_bad;
  }
  return {hybrid_bad == 0 && opt_bad == 0,
          fmt("200 instances K<=5, hybrid mismatches %zu, opt-perm mismatches %zu", hybrid_bad,
              opt_bad)};
}

// The order-inverting synthetic corpus with a trained model, shared by the
// Stage-2 criteria.
struct Bench {
  sg::SyntheticCorpus corpus;
  sg::SkillGraph graph;
  sg::EmbeddingStore emb;
  sg::QueryEncoder encoder = sg::QueryEncoder::builtin(sg::kDefaultEmbeddingDim);
  sg::PairwiseModel model;
  std::vector<sg::CandidateSet> candidates;
  double setup_seconds = 0.0;

  sg::PipelineContext ctx() const { return {graph, emb, encoder, &model}; }

  sg::MethodRun run(sg::RerankConfig cfg) const {
    return sg::run_method(corpus.test, candidates, ctx(), cfg);
  }

  static const Bench& get() {
    static const Bench b = [] {
      const auto start = std::chrono::steady_clock::now();
      Bench b;
      b.corpus = sg::generate(sg::WorkflowSpec{});
      b.graph = sg::SkillGraph::build(b.corpus.train);
      b.emb = sg::EmbeddingStore::from_descriptions(b.corpus.descriptions,
                                                    sg::kDefaultEmbeddingDim);
      b.model = sg::train_reranker(b.corpus.train, b.graph, b.emb, b.encoder).model;
      b.candidates = sg::retrieve_all(b.corpus.test, b.ctx(), {}, sg::KMode{});
      b.setup_seconds = seconds_since(start);
      return b;
    }();
    return b;
  }
};

double mean_tau(const sg::MethodRun& r) { return r.aggregate.overall[sg::Metric::kKendallTau]; }

Outcome signal_gap() {
  const auto start = std::chrono::steady_clock::now();
  const auto& b = Bench::get();
  std::size_t min_len = SIZE_MAX;
  for (const auto& t : b.corpus.test) min_len = std::min(min_len, t.tools.size());
  const auto sem = b.run({sg::Stage2Method::kSemSort});
  const auto lr = b.run({sg::Stage2Method::kLearned});
  const auto a = lr.scores();
  const auto s = sem.scores();
  const auto boot = sg::bootstrap_compare(a, s, sg::Metric::kKendallTau, 10000, 0);
  const double secs = b.setup_seconds + seconds_since(start);
  const bool ok = b.corpus.test.size() >= 200 && min_len >= 3 && mean_tau(sem) < 0.0 &&
                  mean_tau(lr) > 0.3 && boot.p_value < 0.05 && secs < 300.0;
  return {ok, fmt("%zu test instances, min length %zu, sem-sort tau %.4f, lr tau %.4f, "
                  "bootstrap p %.4g (10000 resamples), %.1f s (limit 300 s)",
                  b.corpus.test.size(), min_len, mean_tau(sem), mean_tau(lr), boot.p_value, secs)};
}

Outcome monotonicity() {
  const auto& b = Bench::get();
  const double sem = mean_tau(b.run({sg::Stage2Method::kSemSort}));
  const double hr = mean_tau(b.run({sg::Stage2Method::kHybrid}));
  const double lr = mean_tau(b.run({sg::Stage2Method::kLearned}));
  return {lr >= hr && hr >= sem, fmt("tau lr %.4f >= hybrid %.4f >= sem-sort %.4f", lr, hr, sem)};
}

Outcome ablation() {
  const auto& b = Bench::get();
  const auto full = b.run({});
  auto arm = [&](const char* group) {
    sg::RerankConfig cfg;
    cfg.ablation = sg::FeatureMask::parse(group);
    return b.run(cfg);
  };
  const auto graph = arm("graph");
  const auto semantic = arm("semantic");
  const auto position = arm("position");
  const double f1 = full.aggregate.overall[sg::Metric::kSetF1];
  bool f1_fixed = true;
  for (const auto* r : {&graph, &semantic, &position}) {
    f1_fixed = f1_fixed && r->aggregate.overall[sg::Metric::kSetF1] == f1;
  }
  const double drop_graph = mean_tau(full) - mean_tau(graph);
  const double drop_sem = mean_tau(full) - mean_tau(semantic);
  return {drop_graph > drop_sem && f1_fixed,
          fmt("tau full %.4f, -graph drop %.4f, -semantic drop %.4f, -position drop %.4f, "
              "set_f1 %.4f %s across arms",
              mean_tau(full), drop_graph, drop_sem, mean_tau(full) - mean_tau(position), f1,
              f1_fixed ? "identical" : "DIFFERS")};
}

Outcome alpha_plateau() {
  const auto& b = Bench::get();
  std::vector<double> taus;
  for (double alpha : {0.0, 0.1, 0.4, 0.7, 1.0}) {
    sg::RerankConfig cfg{sg::Stage2Method::kHybrid};
    cfg.hybrid_alpha = alpha;
    taus.push_back(mean_tau(b.run(cfg)));
  }
  const double lo = *std::min_element(taus.begin() + 1, taus.end());
  const double hi = *std::max_element(taus.begin() + 1, taus.end());
  const double jump = taus[1] - taus[0];
  const bool ok = taus[0] < lo && (hi - lo) < jump;
  return {ok, fmt("tau at alpha {0,0.1,0.4,0.7,1}: %.4f %.4f %.4f %.4f %.4f; 0->0.1 jump %.4f, "
                  "spread over [0.1,1] %.4f",
                  taus[0], taus[1], taus[2], taus[3], taus[4], jump, hi - lo)};
}

Outcome community_recovery() {
  // Two domains of four tools, each one full-length chain.
  sg::WorkflowSpec spec;
  spec.domain_count = 2;
  spec.tools_per_domain = 4;
  spec.chains_per_domain = 1;
  spec.min_chain_length = 4;
  spec.max_chain_length = 4;
  spec.trajectories_per_chain = 50;
  spec.query_template_noise = 0.0;
  spec.test_trajectories_per_chain = 0;
  const auto corpus = sg::generate(spec);
  const auto u = sg::undirected_projection(sg::SkillGraph::build(corpus.train));
  const auto p = sg::louvain(u, 0);
  const double purity = sg::purity(p, corpus.labels).mean;
  const double nmi = sg::nmi(p, corpus.labels);
  const double q = sg::modularity(u, p);
  const double q_oracle = sg::oracle::modularity(u, p);
  const bool ok = purity == 1.0 && std::abs(nmi - 1.0) <= 1e-12 && std::abs(q - q_oracle) <= 1e-12;
  return {ok, fmt("%zu communities, purity %.17g, nmi %.17g, modularity %.15f vs oracle %.15f",
                  p.community_count, purity, nmi, q, q_oracle)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome cli_determinism() {
  const auto root =
      fs::temp_directory_path() / ("skillgraph_acceptance_cli_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::vector<std::string> problems;
  std::size_t compared = 0;

  // Runs the command twice in the same working directory with identical
  // flags. After each run the listed files are read back, then removed so
  // the second run cannot see the first run's output.
  const auto work = root / "work";
  fs::create_directories(work);
  auto twice = [&](const std::string& name,
                   const std::function<std::vector<std::string>(const fs::path&)>& args,
                   const std::vector<std::string>& files) {
    std::vector<std::string> snaps[2];
    for (int r = 0; r < 2; ++r) {
      std::ostringstream out;
      std::ostringstream err;
      if (sg::cli::run(args(work), out, err) != 0) {
        problems.push_back(name + " failed: " + err.str());
        return;
      }
      snaps[r].push_back(out.str());
      for (const auto& f : files) {
        snaps[r].push_back(fs::exists(work / f) ? slurp(work / f) : "<missing>");
        if (r == 0) fs::remove(work / f);
      }
    }
    for (std::size_t i = 0; i < snaps[0].size(); ++i) {
      ++compared;
      if (snaps[0][i] != snaps[1][i] || snaps[0][i] == "<missing>") {
        problems.push_back(name + " " + (i == 0 ? std::string("stdout") : files[i - 1]) +
                           " differs");
      }
    }
  };

  auto in = [](const fs::path& d, const char* f) { return (d / f).string(); };
  twice("generate",
        [&](const fs::path& d) {
          return std::vector<std::string>{"generate", "--out-dir", in(d, "corpus"), "--domains",
                                          "3", "--tools-per-domain", "8", "--noise", "0.05",
                                          "--seed", "7"};
        },
        {"corpus/train.jsonl", "corpus/test.jsonl", "corpus/labels.jsonl",
         "corpus/descriptions.jsonl", "corpus/spec.json"});
  twice("build-graph",
        [&](const fs::path& d) {
          return std::vector<std::string>{"build-graph", "--trajectories",
                                          in(d, "corpus/train.jsonl"), "--out", in(d, "graph.json")};
        },
        {"graph.json"});
  twice("communities",
        [&](const fs::path& d) {
          return std::vector<std::string>{
              "communities", "--graph",        in(d, "graph.json"),
              "--labels",    in(d, "corpus/labels.jsonl"), "--descriptions",
              in(d, "corpus/descriptions.jsonl"), "--out", in(d, "communities.json")};
        },
        {"communities.json"});
  twice("train",
        [&](const fs::path& d) {
          return std::vector<std::string>{
              "train",        "--trajectories", in(d, "corpus/train.jsonl"),
              "--graph",      in(d, "graph.json"), "--descriptions",
              in(d, "corpus/descriptions.jsonl"), "--out", in(d, "model.json"),
              "--max-epochs", "5",  "--batch-size", "256"};
        },
        {"model.json"});
  twice("evaluate",
        [&](const fs::path& d) {
          return std::vector<std::string>{
              "evaluate",      "--test",  in(d, "corpus/test.jsonl"),
              "--graph",       in(d, "graph.json"), "--model",
              in(d, "model.json"), "--descriptions", in(d, "corpus/descriptions.jsonl"),
              "--bootstrap-against", "sem-sort", "--bootstrap-against", "hybrid",
              "--bootstrap-iterations", "1000", "--out", in(d, "eval.json"),
              "--instances-out", in(d, "instances.jsonl")};
        },
        {"eval.json", "instances.jsonl"});
  twice("recommend",
        [&](const fs::path& d) {
          return std::vector<std::string>{
              "recommend", "--query", "topicd1 objd1t2 objd1t5 filler", "--graph",
              in(d, "graph.json"), "--model", in(d, "model.json"), "--descriptions",
              in(d, "corpus/descriptions.jsonl"), "--k", "4"};
        },
        {});
  fs::remove_all(root);
  std::string detail = fmt("6 subcommands, %zu outputs compared", compared);
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  check("metric_oracle_equivalence", metric_oracle);
  check("worked_metric_instance", worked_instance);
  check("oracle_k_constants", oracle_k_constants);
  check("graph_stochasticity", graph_stochasticity);
  check("pairwise_antisymmetry", antisymmetry);
  check("gradient_check", gradient_check);
  check("permutation_oracle", permutation_oracle);
  check("signal_gap", signal_gap);
  check("stage2_monotonicity", monotonicity);
  check("ablation_direction", ablation);
  check("alpha_plateau", alpha_plateau);
  check("community_recovery", community_recovery);
  check("cli_determinism", cli_determinism);
  std::printf("%d of 13 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
