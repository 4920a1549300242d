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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "skillgraph/community.hpp"
#include "skillgraph/embeddings.hpp"
#include "skillgraph/error.hpp"
#include "skillgraph/evaluation.hpp"
#include "skillgraph/graph.hpp"
#include "skillgraph/io.hpp"
#include "skillgraph/pairwise_model.hpp"
#include "skillgraph/synthetic.hpp"
#include "skillgraph/training.hpp"
#include "skillgraph/trajectory.hpp"

namespace skillgraph::cli {

namespace {

using json = nlohmann::json;

// Where tool and query vectors come from. Builtin unless --embeddings is set.
struct EmbeddingOptions {
  std::string descriptions;
  std::string embeddings;
  std::string query_embeddings;
  std::size_t dim = kDefaultEmbeddingDim;

  void add_to(CLI::App* app) {
    app->add_option("--descriptions", descriptions,
                    "Tool descriptions ({id, text} lines) for the builtin encoder");
    app->add_option("--embeddings", embeddings, "Precomputed tool embeddings ({id, vector} lines)");
    app->add_option("--query-embeddings", query_embeddings,
                    "Precomputed query embeddings keyed by query text");
    app->add_option("--dim", dim, "Builtin encoder dimension")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  json to_json() const {
    if (!embeddings.empty()) {
      return {{"encoder", kExternalEncoderTag},
              {"embeddings", embeddings},
              {"query_embeddings", query_embeddings}};
    }
    return {{"encoder", kBuiltinEncoderTag}, {"descriptions", descriptions}, {"dim", dim}};
  }
};

struct Embeddings {
  EmbeddingStore store;
  QueryEncoder encoder;
};

Embeddings resolve_embeddings(const EmbeddingOptions& o) {
  if (!o.embeddings.empty()) {
    if (!o.descriptions.empty()) {
      throw InvalidArgument("--descriptions and --embeddings are mutually exclusive");
    }
    if (o.query_embeddings.empty()) {
      throw InvalidArgument("--embeddings requires --query-embeddings");
    }
    auto store = EmbeddingStore::load(o.embeddings);
    auto queries = EmbeddingStore::load(o.query_embeddings);
    if (queries.dimension() != store.dimension()) {
      throw FormatError("query and tool embeddings differ in dimension");
    }
    return {std::move(store), QueryEncoder::external(std::move(queries))};
  }
  if (!o.query_embeddings.empty()) {
    throw InvalidArgument("--query-embeddings requires --embeddings");
  }
  if (o.descriptions.empty()) {
    throw InvalidArgument("one of --descriptions or --embeddings is required");
  }
  return {EmbeddingStore::from_descriptions(load_descriptions(o.descriptions), o.dim),
          QueryEncoder::builtin(o.dim)};
}

struct RetrievalOptions {
  RetrievalConfig cfg;

  void add_to(CLI::App* app) {
    app->add_option("--pool-multiplier", cfg.pool_multiplier, "Semantic pool multiplier c")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--alpha-s1", cfg.alpha, "Stage-1 transition weight")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--gamma", cfg.gamma, "Stage-1 position bonus weight")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--max-bridges", cfg.max_bridges, "Bridge tools inserted at most")
        ->capture_default_str();
    app->add_option("--bridge-path-limit", cfg.bridge_path_limit, "Longest bridge path in edges")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  json to_json() const {
    return {{"pool_multiplier", cfg.pool_multiplier},
            {"alpha_s1", cfg.alpha},
            {"gamma", cfg.gamma},
            {"max_bridges", cfg.max_bridges},
            {"bridge_path_limit", cfg.bridge_path_limit}};
  }
};

void write_json(const json& doc, const std::string& path) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("IoError", "failed writing '" + path + "'");
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::string out_dir;
  WorkflowSpec spec;
  bool no_invert = false;
};

int cmd_generate(const GenerateOptions& o, std::ostream& out) {
  WorkflowSpec spec = o.spec;
  spec.invert_order = !o.no_invert;
  std::filesystem::create_directories(o.out_dir);
  const auto corpus = generate(spec);
  write_corpus(corpus, o.out_dir);

  json chains = json::array();
  for (const auto& domain : corpus.spec.dependency_chains) chains.push_back(domain);
  const json spec_doc = {{"domain_count", spec.domain_count},
                         {"tools_per_domain", spec.tools_per_domain},
                         {"chains_per_domain", spec.chains_per_domain},
                         {"min_chain_length", spec.min_chain_length},
                         {"max_chain_length", spec.max_chain_length},
                         {"query_template_noise", spec.query_template_noise},
                         {"semantic_jitter", spec.semantic_jitter},
                         {"invert_order", spec.invert_order},
                         {"trajectories_per_chain", spec.trajectories_per_chain},
                         {"test_trajectories_per_chain", spec.test_trajectories_per_chain},
                         {"seed", spec.seed},
                         {"dependency_chains", std::move(chains)}};
  write_json(spec_doc, o.out_dir + "/spec.json");

  // Every emitted file must load back.
  load_trajectories(o.out_dir + "/train.jsonl");
  if (!corpus.test.empty()) load_trajectories(o.out_dir + "/test.jsonl");
  load_labels(o.out_dir + "/labels.jsonl");
  load_descriptions(o.out_dir + "/descriptions.jsonl");

  out << "train " << corpus.train.size() << " trajectories, test " << corpus.test.size()
      << " trajectories, " << corpus.labels.size() << " tools\n";
  return kExitOk;
}

// ------------------------------------------------------------- build-graph

struct BuildGraphOptions {
  std::string trajectories;
  std::string out;
};

int cmd_build_graph(const BuildGraphOptions& o, std::ostream& out) {
  const auto parsed = load_trajectories(o.trajectories);
  const auto g = SkillGraph::build(parsed.dataset);
  g.save(o.out);
  if (!(SkillGraph::load(o.out) == g)) throw IntegrityError("graph did not round-trip");
  out << "nodes " << g.node_count() << " edges " << g.edge_count();
  if (parsed.skipped_empty > 0) out << " skipped_empty " << parsed.skipped_empty;
  out << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- communities

struct CommunitiesOptions {
  std::string graph;
  std::string labels;
  std::string out;
  std::uint64_t seed = 0;
  EmbeddingOptions emb;
};

int cmd_communities(const CommunitiesOptions& o, std::ostream& out) {
  const auto g = SkillGraph::load(o.graph);
  const auto labels = load_labels(o.labels);
  const auto ug = undirected_projection(g);
  const auto partition = louvain(ug, o.seed);
  const auto report = community_report(ug, partition, labels);

  json assignment = json::object();
  for (const auto& [tool, c] : partition.assignment) assignment[tool] = c;
  json doc = {{"config",
               {{"graph", o.graph}, {"labels", o.labels}, {"seed", o.seed}, {"resolution", 1.0}}},
              {"community_count", report.community_count},
              {"modularity", report.modularity},
              {"mean_purity", report.mean_purity},
              {"nmi", report.nmi},
              {"per_community_purity", report.per_community_purity},
              {"assignment", std::move(assignment)}};
  if (!o.emb.descriptions.empty() || !o.emb.embeddings.empty()) {
    const auto e = resolve_embeddings(o.emb);
    const auto c = complementarity(g, e.store);
    doc["config"]["embeddings"] = o.emb.to_json();
    doc["complementarity"] = {
        {"spearman_rho", c.rho}, {"p_value", c.p_value}, {"pair_count", c.pair_count}};
  }
  write_json(doc, o.out);
  read_json(o.out);
  out << "communities " << report.community_count << " modularity " << report.modularity
      << " mean_purity " << report.mean_purity << " nmi " << report.nmi << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- train

struct TrainOptions {
  std::string trajectories;
  std::string graph;
  std::string out;
  EmbeddingOptions emb;
  TrainingConfig cfg;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
  const auto ds = load_trajectories(o.trajectories).dataset;
  const auto g = SkillGraph::load(o.graph);
  const auto e = resolve_embeddings(o.emb);
  const auto result = train_reranker(ds, g, e.store, e.encoder, o.cfg);
  result.model.save(o.out);
  if (!(PairwiseModel::load(o.out) == result.model)) {
    throw IntegrityError("model did not round-trip");
  }
  out << "pairs train " << result.train_pairs << " validation " << result.validation_pairs
      << '\n';
  for (const auto& s : result.history) {
    out << "epoch " << s.epoch << " train_loss " << s.train_loss << " validation_loss "
        << s.validation_loss << '\n';
  }
  out << "best_epoch " << result.best_epoch << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string test;
  std::string graph;
  std::string model;
  std::string out;
  std::string instances_out;
  std::string method = "lr";
  std::string k_mode = "oracle";
  std::string ablation;
  double hybrid_alpha = kDefaultHybridAlpha;
  std::vector<std::string> bootstrap_against;
  std::size_t bootstrap_iterations = kDefaultBootstrapIterations;
  std::uint64_t seed = 0;
  EmbeddingOptions emb;
  RetrievalOptions retrieval;
};

json instance_json(const Trajectory& t, const CandidateSet& c, const EvaluatedInstance& inst) {
  return {{"index", inst.index},      {"query", t.query},
          {"gold", t.tools},          {"candidates", c.tools},
          {"prediction", inst.prediction}, {"scores", to_json(inst.score)}};
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  const auto method = parse_method(o.method);
  const auto k_mode = KMode::parse(o.k_mode);
  const auto mask = FeatureMask::parse(o.ablation);
  if (mask.any() && method != Stage2Method::kLearned) {
    throw InvalidArgument("--ablation only applies to the lr method");
  }
  std::vector<Stage2Method> baselines;
  for (const auto& b : o.bootstrap_against) baselines.push_back(parse_method(b));
  const bool needs_model =
      method == Stage2Method::kLearned ||
      std::find(baselines.begin(), baselines.end(), Stage2Method::kLearned) != baselines.end();

  const auto test = load_trajectories(o.test).dataset;
  const auto g = SkillGraph::load(o.graph);
  const auto e = resolve_embeddings(o.emb);
  std::optional<PairwiseModel> model;
  if (needs_model) {
    if (o.model.empty()) throw InvalidArgument("the lr method requires --model");
    model = PairwiseModel::load(o.model);
  }
  const PipelineContext ctx{g, e.store, e.encoder, model ? &*model : nullptr};

  const auto candidates = retrieve_all(test, ctx, o.retrieval.cfg, k_mode);
  RerankConfig rc{method, o.hybrid_alpha, mask};
  const auto primary = run_method(test, candidates, ctx, rc);

  json config = {{"test", o.test},
                 {"graph", o.graph},
                 {"model", o.model},
                 {"method", o.method},
                 {"k_mode", k_mode.to_string()},
                 {"ablation", mask.to_string()},
                 {"hybrid_alpha", o.hybrid_alpha},
                 {"bootstrap_against", o.bootstrap_against},
                 {"bootstrap_iterations", o.bootstrap_iterations},
                 {"seed", o.seed},
                 {"embeddings", o.emb.to_json()},
                 {"retrieval", o.retrieval.to_json()}};
  json methods = json::object();
  methods[primary.label] = to_json(primary.aggregate);
  json bootstrap = json::array();
  const auto primary_scores = primary.scores();
  for (const auto b : baselines) {
    const auto run = run_method(test, candidates, ctx, RerankConfig{b, o.hybrid_alpha, {}});
    methods[run.label] = to_json(run.aggregate);
    const auto base_scores = run.scores();
    for (Metric m : kAllMetrics) {
      json row = to_json(
          bootstrap_compare(primary_scores, base_scores, m, o.bootstrap_iterations, o.seed));
      row["metric"] = metric_name(m);
      row["method"] = primary.label;
      row["baseline"] = run.label;
      bootstrap.push_back(std::move(row));
    }
  }
  const json doc = {{"config", std::move(config)},
                    {"instance_count", test.size()},
                    {"methods", std::move(methods)},
                    {"bootstrap", std::move(bootstrap)}};
  write_json(doc, o.out);
  read_json(o.out);

  if (!o.instances_out.empty()) {
    auto f = open_output(o.instances_out);
    for (std::size_t i = 0; i < test.size(); ++i) {
      f << instance_json(test[i], candidates[i], primary.instances[i]).dump() << '\n';
    }
  }

  const auto& m = primary.aggregate.overall;
  out << primary.label << " instances " << m.count << " kendall_tau " << m[Metric::kKendallTau]
      << " set_f1 " << m[Metric::kSetF1] << " ord_prec " << m[Metric::kOrdPrec] << " trans_acc "
      << m[Metric::kTransAcc] << " first_acc " << m[Metric::kFirstAcc] << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- recommend

struct RecommendOptions {
  std::string query;
  std::string graph;
  std::string model;
  std::string method = "lr";
  std::size_t k = 0;
  double hybrid_alpha = kDefaultHybridAlpha;
  EmbeddingOptions emb;
  RetrievalOptions retrieval;
};

int cmd_recommend(const RecommendOptions& o, std::ostream& out) {
  const auto method = parse_method(o.method);
  const auto g = SkillGraph::load(o.graph);
  const auto e = resolve_embeddings(o.emb);
  std::optional<PairwiseModel> model;
  if (method == Stage2Method::kLearned) {
    if (o.model.empty()) throw InvalidArgument("the lr method requires --model");
    model = PairwiseModel::load(o.model);
  }
  const PipelineContext ctx{g, e.store, e.encoder, model ? &*model : nullptr};
  const auto q = e.encoder.encode(o.query);
  const auto candidates = gs_hybrid_retrieve(q, g, e.store, o.k, o.retrieval.cfg);
  for (const auto& t : rerank(candidates, o.query, ctx, {method, o.hybrid_alpha, {}})) {
    out << t << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mine tool-transition graphs from agent trajectories and recommend ordered tool "
               "sequences.",
               "skillgraph"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic workflow corpus");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--domains", gen.spec.domain_count)->capture_default_str();
  gen_cmd->add_option("--tools-per-domain", gen.spec.tools_per_domain)->capture_default_str();
  gen_cmd->add_option("--chains-per-domain", gen.spec.chains_per_domain)->capture_default_str();
  gen_cmd->add_option("--min-chain-length", gen.spec.min_chain_length)->capture_default_str();
  gen_cmd->add_option("--max-chain-length", gen.spec.max_chain_length)->capture_default_str();
  gen_cmd->add_option("--trajectories-per-chain", gen.spec.trajectories_per_chain)
      ->capture_default_str();
  gen_cmd->add_option("--test-trajectories-per-chain", gen.spec.test_trajectories_per_chain)
      ->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.query_template_noise,
                      "Probability of one adjacent swap per training trajectory")
      ->capture_default_str();
  gen_cmd->add_option("--semantic-jitter", gen.spec.semantic_jitter)->capture_default_str();
  gen_cmd->add_flag("--no-invert", gen.no_invert,
                    "Do not correlate description overlap with chain position");
  gen_cmd->add_option("--seed", gen.spec.seed)->capture_default_str();

  BuildGraphOptions bg;
  auto* bg_cmd = app.add_subcommand("build-graph", "Build a SkillGraph from trajectories");
  bg_cmd->add_option("--trajectories", bg.trajectories, "Trajectory file")->required();
  bg_cmd->add_option("--out", bg.out, "Graph output file")->required();

  CommunitiesOptions co;
  auto* co_cmd = app.add_subcommand("communities", "Louvain communities and label agreement");
  co_cmd->add_option("--graph", co.graph)->required();
  co_cmd->add_option("--labels", co.labels, "Category labels ({tool, category} lines)")
      ->required();
  co_cmd->add_option("--out", co.out, "Report output file")->required();
  co_cmd->add_option("--seed", co.seed, "Louvain visiting-order seed")->capture_default_str();
  co.emb.add_to(co_cmd);

  TrainOptions tr;
  auto* tr_cmd = app.add_subcommand("train", "Train the pairwise reranker");
  tr_cmd->add_option("--trajectories", tr.trajectories)->required();
  tr_cmd->add_option("--graph", tr.graph)->required();
  tr_cmd->add_option("--out", tr.out, "Model output file")->required();
  tr_cmd->add_option("--learning-rate", tr.cfg.learning_rate)->capture_default_str();
  tr_cmd->add_option("--batch-size", tr.cfg.batch_size)->capture_default_str();
  tr_cmd->add_option("--max-epochs", tr.cfg.max_epochs)->capture_default_str();
  tr_cmd->add_option("--patience", tr.cfg.patience)->capture_default_str();
  tr_cmd->add_option("--validation-fraction", tr.cfg.validation_fraction)->capture_default_str();
  tr_cmd->add_option("--seed", tr.cfg.seed)->capture_default_str();
  tr.emb.add_to(tr_cmd);

  EvaluateOptions ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Score the pipeline on test trajectories");
  ev_cmd->add_option("--test", ev.test)->required();
  ev_cmd->add_option("--graph", ev.graph)->required();
  ev_cmd->add_option("--model", ev.model);
  ev_cmd->add_option("--out", ev.out, "Report output file")->required();
  ev_cmd->add_option("--instances-out", ev.instances_out, "Optional per-instance score lines");
  ev_cmd->add_option("--method", ev.method, "sem-sort | hybrid | opt-perm | lr")
      ->capture_default_str();
  ev_cmd->add_option("--k-mode", ev.k_mode, "oracle | fixed:<n>")->capture_default_str();
  ev_cmd->add_option("--ablation", ev.ablation,
                     "Feature groups zeroed at inference: semantic,graph,position");
  ev_cmd->add_option("--hybrid-alpha", ev.hybrid_alpha)
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  ev_cmd->add_option("--bootstrap-against", ev.bootstrap_against,
                     "Baseline methods for paired bootstrap tests");
  ev_cmd->add_option("--bootstrap-iterations", ev.bootstrap_iterations)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ev_cmd->add_option("--seed", ev.seed, "Bootstrap seed")->capture_default_str();
  ev.emb.add_to(ev_cmd);
  ev.retrieval.add_to(ev_cmd);

  RecommendOptions rc;
  auto* rc_cmd = app.add_subcommand("recommend", "Print an ordered tool list for one query");
  rc_cmd->add_option("--query", rc.query)->required();
  rc_cmd->add_option("--graph", rc.graph)->required();
  rc_cmd->add_option("--model", rc.model);
  rc_cmd->add_option("--method", rc.method)->capture_default_str();
  rc_cmd->add_option("--k", rc.k, "Number of tools")->required()->check(CLI::PositiveNumber);
  rc_cmd->add_option("--hybrid-alpha", rc.hybrid_alpha)
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  rc.emb.add_to(rc_cmd);
  rc.retrieval.add_to(rc_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (gen_cmd->parsed()) return cmd_generate(gen, out);
    if (bg_cmd->parsed()) return cmd_build_graph(bg, out);
    if (co_cmd->parsed()) return cmd_communities(co, out);
    if (tr_cmd->parsed()) return cmd_train(tr, out);
    if (ev_cmd->parsed()) return cmd_evaluate(ev, out);
    if (rc_cmd->parsed()) return cmd_recommend(rc, out);
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: IoError: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace skillgraph::cli
