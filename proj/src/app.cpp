#include "bimod/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <omp.h>

#include <CLI11.hpp>

#include "bimod/classify.hpp"
#include "bimod/corpus.hpp"
#include "bimod/error.hpp"
#include "bimod/porter.hpp"
#include "bimod/report.hpp"

namespace bimod {

namespace fs = std::filesystem;

LambdaSweep LambdaSweep::parse(const std::string& spec) {
  LambdaSweep s;
  std::istringstream in(spec);
  char c1 = 0, c2 = 0;
  if (!(in >> s.start >> c1 >> s.stop >> c2 >> s.step) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw UsageError("--sweep expects start:stop:step, got '" + spec + "'");
  }
  s.validate();
  return s;
}

void LambdaSweep::validate() const {
  if (!(start <= stop)) throw UsageError("sweep start must not exceed stop");
  if (!(step > 0.0)) throw UsageError("sweep step must be positive");
  if (!(start > 0.0)) throw UsageError("sweep values must be positive");
}

std::vector<double> LambdaSweep::values() const {
  std::vector<double> out;
  // Index-based so that e.g. 1:3:0.5 yields exactly 1, 1.5, ..., 3.
  for (std::size_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + 1e-9 * std::max(1.0, std::abs(stop))) break;
    out.push_back(v);
  }
  return out;
}

nlohmann::json RunConfig::to_json() const {
  const auto path_or_null = [](const std::optional<fs::path>& p) -> nlohmann::json {
    return p ? nlohmann::json(p->string()) : nlohmann::json(nullptr);
  };
  nlohmann::json j = {
      {"corpus", path_or_null(corpus)},
      {"train", path_or_null(train)},
      {"test", path_or_null(test)},
      {"seeds", path_or_null(seeds)},
      {"stoplist", stoplist ? nlohmann::json(*stoplist) : nlohmann::json("smart")},
      {"stem", stem},
      {"min_df", min_df},
      {"bigrams", bigrams},
      {"lambda", lambda},
      {"lambda_file", path_or_null(lambda_file)},
      {"n_clusters", n_clusters ? nlohmann::json(*n_clusters) : nlohmann::json(nullptr)},
      {"schedule", schedule == Schedule::kLouvain ? "louvain" : "interleaved"},
      {"seed", seed},
      {"final_pass", final_pass},
      {"out", out.string()},
  };
  if (sweep) {
    j["sweep"] = {{"start", sweep->start}, {"stop", sweep->stop}, {"step", sweep->step}};
  } else {
    j["sweep"] = nullptr;
  }
  return j;
}

namespace {

std::string format_lambda(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

PipelineConfig pipeline_of(const RunConfig& cfg) {
  PipelineConfig p;
  if (!cfg.stoplist) {
    p.stoplist = default_stoplist();
  } else if (*cfg.stoplist != "none") {
    p.stoplist = load_stoplist(*cfg.stoplist);
  }
  p.stem = cfg.stem;
  p.min_doc_frequency = cfg.min_df;
  p.use_bigrams = cfg.bigrams;
  p.validate();
  return p;
}

DescentConfig descent_of(const RunConfig& cfg, double lambda) {
  DescentConfig d;
  d.lambda = lambda;
  d.schedule = cfg.schedule;
  d.seed = cfg.seed;
  d.validate();
  return d;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

struct Prepared {
  Corpus corpus;
  PipelineConfig pipeline;
  BipartiteGraph graph;
};

Prepared prepare(Corpus raw, const RunConfig& cfg) {
  for (const auto& w : raw.warnings) warn(w);
  Prepared p;
  p.pipeline = pipeline_of(cfg);
  p.corpus = preprocess(raw, p.pipeline);
  for (const auto& id : p.corpus.emptied) warn("document " + id + " has no features after preprocessing");
  p.graph = build_graph(p.corpus, p.pipeline);
  p.graph.check();
  return p;
}

Corpus load_for_clustering(const RunConfig& cfg) {
  if (cfg.corpus) {
    if (cfg.train || cfg.test) throw UsageError("use either --corpus or --train/--test, not both");
    return load_corpus(*cfg.corpus, Split::kUnlabeled);
  }
  if (!cfg.train) throw UsageError("a corpus is required (--corpus, or --train with optional --test)");
  Corpus c = load_corpus(*cfg.train, Split::kTrain);
  if (cfg.test) c = merge_corpora(std::move(c), load_corpus(*cfg.test, Split::kTest));
  return c;
}

void write_outputs_common(const Prepared& p, const RunConfig& cfg, const std::string& command) {
  fs::create_directories(cfg.out);
  write_graph_tsv(p.graph, cfg.out / "graph.tsv");
  write_json(graph_summary(p.graph, p.corpus, p.pipeline), cfg.out / "graph.json");
  const nlohmann::json config = cfg.to_json();
  write_json({{"tool", "bimod"},
              {"version", BIMOD_VERSION},
              {"command", command},
              {"config", config},
              {"config_hash", fnv1a_hex(config.dump())},
              {"pipeline", to_json(p.pipeline)},
              {"seed", cfg.seed}},
             cfg.out / "manifest.json");
}

struct PointResult {
  double lambda = 0.0;
  std::size_t n_clusters = 0;
  ModularityValue q;
  std::optional<ClusterQuality> quality;
  std::optional<std::size_t> projected_clusters;
  std::optional<ClusterQuality> projected_quality;
};

PointResult run_point(const Prepared& p, const RunConfig& cfg, double lambda, const fs::path& dir) {
  const DescentConfig dcfg = descent_of(cfg, lambda);
  const ClusterResult r = cluster(p.graph, dcfg);
  PointResult out;
  out.lambda = lambda;
  out.n_clusters = r.partition.n_clusters();
  out.q = r.modularity;
  out.quality = cluster_quality(p.graph, p.corpus, r.partition);

  nlohmann::json report = {
      {"lambda", lambda},
      {"n_clusters", out.n_clusters},
      {"rounds", r.rounds},
      {"modularity", to_json(r.modularity)},
      {"partition", partition_summary(p.graph, r.partition, r.modularity, lambda)},
  };
  if (out.quality) {
    report["nmi"] = out.quality->nmi;
    report["purity"] = out.quality->purity;
    report["contingency"] = to_json(*out.quality)["contingency"];
  }
  fs::create_directories(dir);
  write_partition_tsv(p.graph, r.partition, dir / "partition.tsv");

  if (cfg.n_clusters) {
    if (*cfg.n_clusters >= r.partition.n_clusters()) {
      warn("clustering at lambda " + format_lambda(lambda) + " has " +
           std::to_string(r.partition.n_clusters()) + " clusters; projection to " +
           std::to_string(*cfg.n_clusters) + " skipped");
      report["projection"] = nullptr;
    } else {
      const Partition fin = finalize(p.graph, r.partition, *cfg.n_clusters, dcfg);
      const ModularityValue fq = q_bipartite(p.graph, fin, lambda);
      out.projected_clusters = fin.n_clusters();
      out.projected_quality = cluster_quality(p.graph, p.corpus, fin);
      nlohmann::json proj = {
          {"n_clusters", fin.n_clusters()},
          {"requested", *cfg.n_clusters},
          {"modularity", to_json(fq)},
          {"partition", partition_summary(p.graph, fin, fq, lambda)},
      };
      if (out.projected_quality) {
        proj["nmi"] = out.projected_quality->nmi;
        proj["purity"] = out.projected_quality->purity;
        proj["contingency"] = to_json(*out.projected_quality)["contingency"];
      }
      report["projection"] = proj;
      write_partition_tsv(p.graph, fin, dir / "projection.tsv");
    }
  }
  write_json(report, dir / "report.json");
  return out;
}

void print_point(const PointResult& r) {
  std::cout << "lambda " << format_lambda(r.lambda) << ": " << r.n_clusters << " clusters, Q = " << r.q.total;
  if (r.quality) std::cout << ", NMI = " << r.quality->nmi << ", purity = " << r.quality->purity;
  if (r.projected_clusters) {
    std::cout << "; projected to " << *r.projected_clusters;
    if (r.projected_quality) {
      std::cout << ": NMI = " << r.projected_quality->nmi << ", purity = " << r.projected_quality->purity;
    }
  }
  std::cout << '\n';
}

double read_lambda_file(const fs::path& path) {
  std::ifstream in(path);
  double x = 0.0;
  if (!in || !(in >> x)) throw DataError("cannot read a lambda value from " + path.string());
  return x;
}

}  // namespace

int cmd_cluster(const RunConfig& cfg) {
  const Prepared p = prepare(load_for_clustering(cfg), cfg);
  write_outputs_common(p, cfg, "cluster");
  const PointResult r = run_point(p, cfg, cfg.lambda, cfg.out);
  print_point(r);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw UsageError("sweep needs --sweep start:stop:step");
  cfg.sweep->validate();
  const auto lambdas = cfg.sweep->values();
  const Prepared p = prepare(load_for_clustering(cfg), cfg);
  write_outputs_common(p, cfg, "sweep");

  std::vector<PointResult> rows(lambdas.size());
  std::vector<std::exception_ptr> errors(lambdas.size());
  const int threads = cfg.threads > 0 ? static_cast<int>(cfg.threads) : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(lambdas.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const double lambda = lambdas[static_cast<std::size_t>(i)];
      rows[static_cast<std::size_t>(i)] = run_point(p, cfg, lambda, cfg.out / ("lambda_" + format_lambda(lambda)));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].quality && (!best || rows[i].quality->nmi > rows[*best].quality->nmi)) best = i;
  }
  std::ofstream tsv(cfg.out / "sweep.tsv", std::ios::binary);
  if (!tsv) throw DataError("cannot write " + (cfg.out / "sweep.tsv").string());
  tsv << "lambda\tn_clusters\tQ\tNMI\tPurity";
  if (cfg.n_clusters) tsv << "\tproj_n_clusters\tproj_NMI\tproj_Purity";
  tsv << "\tbest\n";
  tsv.precision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    tsv << format_lambda(r.lambda) << '\t' << r.n_clusters << '\t' << r.q.total << '\t';
    if (r.quality) {
      tsv << r.quality->nmi << '\t' << r.quality->purity;
    } else {
      tsv << "NA\tNA";
    }
    if (cfg.n_clusters) {
      if (r.projected_clusters) {
        tsv << '\t' << *r.projected_clusters << '\t';
        if (r.projected_quality) {
          tsv << r.projected_quality->nmi << '\t' << r.projected_quality->purity;
        } else {
          tsv << "NA\tNA";
        }
      } else {
        tsv << "\tNA\tNA\tNA";
      }
    }
    tsv << '\t' << (best && *best == i ? "*" : "") << '\n';
    print_point(r);
  }
  if (best) {
    std::ofstream marker(cfg.out / "best_lambda.txt", std::ios::binary);
    marker << format_lambda(rows[*best].lambda) << '\n';
    std::cout << "best lambda by NMI: " << format_lambda(rows[*best].lambda) << '\n';
  }
  return kExitOk;
}

int cmd_classify(const RunConfig& cfg) {
  if (!cfg.train || !cfg.test) throw UsageError("classify needs --train and --test");
  double lambda = cfg.lambda;
  if (cfg.lambda_file) lambda = read_lambda_file(*cfg.lambda_file);

  std::error_code ec;
  const bool self = fs::equivalent(*cfg.train, *cfg.test, ec);
  Corpus raw = load_corpus(*cfg.train, Split::kTrain);
  if (!self) raw = merge_corpora(std::move(raw), load_corpus(*cfg.test, Split::kTest));
  const Prepared p = prepare(std::move(raw), cfg);
  RunConfig used = cfg;
  used.lambda = lambda;
  write_outputs_common(p, used, "classify");

  TrainingAssignment train;
  std::map<std::string, std::uint32_t> class_index;
  for (const auto& d : p.corpus.documents) {
    if (d.split == Split::kTrain && d.gold_label) class_index.emplace(*d.gold_label, 0);
  }
  for (auto& [name, idx] : class_index) {
    idx = static_cast<std::uint32_t>(train.class_names.size());
    train.class_names.push_back(name);
  }
  std::unordered_map<std::string, VertexId> doc_vertex;
  std::vector<VertexId> test_docs;
  for (VertexId d = 0; d < p.corpus.documents.size(); ++d) {
    const auto& doc = p.corpus.documents[d];
    doc_vertex.emplace(doc.doc_id, d);
    if (doc.split == Split::kTrain && doc.gold_label) train.seeds.emplace_back(d, class_index.at(*doc.gold_label));
    if (self || doc.split == Split::kTest) test_docs.push_back(d);
  }

  if (cfg.seeds) {
    std::ifstream in(*cfg.seeds);
    if (!in) throw DataError("cannot open seeds file " + cfg.seeds->string());
    std::unordered_map<std::string, VertexId> feature_vertex;
    for (VertexId v = static_cast<VertexId>(p.graph.n_docs()); v < p.graph.n_vertices(); ++v) {
      feature_vertex.emplace(p.graph.label(v), v);
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw DataError(cfg.seeds->string() + ":" + std::to_string(line_no) + ": expected id<TAB>class");
      }
      const std::string id = line.substr(0, tab);
      std::string cls = line.substr(tab + 1);
      if (!cls.empty() && cls.back() == '\r') cls.pop_back();
      const auto ci = class_index.find(cls);
      if (ci == class_index.end()) {
        throw DataError(cfg.seeds->string() + ":" + std::to_string(line_no) + ": unknown class '" + cls + "'");
      }
      if (id.rfind("word:", 0) == 0) {
        const std::string term = id.substr(5);
        auto it = feature_vertex.find(term);
        if (it == feature_vertex.end() && p.pipeline.stem) it = feature_vertex.find(porter_stem(term));
        if (it == feature_vertex.end()) {
          warn("seed word '" + term + "' is not a feature of the graph; ignored");
          continue;
        }
        train.seeds.emplace_back(it->second, ci->second);
      } else {
        const auto it = doc_vertex.find(id);
        if (it == doc_vertex.end()) {
          throw DataError(cfg.seeds->string() + ":" + std::to_string(line_no) + ": unknown document '" + id + "'");
        }
        train.seeds.emplace_back(it->second, ci->second);
      }
    }
  }

  const DescentConfig dcfg = descent_of(cfg, lambda);
  ClassifyOptions options;
  options.final_vertex_pass = cfg.final_pass;
  const Classification result = classify(p.graph, train, dcfg, options);

  std::vector<std::string> classes = train.class_names;
  std::vector<std::string> predicted, gold;
  std::ofstream tsv;
  fs::create_directories(cfg.out);
  tsv.open(cfg.out / "predictions.tsv", std::ios::binary);
  if (!tsv) throw DataError("cannot write predictions");
  for (VertexId d : test_docs) {
    const auto& doc = p.corpus.documents[d];
    const std::string& pred = train.class_names[result.vertex_class[d]];
    tsv << doc.doc_id << '\t' << pred << '\t' << doc.gold_label.value_or("") << '\n';
    if (doc.gold_label) {
      predicted.push_back(pred);
      gold.push_back(*doc.gold_label);
      if (!class_index.contains(*doc.gold_label) &&
          std::find(classes.begin(), classes.end(), *doc.gold_label) == classes.end()) {
        warn("test class '" + *doc.gold_label + "' has no training documents; its F1 is 0");
        classes.push_back(*doc.gold_label);
      }
    }
  }

  nlohmann::json report = {
      {"lambda", lambda},
      {"n_classes", train.n_classes()},
      {"n_clusters", result.partition.n_clusters()},
      {"test_documents", test_docs.size()},
  };
  std::vector<std::string> isolated_docs;
  for (VertexId v : result.isolated) {
    if (p.graph.is_doc(v)) isolated_docs.push_back(p.graph.label(v));
  }
  report["isolated_documents"] = isolated_docs;
  if (!predicted.empty()) {
    const ClassScores scores = f1_scores(predicted, gold, classes);
    const auto sj = to_json(scores);
    for (auto it = sj.begin(); it != sj.end(); ++it) report[it.key()] = it.value();
    const auto enc_pred = encode_labels(predicted);
    const auto enc_gold = encode_labels(gold);
    report["nmi"] = nmi(enc_pred, enc_gold);
    report["purity"] = purity(enc_pred, enc_gold);
    std::cout << "micro-F1 = " << scores.micro_f1 << ", macro-F1 = " << scores.macro_f1 << " over "
              << scores.documents << " test documents\n";
  } else {
    report["micro_f1"] = nullptr;
    report["macro_f1"] = nullptr;
    std::cout << "no gold labels on test documents; predictions written\n";
  }
  write_json(report, cfg.out / "report.json");
  return kExitOk;
}

namespace {

bool parse_on_off(const std::string& flag, const std::string& value) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw UsageError(flag + " expects on|off, got '" + value + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Document clustering and classification by bipartite modularity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(BIMOD_VERSION));

  RunConfig cfg;
  std::string bigrams = "off", stem = "on", schedule = "interleaved", sweep;
  std::string stoplist;
  std::size_t clusters = 0;
  std::string corpus, train, test, seeds, out = "bimod_out", lambda_file;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--corpus", corpus, "Single labeled-lines corpus file");
    sub->add_option("--train", train, "Training corpus file");
    sub->add_option("--test", test, "Test corpus file");
    sub->add_option("--lambda", cfg.lambda, "Modularity resolution parameter (> 0)");
    sub->add_option("--clusters", clusters, "Project the result onto this many clusters");
    sub->add_option("--bigrams", bigrams, "Add bigram features: on|off");
    sub->add_option("--stem", stem, "Porter stemming: on|off");
    sub->add_option("--stoplist", stoplist, "Stoplist file, or 'none' (default: SMART)");
    sub->add_option("--min-df", cfg.min_df, "Drop features in fewer documents than this");
    sub->add_option("--schedule", schedule, "louvain|interleaved");
    sub->add_option("--seed", cfg.seed, "Sweep-order shuffle seed (0 = natural order)");
    sub->add_option("--out", out, "Output directory");
  };
  CLI::App* c_cluster = app.add_subcommand("cluster", "Cluster a corpus at one lambda");
  add_common(c_cluster);
  CLI::App* c_sweep = app.add_subcommand("sweep", "Cluster over a range of lambda values");
  add_common(c_sweep);
  c_sweep->add_option("--sweep", sweep, "start:stop:step")->required();
  CLI::App* c_classify = app.add_subcommand("classify", "Attribute test documents to training classes");
  add_common(c_classify);
  c_classify->add_option("--lambda-file", lambda_file, "Read lambda from a sweep's best_lambda.txt");
  c_classify->add_option("--seeds", seeds, "Extra training rows: doc_id or word:<term>, TAB, class");
  c_classify->add_flag("--final-pass", cfg.final_pass, "Extra vertex-level descent after redistribution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!corpus.empty()) cfg.corpus = corpus;
    if (!train.empty()) cfg.train = train;
    if (!test.empty()) cfg.test = test;
    if (!seeds.empty()) cfg.seeds = seeds;
    if (!lambda_file.empty()) cfg.lambda_file = lambda_file;
    if (!stoplist.empty()) cfg.stoplist = stoplist;
    if (clusters > 0) cfg.n_clusters = clusters;
    cfg.out = out;
    cfg.bigrams = parse_on_off("--bigrams", bigrams);
    cfg.stem = parse_on_off("--stem", stem);
    if (schedule == "louvain") {
      cfg.schedule = Schedule::kLouvain;
    } else if (schedule == "interleaved") {
      cfg.schedule = Schedule::kInterleaved;
    } else {
      throw UsageError("--schedule expects louvain|interleaved, got '" + schedule + "'");
    }
    if (const char* env = std::getenv("BIMOD_THREADS")) {
      const long n = std::strtol(env, nullptr, 10);
      if (n > 0) cfg.threads = static_cast<unsigned>(n);
    }
    if (c_sweep->parsed()) cfg.sweep = LambdaSweep::parse(sweep);
    descent_of(cfg, cfg.lambda);
    if (cfg.min_df < 1) throw UsageError("--min-df must be at least 1");

    if (c_cluster->parsed()) return cmd_cluster(cfg);
    if (c_sweep->parsed()) return cmd_sweep(cfg);
    return cmd_classify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace bimod
