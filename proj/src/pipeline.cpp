// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "gcnsum/corpus.hpp"
#include "gcnsum/error.hpp"
#include "gcnsum/graphs.hpp"
#include "gcnsum/model.hpp"
#include "gcnsum/rouge.hpp"
#include "gcnsum/selection.hpp"
#include "gcnsum/synthetic.hpp"
#include "gcnsum/training.hpp"
#include "json.hpp"

namespace gcnsum {

namespace fs = std::filesystem;
using json = nlohmann::json;

// --- RunConfig ----------------------------------------------------------------

namespace {

std::size_t parse_size(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw InvalidArgument("config '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("config '" + key + "': expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidArgument("config '" + key + "': expected a boolean, got '" + v + "'");
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
std::string show(const T& v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

const std::vector<std::pair<std::string, Field>>& fields() {
  using C = RunConfig;
  static const std::vector<std::pair<std::string, Field>> f = [] {
    std::vector<std::pair<std::string, Field>> v;
    auto str = [&v](const char* k, std::string C::*m) {
      v.push_back({k, {[m](C& c, const std::string&, const std::string& x) { c.*m = x; },
                       [m](const C& c) { return c.*m; }}});
    };
    auto size = [&v](const char* k, std::size_t C::*m) {
      v.push_back({k, {[m](C& c, const std::string& key, const std::string& x) { c.*m = parse_size(key, x); },
                       [m](const C& c) { return show(c.*m); }}});
    };
    auto real = [&v](const char* k, double C::*m) {
      v.push_back({k, {[m](C& c, const std::string& key, const std::string& x) { c.*m = parse_real(key, x); },
                       [m](const C& c) { return show(c.*m); }}});
    };
    str("graph-type", &C::graph_type);
    str("corpus", &C::corpus);
    str("validation-corpus", &C::validation_corpus);
    str("graphs-dir", &C::graphs_dir);
    str("embeddings", &C::embeddings);
    str("checkpoint", &C::checkpoint);
    str("personalization", &C::personalization);
    str("summaries-dir", &C::summaries_dir);
    str("out", &C::out);
    str("system", &C::system);
    v.push_back({"seed", {[](C& c, const std::string& key, const std::string& x) {
                            c.seed = parse_size(key, x);
                          },
                          [](const C& c) { return show(c.seed); }}});
    size("limit-words", &C::limit_words);
    size("limit-bytes", &C::limit_bytes);
    real("alpha", &C::alpha);
    real("lr", &C::lr);
    real("max-grad-norm", &C::max_grad_norm);
    size("layers", &C::layers);
    size("hidden-dim", &C::hidden_dim);
    size("embed-dim", &C::embed_dim);
    size("max-iterations", &C::max_iterations);
    size("patience", &C::patience);
    size("validate-every", &C::validate_every);
    real("cosine-threshold", &C::cosine_threshold);
    size("bootstrap", &C::bootstrap);
    size("clusters", &C::synthetic_clusters);
    v.push_back({"verbose", {[](C& c, const std::string& key, const std::string& x) {
                               c.verbose = parse_bool(key, x);
                             },
                             [](const C& c) { return std::string(c.verbose ? "true" : "false"); }}});
    return v;
  }();
  return f;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const auto& [k, f] : fields())
    if (k == key) {
      f.set(*this, key, value);
      return;
    }
  throw InvalidArgument("unknown config key '" + key + "'");
}

void RunConfig::load_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  for (const auto& [k, f] : fields()) os << k << " = " << f.get(*this) << '\n';
  return os.str();
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, f] : fields()) out.push_back(k);
  return out;
}

// --- helpers ----------------------------------------------------------------------

namespace {

void require(const std::string& value, const std::string& flag, const std::string& cmd) {
  if (value.empty()) throw ContractError(cmd + " requires --" + flag);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text, CommandResult& res) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
  res.files.push_back(path.string());
}

void echo_config(const RunConfig& c, const std::string& cmd, CommandResult& res) {
  if (c.out.empty()) return;
  ensure_dir(c.out);
  write_text(fs::path(c.out) / ("resolved_config." + cmd + ".txt"), c.to_text(), res);
}

bool uses_graph(const RunConfig& c) {
  if (c.graph_type == "none") return false;
  parse_graph_type(c.graph_type);
  return true;
}

fs::path graph_path(const RunConfig& c, const std::string& id) {
  return fs::path(c.graphs_dir) / (id + ".json");
}

SentenceGraph load_cluster_graph(const RunConfig& c, const Cluster& cluster) {
  const auto path = graph_path(c, cluster.id());
  if (!fs::exists(path))
    throw ContractError("no graph for cluster '" + cluster.id() + "' in " + c.graphs_dir +
                        " (run build-graph first)");
  SentenceGraph g = load_graph(path);
  if (to_string(g.type()) != c.graph_type)
    throw ContractError("graph " + path.string() + " is of type '" + to_string(g.type()) +
                        "', expected '" + c.graph_type + "'");
  if (g.size() != cluster.size())
    throw DimensionError("graph " + path.string() + " has " + std::to_string(g.size()) +
                         " nodes, cluster has " + std::to_string(cluster.size()) + " sentences");
  return g;
}

SelectionConfig selection_config(const RunConfig& c) {
  SelectionConfig s;
  if (c.limit_bytes > 0) {
    s.limit = {TruncationUnit::Bytes, c.limit_bytes};
  } else {
    s.limit = {TruncationUnit::Words, c.limit_words};
  }
  return s;
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// --- commands --------------------------------------------------------------------

CommandResult cmd_build_graph(const RunConfig& c) {
  CommandResult res;
  if (!uses_graph(c)) {
    res.message = "graph type 'none' runs without a graph; no graph files written\n";
    return res;
  }
  require(c.corpus, "corpus", "build-graph");
  const GraphType type = parse_graph_type(c.graph_type);
  std::optional<PersonalizationModel> pers;
  if (type == GraphType::Pdg) {
    if (c.personalization.empty() || !fs::exists(c.personalization))
      throw ContractError(
          "pdg graphs need a fitted personalization model: run fit-personalization and pass "
          "--personalization");
    pers = PersonalizationModel::load(c.personalization);
  }
  const std::string dir = c.graphs_dir.empty() ? c.out : c.graphs_dir;
  require(dir, "graphs-dir", "build-graph");
  ensure_dir(dir);
  const auto clusters = load_corpus(c.corpus);
  for (const auto& cl : clusters) {
    SentenceGraph g;
    if (type == GraphType::Cosine) {
      g = rescale_max1(build_cosine_graph(cl, c.cosine_threshold));
    } else {
      g = build_graph(cl, type, pers ? &*pers : nullptr);
    }
    save_graph(fs::path(dir) / (cl.id() + ".json"), g);
    res.files.push_back((fs::path(dir) / (cl.id() + ".json")).string());
  }
  echo_config(c, "build-graph", res);
  res.message = "built " + std::to_string(clusters.size()) + " " + c.graph_type + " graphs in " +
                dir + "\n";
  return res;
}

CommandResult cmd_fit_personalization(const RunConfig& c) {
  CommandResult res;
  require(c.corpus, "corpus", "fit-personalization");
  const auto clusters = load_corpus(c.corpus);
  const PersonalizationModel m = fit_personalization(clusters);
  fs::path target = c.personalization;
  if (target.empty()) {
    require(c.out, "out", "fit-personalization");
    ensure_dir(c.out);
    target = fs::path(c.out) / "personalization.json";
  }
  if (target.has_parent_path()) ensure_dir(target.parent_path());
  m.save(target);
  res.files.push_back(target.string());
  echo_config(c, "fit-personalization", res);
  res.message = "fitted personalization on " + std::to_string(m.training_rows) + " sentences" +
                (m.ridge_fallback ? " (rank-deficient design, ridge fallback used)" : "") +
                " -> " + target.string() + "\n";
  return res;
}

namespace {

std::vector<Example> examples_for(const RunConfig& c, const std::vector<Cluster>& clusters,
                                  const Vocabulary& vocab) {
  std::vector<Example> out;
  const bool graph = uses_graph(c);
  for (const auto& cl : clusters) {
    if (graph) {
      const SentenceGraph g = load_cluster_graph(c, cl);
      out.push_back(make_example(cl, vocab, &g, c.alpha));
    } else {
      out.push_back(make_example(cl, vocab, nullptr, c.alpha));
    }
  }
  return out;
}

}  // namespace

CommandResult cmd_train(const RunConfig& c) {
  CommandResult res;
  require(c.corpus, "corpus", "train");
  require(c.validation_corpus, "validation-corpus", "train");
  require(c.out, "out", "train");
  const bool graph = uses_graph(c);
  if (graph) require(c.graphs_dir, "graphs-dir", "train");
  const auto train_clusters = load_corpus(c.corpus);
  const auto val_clusters = load_corpus(c.validation_corpus);
  if (train_clusters.empty() || val_clusters.empty())
    throw ContractError("train: training and validation corpora must be non-empty");

  std::vector<const Cluster*> all;
  for (const auto& cl : train_clusters) all.push_back(&cl);
  for (const auto& cl : val_clusters) all.push_back(&cl);
  const Vocabulary vocab = Vocabulary::from_clusters(all);
  const EmbeddingTable table = c.embeddings.empty()
                                   ? random_embeddings(vocab, c.embed_dim, c.seed)
                                   : load_embeddings(c.embeddings, vocab, c.embed_dim, c.seed);

  ModelConfig mc{c.embed_dim, c.hidden_dim, graph ? c.layers : 0};
  ModelParams init = ModelParams::initialize(mc, table, c.seed + 1);
  const auto train_set = examples_for(c, train_clusters, vocab);
  const auto val_set = examples_for(c, val_clusters, vocab);

  TrainingConfig tc;
  tc.alpha = c.alpha;
  tc.learning_rate = c.lr;
  tc.max_grad_norm = c.max_grad_norm;
  tc.validate_every = c.validate_every;
  tc.patience = c.patience;
  tc.max_iterations = c.max_iterations;
  tc.seed = c.seed;
  std::ostringstream log;
  const TrainingResult tr =
      train(std::move(init), train_set, val_set, tc, [&](const HistoryRow& r) {
        if (c.verbose)
          log << "iter " << r.iteration << " train " << fmt(r.train_cost) << " val "
              << fmt(r.validation_cost) << '\n';
      });

  ensure_dir(c.out);
  const fs::path ckpt = c.checkpoint.empty() ? fs::path(c.out) / "model.ckpt" : fs::path(c.checkpoint);
  save_checkpoint(ckpt, tr.best,
                  {{"graph_type", c.graph_type},
                   {"best_iteration", std::to_string(tr.best_iteration)},
                   {"best_validation_cost", fmt(tr.best_validation_cost, 9)},
                   {"seed", std::to_string(c.seed)}});
  res.files.push_back(ckpt.string());
  write_text(fs::path(c.out) / "history.tsv", format_history(tr.history), res);
  echo_config(c, "train", res);
  log << "trained " << tr.iterations_run << " iterations"
      << (tr.early_stopped ? " (early stop)" : "") << "; best validation cost "
      << fmt(tr.best_validation_cost) << " at iteration " << tr.best_iteration << " -> "
      << ckpt.string() << '\n';
  res.message = log.str();
  return res;
}

namespace {

struct LoadedModel {
  ModelParams params;
  std::map<std::string, std::string> meta;
};

LoadedModel load_model(const RunConfig& c, const std::string& cmd) {
  require(c.checkpoint, "checkpoint", cmd);
  LoadedModel m;
  m.params = load_checkpoint(c.checkpoint, &m.meta);
  const auto it = m.meta.find("graph_type");
  if (it != m.meta.end() && it->second != c.graph_type)
    throw ContractError("checkpoint was trained with graph type '" + it->second +
                        "' but --graph-type is '" + c.graph_type + "'");
  if (c.graph_type == "none" && m.params.config.layers != 0)
    throw ContractError("checkpoint has GCN layers; it cannot run with --graph-type none");
  return m;
}

std::vector<double> score_cluster(const RunConfig& c, const ModelParams& p, const Cluster& cl) {
  if (uses_graph(c)) {
    const SentenceGraph g = load_cluster_graph(c, cl);
    return predict(p, make_input(cl, p.vocab, &g));
  }
  return predict(p, make_input(cl, p.vocab, nullptr));
}

}  // namespace

CommandResult cmd_summarize(const RunConfig& c) {
  CommandResult res;
  require(c.corpus, "corpus", "summarize");
  require(c.out, "out", "summarize");
  if (uses_graph(c)) require(c.graphs_dir, "graphs-dir", "summarize");
  const LoadedModel m = load_model(c, "summarize");
  const auto clusters = load_corpus(c.corpus);
  const SelectionConfig sc = selection_config(c);
  ensure_dir(c.out);
  std::size_t empty = 0;
  for (const auto& cl : clusters) {
    const auto scores = score_cluster(c, m.params, cl);
    const Summary s = select(scores, cl, sc);
    if (s.indices.empty()) ++empty;
    write_text(fs::path(c.out) / (cl.id() + ".txt"), s.text + (s.text.empty() ? "" : "\n"), res);
    json side;
    side["id"] = cl.id();
    side["indices"] = s.indices;
    side["scores"] = scores;
    side["length"] = s.length;
    side["limit_unit"] = sc.limit.unit == TruncationUnit::Bytes ? "bytes" : "words";
    side["limit"] = sc.limit.value;
    write_text(fs::path(c.out) / (cl.id() + ".json"), side.dump(2) + "\n", res);
  }
  echo_config(c, "summarize", res);
  res.message = "summarized " + std::to_string(clusters.size()) + " clusters into " + c.out +
                (empty ? " (" + std::to_string(empty) + " empty)" : std::string()) + "\n";
  return res;
}

CommandResult cmd_evaluate(const RunConfig& c) {
  CommandResult res;
  require(c.corpus, "corpus", "evaluate");
  const std::string dir = c.summaries_dir.empty() ? c.out : c.summaries_dir;
  require(dir, "summaries-dir", "evaluate");
  const auto clusters = load_corpus(c.corpus);
  std::map<std::string, std::string> summaries;
  std::map<std::string, std::vector<std::string>> refs;
  for (const auto& cl : clusters) {
    const fs::path p = fs::path(dir) / (cl.id() + ".txt");
    if (!fs::exists(p)) throw ContractError("no summary for cluster '" + cl.id() + "' in " + dir);
    summaries[cl.id()] = read_file(p);
    if (!cl.has_references())
      throw ContractError("evaluate: cluster '" + cl.id() + "' has no references");
    refs[cl.id()] = cl.references();
  }
  EvaluationOptions eo;
  if (c.limit_bytes > 0) {
    eo.truncation = TruncationUnit::Bytes;
    eo.limit = c.limit_bytes;
  } else {
    eo.truncation = TruncationUnit::Words;
    eo.limit = c.limit_words;
  }
  eo.bootstrap_samples = c.bootstrap;
  eo.seed = c.seed;
  const SystemReport rep = evaluate_system(c.system, summaries, refs, eo);
  res.message = format_report(rep, c.verbose);
  if (!c.out.empty()) {
    ensure_dir(c.out);
    write_text(fs::path(c.out) / "rouge.tsv", format_report(rep, true), res);
    echo_config(c, "evaluate", res);
  }
  return res;
}

CommandResult cmd_stats(const RunConfig& c) {
  CommandResult res;
  require(c.graphs_dir, "graphs-dir", "stats");
  if (!uses_graph(c)) throw ContractError("stats needs a graph type other than 'none'");
  std::vector<std::pair<std::string, SentenceGraph>> graphs;
  std::vector<Cluster> clusters;
  if (!c.corpus.empty()) {
    clusters = load_corpus(c.corpus);
    for (const auto& cl : clusters) graphs.emplace_back(cl.id(), load_cluster_graph(c, cl));
  } else {
    if (!c.checkpoint.empty()) throw ContractError("stats with --checkpoint also needs --corpus");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(c.graphs_dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      SentenceGraph g = load_graph(f);
      if (to_string(g.type()) == c.graph_type) graphs.emplace_back(f.stem().string(), std::move(g));
    }
  }
  std::optional<LoadedModel> model;
  if (!c.checkpoint.empty()) model = load_model(c, "stats");

  std::ostringstream table, nodes;
  table << "cluster\tgraph\tnodes\tedges\tavg_edge_weight\tavg_node_degree\trho_degree_salience\n";
  nodes << "cluster\tnode\tdegree\tsalience\n";
  double sn = 0, se = 0, sw = 0, sd = 0, sr = 0;
  std::size_t nr = 0;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const auto& [id, g] = graphs[k];
    std::vector<double> sal;
    if (model) sal = score_cluster(c, model->params, clusters[k]);
    const GraphStats st = graph_stats(g, sal);
    const std::string rho = !model ? "absent" : st.rho ? fmt(*st.rho) : "undefined";
    table << id << '\t' << c.graph_type << '\t' << st.nodes << '\t' << st.edges << '\t'
          << fmt(st.avg_edge_weight) << '\t' << fmt(st.avg_node_degree) << '\t' << rho << '\n';
    for (std::size_t i = 0; i < st.nodes; ++i)
      nodes << id << '\t' << i << '\t' << fmt(st.degrees[i]) << '\t'
            << (model ? fmt(sal[i], 9) : std::string("-")) << '\n';
    sn += static_cast<double>(st.nodes);
    se += static_cast<double>(st.edges);
    sw += st.avg_edge_weight;
    sd += st.avg_node_degree;
    if (st.rho) {
      sr += *st.rho;
      ++nr;
    }
  }
  if (!graphs.empty()) {
    const double n = static_cast<double>(graphs.size());
    table << "average\t" << c.graph_type << '\t' << fmt(sn / n, 1) << '\t' << fmt(se / n, 1)
          << '\t' << fmt(sw / n) << '\t' << fmt(sd / n) << '\t'
          << (!model ? std::string("absent") : nr ? fmt(sr / static_cast<double>(nr)) : "undefined")
          << '\n';
  }
  res.message = table.str();
  if (!c.out.empty()) {
    ensure_dir(c.out);
    write_text(fs::path(c.out) / ("stats." + c.graph_type + ".tsv"), table.str(), res);
    write_text(fs::path(c.out) / ("nodes." + c.graph_type + ".tsv"), nodes.str(), res);
    echo_config(c, "stats", res);
  }
  return res;
}

CommandResult cmd_make_synthetic(const RunConfig& c) {
  CommandResult res;
  require(c.out, "out", "make-synthetic");
  SyntheticOptions o;
  o.clusters = c.synthetic_clusters;
  o.seed = c.seed;
  o.id_prefix = fs::path(c.out).stem().string() + "-";
  const auto clusters = make_synthetic_corpus(o);
  if (fs::path(c.out).has_parent_path()) ensure_dir(fs::path(c.out).parent_path());
  save_corpus(c.out, clusters);
  res.files.push_back(c.out);
  res.message = "wrote " + std::to_string(clusters.size()) + " synthetic clusters to " + c.out + "\n";
  return res;
}

std::vector<std::string> command_names() {
  return {"build-graph", "fit-personalization", "train", "summarize", "evaluate", "stats",
          "make-synthetic"};
}

CommandResult run_command(const std::string& name, const RunConfig& config) {
  if (name == "build-graph") return cmd_build_graph(config);
  if (name == "fit-personalization") return cmd_fit_personalization(config);
  if (name == "train") return cmd_train(config);
  if (name == "summarize") return cmd_summarize(config);
  if (name == "evaluate") return cmd_evaluate(config);
  if (name == "stats") return cmd_stats(config);
  if (name == "make-synthetic") return cmd_make_synthetic(config);
  throw InvalidArgument("unknown command '" + name + "'");
}

}  // namespace gcnsum
