// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/graphs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gcnsum/error.hpp"
#include "gcnsum/text.hpp"
#include "gcnsum/training.hpp"
#include "json.hpp"

namespace gcnsum {

using json = nlohmann::json;

std::string to_string(GraphType t) {
  switch (t) {
    case GraphType::Cosine: return "cosine";
    case GraphType::Adg: return "adg";
    case GraphType::Pdg: return "pdg";
  }
  return "?";
}

GraphType parse_graph_type(const std::string& s) {
  if (s == "cosine") return GraphType::Cosine;
  if (s == "adg") return GraphType::Adg;
  if (s == "pdg") return GraphType::Pdg;
  throw InvalidArgument("unknown graph type '" + s + "' (expected cosine, adg or pdg)");
}

SentenceGraph::SentenceGraph(std::size_t n, bool directed, GraphType type)
    : n_(n), directed_(directed), type_(type), w_(n * n, 0.0) {}

void SentenceGraph::set_weight(std::size_t u, std::size_t v, double w) {
  if (u >= n_ || v >= n_) throw InvalidArgument("set_weight: node out of range");
  if (u == v) throw InvalidArgument("set_weight: self-loops are not stored");
  if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("set_weight: weight must be finite and >= 0");
  w_[u * n_ + v] = w;
  if (!directed_) w_[v * n_ + u] = w;
}

std::vector<std::tuple<std::size_t, std::size_t, double>> SentenceGraph::edges() const {
  std::vector<std::tuple<std::size_t, std::size_t, double>> out;
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = directed_ ? 0 : u + 1; v < n_; ++v)
      if (w_[u * n_ + v] > 0.0) out.emplace_back(u, v, w_[u * n_ + v]);
  return out;
}

std::size_t SentenceGraph::edge_count() const { return edges().size(); }

double SentenceGraph::max_weight() const {
  return w_.empty() ? 0.0 : *std::max_element(w_.begin(), w_.end());
}

// --- builders -------------------------------------------------------------

SentenceGraph build_cosine_graph(const Cluster& cluster, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InvalidArgument("cosine threshold must be in (0, 1)");
  std::vector<std::vector<std::string>> toks;
  for (const auto& s : cluster.sentences()) toks.push_back(s.tokens);
  const TfIdfModel model(toks);
  std::vector<SparseVector> vecs;
  for (const auto& t : toks) vecs.push_back(model.vector(t));
  SentenceGraph g(cluster.size(), false, GraphType::Cosine);
  for (std::size_t u = 0; u < vecs.size(); ++u)
    for (std::size_t v = u + 1; v < vecs.size(); ++v) {
      const double c = cosine(vecs[u], vecs[v]);
      if (c > threshold) g.set_weight(u, v, c);
    }
  return g;
}

namespace {

bool shares(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) ++ia; else ++ib;
  }
  return false;
}

}  // namespace

SentenceGraph build_adg(const Cluster& cluster) {
  const auto ann = annotate(cluster);
  const std::size_t n = cluster.size();
  std::vector<std::set<std::string>> verbs(n), commons(n), propers(n), deverbal(n);
  for (std::size_t i = 0; i < n; ++i) {
    verbs[i] = ann[i].verb_set();
    commons[i] = ann[i].common_set();
    propers[i] = ann[i].proper_set();
    deverbal[i] = {ann[i].deverbal_nouns.begin(), ann[i].deverbal_nouns.end()};
  }
  SentenceGraph g(n, true, GraphType::Adg);
  for (std::size_t u = 0; u < n; ++u) {
    const Sentence& su = cluster.sentence(u);
    for (std::size_t v = u + 1; v < n; ++v) {
      const Sentence& sv = cluster.sentence(v);
      const bool same_doc = su.document == sv.document;
      const bool shared_proper = shares(propers[u], propers[v]);
      const bool eligible = same_doc ? sv.position - su.position <= 3 : shared_proper;
      if (!eligible) continue;
      int firing = 0;
      if (same_doc && sv.position == su.position + 1 && ann[v].starts_with_marker) ++firing;
      if (shared_proper) ++firing;
      if (shares(commons[u], commons[v])) ++firing;
      if (shares(deverbal[v], verbs[u])) ++firing;
      if (shares(verbs[u], verbs[v])) ++firing;
      if (firing > 0) g.set_weight(u, v, 0.5 * firing);
    }
  }
  return g;
}

// --- personalization ---------------------------------------------------------

double PersonalizationModel::score(const SentenceFeatures& f) const {
  const auto x = f.as_array();
  double s = bias;
  for (std::size_t k = 0; k < kNumFeatures; ++k) s += weights[k] * x[k];
  return std::max(kMinPersonalization, s);
}

std::vector<double> PersonalizationModel::scores(const Cluster& cluster) const {
  std::vector<double> out;
  for (const auto& f : extract_features(cluster)) out.push_back(score(f));
  return out;
}

std::string PersonalizationModel::to_json() const {
  json j;
  j["weights"] = std::vector<double>(weights.begin(), weights.end());
  j["bias"] = bias;
  j["ridge_fallback"] = ridge_fallback;
  j["training_rows"] = training_rows;
  j["features"] = {"position", "in_first_three", "proper_noun_count", "over_twenty_tokens",
                   "length", "coref_verb_mentions", "coref_common_noun_mentions",
                   "coref_proper_noun_mentions"};
  return j.dump(2);
}

PersonalizationModel PersonalizationModel::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    PersonalizationModel m;
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != kNumFeatures)
      throw ParseError("personalization model: expected " + std::to_string(kNumFeatures) +
                       " weights");
    std::copy(w.begin(), w.end(), m.weights.begin());
    m.bias = j.at("bias").get<double>();
    m.ridge_fallback = j.value("ridge_fallback", false);
    m.training_rows = j.value("training_rows", std::size_t{0});
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("personalization model: ") + e.what());
  }
}

void PersonalizationModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json() << '\n';
}

PersonalizationModel PersonalizationModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open personalization model " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

PersonalizationModel fit_linear(const std::vector<std::array<double, kNumFeatures>>& rows,
                                const std::vector<double>& targets) {
  if (rows.empty() || rows.size() != targets.size())
    throw InvalidArgument("fit_linear: need matching, non-empty rows and targets");
  const auto m = static_cast<Eigen::Index>(rows.size());
  constexpr Eigen::Index p = kNumFeatures + 1;
  Eigen::MatrixXd x(m, p);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(kNumFeatures); ++k)
      x(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    x(i, p - 1) = 1.0;
    y(i) = targets[static_cast<std::size_t>(i)];
  }
  PersonalizationModel model;
  model.training_rows = rows.size();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  Eigen::VectorXd beta;
  if (qr.rank() == p) {
    beta = qr.solve(y);
  } else {
    Eigen::MatrixXd a = x.transpose() * x;
    for (Eigen::Index k = 0; k < p - 1; ++k) a(k, k) += kRidgeLambda;
    beta = a.ldlt().solve(x.transpose() * y);
    model.ridge_fallback = true;
  }
  for (std::size_t k = 0; k < kNumFeatures; ++k) model.weights[k] = beta(static_cast<Eigen::Index>(k));
  model.bias = beta(p - 1);
  return model;
}

PersonalizationModel fit_personalization(std::span<const Cluster> clusters) {
  if (clusters.empty()) throw InvalidArgument("fit_personalization: no training clusters");
  std::vector<std::array<double, kNumFeatures>> rows;
  std::vector<double> targets;
  for (const auto& c : clusters) {
    const auto feats = extract_features(c);
    const auto r = sentence_rouge_targets(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      rows.push_back(feats[i].as_array());
      targets.push_back(r[i]);
    }
  }
  return fit_linear(rows, targets);
}

// --- transforms ----------------------------------------------------------------

SentenceGraph build_pdg(const SentenceGraph& adg, std::span<const double> scores) {
  if (!adg.directed()) throw ContractError("build_pdg: expects the directed ADG");
  if (scores.size() != adg.size())
    throw DimensionError("build_pdg: " + std::to_string(scores.size()) + " scores for " +
                         std::to_string(adg.size()) + " nodes");
  for (double s : scores)
    if (!(s > 0.0)) throw InvalidArgument("build_pdg: personalization scores must be positive");
  const std::size_t n = adg.size();
  SentenceGraph g(n, true, GraphType::Pdg);
  for (std::size_t v = 0; v < n; ++v) {
    double denom = 0.0;
    for (std::size_t u = 0; u < n; ++u) denom += adg.weight(u, v) * scores[u];
    if (denom <= 0.0) continue;
    for (std::size_t u = 0; u < n; ++u)
      if (adg.weight(u, v) > 0.0) g.set_weight(u, v, adg.weight(u, v) * scores[u] / denom);
  }
  return g;
}

SentenceGraph undirect(const SentenceGraph& g) {
  if (!g.directed()) throw ContractError("undirect: graph is already undirected");
  const std::size_t n = g.size();
  SentenceGraph out(n, false, g.type());
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      const double w = 0.5 * (g.weight(u, v) + g.weight(v, u));
      if (w > 0.0) out.set_weight(u, v, w);
    }
  out.set_stage(GraphStage::Undirected);
  return out;
}

SentenceGraph rescale_max1(const SentenceGraph& g) {
  if (g.directed())
    throw ContractError("rescale_max1: " + to_string(g.type()) +
                        " graph must be undirected before rescaling");
  SentenceGraph out = g;
  const double mx = g.max_weight();
  if (mx > 0.0)
    for (auto [u, v, w] : g.edges()) out.set_weight(u, v, w / mx);
  out.set_stage(GraphStage::Rescaled);
  return out;
}

RenormalizedAdjacency renormalized_adjacency(const SentenceGraph& g) {
  if (g.directed()) throw ContractError("renormalized_adjacency: graph must be undirected");
  const std::size_t n = g.size();
  if (n == 0) throw InvalidArgument("renormalized_adjacency: empty graph");
  std::vector<double> d(n, 1.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) d[u] += g.weight(u, v);
  RenormalizedAdjacency a{n, Tensor({n, n})};
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      const double aw = u == v ? 1.0 : g.weight(u, v);
      a.matrix.at(u, v) = aw / std::sqrt(d[u] * d[v]);
    }
  return a;
}

SentenceGraph build_graph(const Cluster& cluster, GraphType type,
                          const PersonalizationModel* personalization) {
  switch (type) {
    case GraphType::Cosine: return rescale_max1(build_cosine_graph(cluster));
    case GraphType::Adg: return rescale_max1(undirect(build_adg(cluster)));
    case GraphType::Pdg: {
      if (!personalization)
        throw ContractError("pdg graphs need a fitted personalization model");
      const auto scores = personalization->scores(cluster);
      return rescale_max1(undirect(build_pdg(build_adg(cluster), scores)));
    }
  }
  throw InvalidArgument("build_graph: bad graph type");
}

// --- statistics ------------------------------------------------------------------

std::vector<double> node_degrees(const SentenceGraph& g) {
  const std::size_t n = g.size();
  std::vector<double> deg(n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      deg[u] += g.weight(u, v);
      if (g.directed()) deg[u] += g.weight(v, u);
    }
  return deg;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

GraphStats graph_stats(const SentenceGraph& g, std::span<const double> salience) {
  GraphStats st;
  st.nodes = g.size();
  const auto edges = g.edges();
  st.edges = edges.size();
  double total = 0.0;
  for (const auto& e : edges) total += std::get<2>(e);
  st.avg_edge_weight = edges.empty() ? 0.0 : total / static_cast<double>(edges.size());
  st.degrees = node_degrees(g);
  double dsum = 0.0;
  for (double d : st.degrees) dsum += d;
  st.avg_node_degree = st.nodes ? dsum / static_cast<double>(st.nodes) : 0.0;
  if (!salience.empty()) {
    if (salience.size() != g.size())
      throw DimensionError("graph_stats: " + std::to_string(salience.size()) +
                           " salience values for " + std::to_string(g.size()) + " nodes");
    st.rho = pearson(st.degrees, salience);
  }
  return st;
}

// --- JSON ------------------------------------------------------------------------

namespace {
const char* stage_name(GraphStage s) {
  switch (s) {
    case GraphStage::Built: return "built";
    case GraphStage::Undirected: return "undirected";
    case GraphStage::Rescaled: return "rescaled";
  }
  return "built";
}
}  // namespace

std::string graph_to_json(const SentenceGraph& g) {
  json j;
  j["n"] = g.size();
  j["directed"] = g.directed();
  j["type"] = to_string(g.type());
  j["stage"] = stage_name(g.stage());
  json edges = json::array();
  for (auto [u, v, w] : g.edges()) edges.push_back({u, v, w});
  j["edges"] = std::move(edges);
  return j.dump();
}

SentenceGraph graph_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const auto n = j.at("n").get<std::size_t>();
    SentenceGraph g(n, j.at("directed").get<bool>(), parse_graph_type(j.at("type").get<std::string>()));
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw ParseError("graph: edge must be [u, v, w]");
      g.set_weight(e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>());
    }
    const std::string stage = j.value("stage", std::string("built"));
    g.set_stage(stage == "rescaled" ? GraphStage::Rescaled
                : stage == "undirected" ? GraphStage::Undirected
                                        : GraphStage::Built);
    return g;
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph: ") + e.what());
  }
}

void save_graph(const std::filesystem::path& path, const SentenceGraph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write graph " + path.string());
  out << graph_to_json(g) << '\n';
}

SentenceGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

}  // namespace gcnsum
