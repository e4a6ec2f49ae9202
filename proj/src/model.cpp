// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gcnsum/checkpoint.hpp"
#include "gcnsum/error.hpp"

namespace gcnsum {

GruParams GruParams::zeros(const std::string& prefix, std::size_t in, std::size_t hidden) {
  auto mat = [&](const char* n, std::size_t r) { return Param(prefix + "." + n, Tensor({r, hidden})); };
  auto vec = [&](const char* n) { return Param(prefix + "." + n, Tensor({hidden})); };
  return GruParams{mat("w_z", in), mat("u_z", hidden), vec("b_z"),
                   mat("w_r", in), mat("u_r", hidden), vec("b_r"),
                   mat("w_n", in), mat("u_n", hidden), vec("b_n")};
}

std::vector<Param*> GruParams::all() {
  return {&w_z, &u_z, &b_z, &w_r, &u_r, &b_r, &w_n, &u_n, &b_n};
}

ModelParams ModelParams::initialize(const ModelConfig& config, const EmbeddingTable& embeddings,
                                    std::uint64_t seed) {
  if (config.hidden_dim == 0 || config.embed_dim == 0)
    throw InvalidArgument("model dimensions must be positive");
  if (embeddings.dim() != config.embed_dim)
    throw DimensionError("embedding table has dimension " + std::to_string(embeddings.dim()) +
                         ", model expects " + std::to_string(config.embed_dim));
  const std::size_t h = config.hidden_dim;
  ModelParams p;
  p.config = config;
  p.vocab = embeddings.vocab;
  p.embedding = Param("embedding", embeddings.matrix);
  p.sentence_gru = GruParams::zeros("sentence_gru", config.embed_dim, h);
  for (std::size_t l = 0; l < config.layers; ++l)
    p.gcn.emplace_back("gcn." + std::to_string(l), Tensor({h, h}));
  p.document_gru = GruParams::zeros("document_gru", h, h);
  p.head_v = Param("head.v", Tensor({h}));
  p.head_w1 = Param("head.w1", Tensor({h, h}));
  p.head_w2 = Param("head.w2", Tensor({h, h}));

  std::mt19937_64 rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(h));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (Param* q : p.all()) {
    if (q == &p.embedding) continue;
    for (auto& v : q->value.values()) v = u(rng);
  }
  return p;
}

std::vector<Param*> ModelParams::all() {
  std::vector<Param*> out{&embedding};
  for (Param* q : sentence_gru.all()) out.push_back(q);
  for (auto& w : gcn) out.push_back(&w);
  for (Param* q : document_gru.all()) out.push_back(q);
  out.push_back(&head_v);
  out.push_back(&head_w1);
  out.push_back(&head_w2);
  return out;
}

std::vector<const Param*> ModelParams::all() const {
  std::vector<const Param*> out;
  for (Param* q : const_cast<ModelParams*>(this)->all()) out.push_back(q);
  return out;
}

std::map<std::string, std::vector<Param*>> ModelParams::groups() {
  std::map<std::string, std::vector<Param*>> g;
  g["embedding"] = {&embedding};
  g["sentence_gru"] = sentence_gru.all();
  for (auto& w : gcn) g["gcn"].push_back(&w);
  g["document_gru"] = document_gru.all();
  g["head"] = {&head_v, &head_w1, &head_w2};
  return g;
}

std::size_t ModelParams::num_values() const {
  std::size_t n = 0;
  for (const Param* q : all()) n += q->value.numel();
  return n;
}

ClusterInput make_input(const Cluster& cluster, const Vocabulary& vocab,
                        const SentenceGraph* graph) {
  ClusterInput in;
  for (const auto& s : cluster.sentences()) in.token_ids.push_back(vocab.lookup(s.tokens));
  in.doc_offsets = cluster.doc_offsets();
  if (graph) {
    if (graph->size() != cluster.size())
      throw DimensionError("graph has " + std::to_string(graph->size()) + " nodes, cluster '" +
                           cluster.id() + "' has " + std::to_string(cluster.size()) +
                           " sentences");
    if (graph->stage() != GraphStage::Rescaled)
      throw ContractError("graph for cluster '" + cluster.id() +
                          "' has not been undirected and rescaled");
    in.adjacency = renormalized_adjacency(*graph).matrix;
  }
  return in;
}

namespace {

BoundGru bind_gru(Tape& t, GruParams& g) {
  return {t.param(g.w_z), t.param(g.u_z), t.param(g.b_z), t.param(g.w_r), t.param(g.u_r),
          t.param(g.b_r), t.param(g.w_n), t.param(g.u_n), t.param(g.b_n)};
}

BoundGru bind_gru_const(Tape& t, const GruParams& g) {
  return {t.constant_ref(g.w_z.value), t.constant_ref(g.u_z.value), t.constant_ref(g.b_z.value),
          t.constant_ref(g.w_r.value), t.constant_ref(g.u_r.value), t.constant_ref(g.b_r.value),
          t.constant_ref(g.w_n.value), t.constant_ref(g.u_n.value), t.constant_ref(g.b_n.value)};
}

// One GRU update given the input projections x W_* for this step.
Var gru_update(const BoundGru& g, const Var& xz, const Var& xr, const Var& xn, const Var& h) {
  const Var z = sigmoid(add(add(xz, matmul(g.u_z, h)), g.b_z));
  const Var r = sigmoid(add(add(xr, matmul(g.u_r, h)), g.b_r));
  const Var n = tanh(add(add(xn, matmul(g.u_n, mul(r, h))), g.b_n));
  Tape& t = *h.tape();
  const Var one = t.constant(Tensor::scalar(1.0));
  return add(mul(z, h), mul(sub(one, z), n));
}

}  // namespace

BoundModel bind(Tape& tape, ModelParams& p) {
  BoundModel m;
  m.embedding = tape.param(p.embedding);
  m.sentence_gru = bind_gru(tape, p.sentence_gru);
  for (auto& w : p.gcn) m.gcn.push_back(tape.param(w));
  m.document_gru = bind_gru(tape, p.document_gru);
  m.head_v = tape.param(p.head_v);
  m.head_w1 = tape.param(p.head_w1);
  m.head_w2 = tape.param(p.head_w2);
  return m;
}

BoundModel bind_const(Tape& tape, const ModelParams& p) {
  BoundModel m;
  m.embedding = tape.constant_ref(p.embedding.value);
  m.sentence_gru = bind_gru_const(tape, p.sentence_gru);
  for (const auto& w : p.gcn) m.gcn.push_back(tape.constant_ref(w.value));
  m.document_gru = bind_gru_const(tape, p.document_gru);
  m.head_v = tape.constant_ref(p.head_v.value);
  m.head_w1 = tape.constant_ref(p.head_w1.value);
  m.head_w2 = tape.constant_ref(p.head_w2.value);
  return m;
}

Var gru_cell(const BoundGru& gru, const Var& x, const Var& h) {
  const Var xm = stack_rows({x});
  return gru_update(gru, row(matmul(xm, gru.w_z), 0), row(matmul(xm, gru.w_r), 0),
                    row(matmul(xm, gru.w_n), 0), h);
}

Var gru_last_state(const BoundGru& gru, const Var& inputs, std::size_t hidden) {
  const std::size_t steps = inputs.value().rows();
  const Var xz = matmul(inputs, gru.w_z);
  const Var xr = matmul(inputs, gru.w_r);
  const Var xn = matmul(inputs, gru.w_n);
  Var h = inputs.tape()->constant(Tensor({hidden}));
  for (std::size_t t = 0; t < steps; ++t) h = gru_update(gru, row(xz, t), row(xr, t), row(xn, t), h);
  return h;
}

Var encode_sentence(const BoundModel& m, const std::vector<std::size_t>& token_ids,
                    std::size_t hidden) {
  if (token_ids.empty()) throw InvalidArgument("encode_sentence: empty token list");
  return gru_last_state(m.sentence_gru, gather_rows(m.embedding, token_ids), hidden);
}

Var gcn_forward(const Var& x, const Var& adjacency, const std::vector<Var>& weights) {
  const Shape& as = adjacency.shape();
  if (as.size() != 2 || as[0] != as[1] || as[0] != x.value().rows())
    throw DimensionError("gcn_forward: adjacency " + shape_str(as) + " does not match features " +
                         shape_str(x.shape()));
  Var h = x;
  for (const Var& w : weights) h = relu(matmul(matmul(adjacency, h), w));
  return h;
}

Var encode_cluster(const BoundModel& m, const Var& z, const std::vector<std::size_t>& doc_offsets,
                   std::size_t hidden) {
  if (doc_offsets.size() < 2 || doc_offsets.front() != 0 ||
      doc_offsets.back() != z.value().rows())
    throw DimensionError("encode_cluster: document boundaries do not partition the sentences");
  std::vector<Var> docs;
  for (std::size_t d = 0; d + 1 < doc_offsets.size(); ++d) {
    if (doc_offsets[d + 1] <= doc_offsets[d])
      throw InvalidArgument("encode_cluster: document " + std::to_string(d) + " is empty");
    std::vector<Var> rows;
    for (std::size_t i = doc_offsets[d]; i < doc_offsets[d + 1]; ++i) rows.push_back(row(z, i));
    docs.push_back(gru_last_state(m.document_gru, stack_rows(rows), hidden));
  }
  return mean(docs);
}

Var salience(const Var& z, const Var& c, const Var& v, const Var& w1, const Var& w2) {
  const Var pre = add_rowwise(matmul(z, w2), matmul(w1, c));
  return softmax(matmul(tanh(pre), v));
}

Var forward(const BoundModel& m, const ClusterInput& input, const ModelConfig& config) {
  if (input.size() == 0) throw InvalidArgument("forward: empty cluster");
  Tape& tape = *m.embedding.tape();
  std::vector<Var> sent;
  sent.reserve(input.size());
  for (const auto& ids : input.token_ids)
    sent.push_back(encode_sentence(m, ids, config.hidden_dim));
  Var z = stack_rows(sent);
  if (config.layers > 0) {
    if (!input.adjacency)
      throw ContractError("forward: model has GCN layers but the input carries no graph");
    z = gcn_forward(z, tape.constant_ref(*input.adjacency), m.gcn);
  }
  const Var c = encode_cluster(m, z, input.doc_offsets, config.hidden_dim);
  return salience(z, c, m.head_v, m.head_w1, m.head_w2);
}

std::vector<double> predict(const ModelParams& params, const ClusterInput& input) {
  Tape tape;
  const BoundModel m = bind_const(tape, params);
  const Var s = forward(m, input, params.config);
  auto v = s.value().values();
  return {v.begin(), v.end()};
}

// --- checkpoints -----------------------------------------------------------

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     const std::map<std::string, std::string>& metadata) {
  TensorArchive a;
  std::ostringstream h;
  h << "format=gcnsum-model\n"
    << "embed_dim=" << params.config.embed_dim << '\n'
    << "hidden_dim=" << params.config.hidden_dim << '\n'
    << "layers=" << params.config.layers << '\n';
  for (const auto& [k, v] : metadata) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos)
      throw InvalidArgument("checkpoint metadata may not contain '=' in keys or newlines");
    h << "meta." << k << '=' << v << '\n';
  }
  h << "[vocab]\n";
  for (const auto& w : params.vocab.words()) h << w << '\n';
  a.header = h.str();
  for (const Param* p : params.all()) a.tensors.emplace_back(p->name, p->value);
  write_archive(path, a);
}

ModelParams load_checkpoint(const std::filesystem::path& path,
                            std::map<std::string, std::string>* metadata) {
  const TensorArchive a = read_archive(path);
  std::istringstream h(a.header);
  std::string line;
  std::map<std::string, std::string> kv;
  std::vector<std::string> words;
  bool in_vocab = false;
  while (std::getline(h, line)) {
    if (in_vocab) {
      words.push_back(line);
      continue;
    }
    if (line == "[vocab]") {
      in_vocab = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("checkpoint header: bad line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (kv["format"] != "gcnsum-model") throw ParseError("checkpoint: not a gcnsum model");
  if (words.empty() || words.front() != Vocabulary::kUnknown)
    throw ParseError("checkpoint: vocabulary section missing");
  ModelConfig cfg;
  try {
    cfg.embed_dim = std::stoul(kv.at("embed_dim"));
    cfg.hidden_dim = std::stoul(kv.at("hidden_dim"));
    cfg.layers = std::stoul(kv.at("layers"));
  } catch (const std::exception&) {
    throw ParseError("checkpoint: model config incomplete");
  }
  Vocabulary vocab(std::vector<std::string>(words.begin() + 1, words.end()));
  if (vocab.size() != words.size()) throw ParseError("checkpoint: duplicate vocabulary entries");
  EmbeddingTable table = random_embeddings(vocab, cfg.embed_dim, 0);
  ModelParams p = ModelParams::initialize(cfg, table, 0);
  for (Param* q : p.all()) {
    const Tensor& t = a.get(q->name);
    if (t.shape() != q->value.shape())
      throw DimensionError("checkpoint tensor '" + q->name + "' has shape " +
                           shape_str(t.shape()) + ", config implies " +
                           shape_str(q->value.shape()));
    q->value = t;
  }
  if (metadata) {
    metadata->clear();
    for (const auto& [k, v] : kv)
      if (k.rfind("meta.", 0) == 0) (*metadata)[k.substr(5)] = v;
  }
  return p;
}

}  // namespace gcnsum
