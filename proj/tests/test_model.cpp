// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "gcnsum/checkpoint.hpp"
#include "gcnsum/error.hpp"
#include "gcnsum/graphs.hpp"
#include "gcnsum/model.hpp"
#include "support/oracles.hpp"

using namespace gcnsum;
namespace fs = std::filesystem;

namespace {

oracle::Mat to_mat(const Tensor& t) {
  oracle::Mat m = oracle::zeros(t.rows(), t.cols());
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) m[r][c] = t.at(r, c);
  return m;
}

oracle::Vec to_vec(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

Tensor from_mat(const oracle::Mat& m) {
  Tensor t({m.size(), m[0].size()});
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[0].size(); ++c) t.at(r, c) = m[r][c];
  return t;
}

oracle::Gru to_oracle(const GruParams& g) {
  return {to_mat(g.w_z.value), to_mat(g.u_z.value), to_mat(g.w_r.value), to_mat(g.u_r.value),
          to_mat(g.w_n.value), to_mat(g.u_n.value), to_vec(g.b_z.value), to_vec(g.b_r.value),
          to_vec(g.b_n.value)};
}

void randomize(GruParams& g, std::mt19937_64& rng, double scale = 0.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (Param* p : g.all())
    for (double& v : p->value.values()) v = u(rng);
}

Cluster fixture_cluster() {
  return Cluster::from_documents(
      "fx",
      {{"Maria Lopez opened the new bridge in Lima on Monday.",
        "However, engineers said the bridge needed more inspections.", "Traffic resumed."},
       {"Officials in Lima praised Maria Lopez for the bridge project.",
        "The city council approved more funding for roads."}},
      {"Maria Lopez opened a new bridge in Lima."});
}

ModelParams small_model(const Cluster& c, std::size_t layers, std::uint64_t seed = 3) {
  const Vocabulary vocab = Vocabulary::from_clusters({&c});
  return ModelParams::initialize({6, 5, layers}, random_embeddings(vocab, 6, seed), seed);
}

// Whole network from the component oracles.
std::vector<double> oracle_forward(const ModelParams& p, const ClusterInput& in) {
  const std::size_t H = p.config.hidden_dim;
  const auto emb = to_mat(p.embedding.value);
  const auto sg = to_oracle(p.sentence_gru);
  oracle::Mat s;
  for (const auto& ids : in.token_ids) {
    oracle::Mat xs;
    for (auto id : ids) xs.push_back(emb[id]);
    s.push_back(oracle::gru_run(sg, xs, H));
  }
  if (in.adjacency) {
    std::vector<oracle::Mat> ws;
    for (const auto& w : p.gcn) ws.push_back(to_mat(w.value));
    s = oracle::gcn_neighbor_sum(to_mat(*in.adjacency), s, ws);
  }
  const auto dg = to_oracle(p.document_gru);
  oracle::Vec c(H, 0.0);
  const std::size_t m = in.doc_offsets.size() - 1;
  for (std::size_t d = 0; d < m; ++d) {
    const oracle::Mat rows(s.begin() + static_cast<long>(in.doc_offsets[d]),
                           s.begin() + static_cast<long>(in.doc_offsets[d + 1]));
    const auto h = oracle::gru_run(dg, rows, H);
    for (std::size_t k = 0; k < H; ++k) c[k] += h[k] / static_cast<double>(m);
  }
  return oracle::salience(s, c, to_vec(p.head_v.value), to_mat(p.head_w1.value),
                          to_mat(p.head_w2.value));
}

}  // namespace

TEST_CASE("gru: zero parameters are a fixed point at zero") {
  auto g = GruParams::zeros("g", 3, 4);
  Tape t;
  BoundGru b{t.param(g.w_z), t.param(g.u_z), t.param(g.b_z), t.param(g.w_r), t.param(g.u_r),
             t.param(g.b_r), t.param(g.w_n), t.param(g.u_n), t.param(g.b_n)};
  std::mt19937_64 rng(1);
  const Var xs = t.constant(from_mat(oracle::random_matrix(5, 3, rng, -3, 3)));
  CHECK(gru_last_state(b, xs, 4).value() == Tensor({4}));
}

TEST_CASE("gru: single step and multi-step scalar oracle") {
  std::mt19937_64 rng(2);
  auto g = GruParams::zeros("g", 3, 4);
  randomize(g, rng);
  Tape t;
  BoundGru b{t.constant_ref(g.w_z.value), t.constant_ref(g.u_z.value), t.constant_ref(g.b_z.value),
             t.constant_ref(g.w_r.value), t.constant_ref(g.u_r.value), t.constant_ref(g.b_r.value),
             t.constant_ref(g.w_n.value), t.constant_ref(g.u_n.value), t.constant_ref(g.b_n.value)};
  const auto x = oracle::random_matrix(3, 3, rng, -1, 1);
  const auto og = to_oracle(g);

  const Var one = gru_last_state(b, t.constant(from_mat({x[0]})), 4);
  const Var cell = gru_cell(b, t.constant(Tensor({3}, x[0])), t.constant(Tensor({4})));
  for (std::size_t k = 0; k < 4; ++k) CHECK(one.value()[k] == doctest::Approx(cell.value()[k]).epsilon(1e-15));

  const Var three = gru_last_state(b, t.constant(from_mat(x)), 4);
  const auto ref = oracle::gru_run(og, x, 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(three.value()[k] - ref[k]) < 1e-14);
}

TEST_CASE("gcn_forward examples") {
  Tape t;
  SUBCASE("identity propagation") {
    std::mt19937_64 rng(3);
    const Tensor x = from_mat(oracle::random_matrix(4, 3, rng, 0, 1));
    const Var a = t.constant(renormalized_adjacency(SentenceGraph(4, false, GraphType::Cosine)).matrix);
    const Var z = gcn_forward(t.constant(x), a, {t.constant(Tensor::identity(3)), t.constant(Tensor::identity(3))});
    CHECK(z.value() == x);
  }
  SUBCASE("two-node complete graph") {
    SentenceGraph g(2, false, GraphType::Cosine);
    g.set_weight(0, 1, 1.0);
    const Var z = gcn_forward(t.constant(Tensor::identity(2)), t.constant(renormalized_adjacency(g).matrix),
                              {t.constant(Tensor::identity(2))});
    for (double v : z.value().values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("random six-node graph, three layers") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    SentenceGraph g(6, false, GraphType::Adg);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        if (u(rng) < 0.5) g.set_weight(i, j, u(rng));
    const auto x = oracle::random_matrix(6, 5, rng, -1, 1);
    std::vector<oracle::Mat> ws;
    std::vector<Var> wv;
    for (int l = 0; l < 3; ++l) {
      ws.push_back(oracle::random_matrix(5, 5, rng, -1, 1));
      wv.push_back(t.constant(from_mat(ws.back())));
    }
    const auto ahat = renormalized_adjacency(g).matrix;
    const Var z = gcn_forward(t.constant(from_mat(x)), t.constant(ahat), wv);
    const auto ref = oracle::gcn_neighbor_sum(oracle::renormalize(
                                                  [&] {
                                                    oracle::Mat m = oracle::zeros(6, 6);
                                                    for (std::size_t i = 0; i < 6; ++i)
                                                      for (std::size_t j = 0; j < 6; ++j) m[i][j] = g.weight(i, j);
                                                    return m;
                                                  }()),
                                              x, ws);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t f = 0; f < 5; ++f) CHECK(std::abs(z.value().at(i, f) - ref[i][f]) < 1e-10);
  }
  SUBCASE("no layers returns the input") {
    const Var x = t.constant(Tensor::identity(3));
    CHECK(gcn_forward(x, t.constant(Tensor::identity(3)), {}).id() == x.id());
  }
}

TEST_CASE("cluster embedding") {
  std::mt19937_64 rng(5);
  const Cluster c = fixture_cluster();
  ModelParams p = small_model(c, 0);
  randomize(p.document_gru, rng);
  Tape t;
  const BoundModel m = bind_const(t, p);
  const auto z = oracle::random_matrix(4, 5, rng, -1, 1);
  const auto og = to_oracle(p.document_gru);
  SUBCASE("one document") {
    const Var cv = encode_cluster(m, t.constant(from_mat(z)), {0, 4}, 5);
    const auto d = oracle::gru_run(og, z, 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(cv.value()[k] - d[k]) < 1e-14);
  }
  SUBCASE("identical documents") {
    oracle::Mat zz = {z[0], z[1], z[0], z[1]};
    const Var cv = encode_cluster(m, t.constant(from_mat(zz)), {0, 2, 4}, 5);
    const auto d = oracle::gru_run(og, {z[0], z[1]}, 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(cv.value()[k] - d[k]) < 1e-14);
  }
  SUBCASE("two documents, hand-averaged oracle") {
    const Var cv = encode_cluster(m, t.constant(from_mat(z)), {0, 1, 4}, 5);
    const auto d0 = oracle::gru_run(og, {z[0]}, 5);
    const auto d1 = oracle::gru_run(og, {z[1], z[2], z[3]}, 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(cv.value()[k] - (d0[k] + d1[k]) / 2) < 1e-14);
  }
}

TEST_CASE("salience head") {
  std::mt19937_64 rng(6);
  Tape t;
  const auto w1 = oracle::random_matrix(3, 3, rng, -1, 1), w2 = oracle::random_matrix(3, 3, rng, -1, 1);
  const auto vm = oracle::random_matrix(1, 3, rng, -1, 1);
  const Var W1 = t.constant(from_mat(w1)), W2 = t.constant(from_mat(w2)), v = t.constant(Tensor({3}, vm[0]));
  const auto c = oracle::random_matrix(1, 3, rng, -1, 1)[0];
  const Var C = t.constant(Tensor({3}, c));
  SUBCASE("one sentence") {
    const Var s = salience(t.constant(from_mat(oracle::random_matrix(1, 3, rng, -1, 1))), C, v, W1, W2);
    CHECK(s.value() == Tensor::vector({1.0}));
  }
  SUBCASE("identical sentences give uniform scores") {
    const auto r = oracle::random_matrix(1, 3, rng, -1, 1)[0];
    const Var s = salience(t.constant(from_mat({r, r, r, r})), C, v, W1, W2);
    for (double x : s.value().values()) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("zero v gives uniform scores") {
    const Var s = salience(t.constant(from_mat(oracle::random_matrix(5, 3, rng, -1, 1))), C,
                           t.constant(Tensor({3})), W1, W2);
    for (double x : s.value().values()) CHECK(x == doctest::Approx(0.2).epsilon(1e-15));
  }
  SUBCASE("matches the oracle") {
    const auto z = oracle::random_matrix(5, 3, rng, -1, 1);
    const Var s = salience(t.constant(from_mat(z)), C, v, W1, W2);
    const auto ref = oracle::salience(z, c, vm[0], w1, w2);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(s.value()[i] - ref[i]) < 1e-14);
  }
}

TEST_CASE("full forward agrees with the composed oracle") {
  const Cluster c = fixture_cluster();
  for (std::size_t layers : {0u, 1u, 3u}) {
    CAPTURE(layers);
    const ModelParams p = small_model(c, layers);
    const SentenceGraph g = build_graph(c, GraphType::Adg);
    const ClusterInput in = make_input(c, p.vocab, layers ? &g : nullptr);
    const auto got = predict(p, in);
    const auto ref = oracle_forward(p, in);
    REQUIRE(got.size() == c.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-12);
  }
}

TEST_CASE("forward contracts") {
  const Cluster c = fixture_cluster();
  const ModelParams p = small_model(c, 2);
  CHECK_THROWS_AS(predict(p, make_input(c, p.vocab, nullptr)), ContractError);
  SentenceGraph raw(c.size(), true, GraphType::Adg);
  CHECK_THROWS_AS(make_input(c, p.vocab, &raw), ContractError);
  const SentenceGraph small(2, false, GraphType::Cosine);
  CHECK_THROWS_AS(make_input(c, p.vocab, &small), DimensionError);
}

TEST_CASE("document permutation leaves sentence scores unchanged") {
  const Cluster c = fixture_cluster();
  const Cluster swapped = c.permute_documents({1, 0});
  const ModelParams p = small_model(c, 0);
  const auto a = predict(p, make_input(c, p.vocab));
  const auto b = predict(p, make_input(swapped, p.vocab));
  // Document 1 (2 sentences) now comes first.
  const std::vector<std::size_t> map = {2, 3, 4, 0, 1};  // old index -> new index
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[map[i]]) < 1e-14);
}

TEST_CASE("regression snapshot") {
  // Recorded from the first run after the oracle checks above passed.
  const Cluster c = fixture_cluster();
  const ModelParams p = small_model(c, 2, 11);
  const SentenceGraph g = build_graph(c, GraphType::Adg);
  const auto s = predict(p, make_input(c, p.vocab, &g));
  const std::vector<double> golden = {0.20101085316927697, 0.19981484020756335, 0.19906298953184393,
                                     0.19983400723403941, 0.20027730985727632};
  REQUIRE(s.size() == golden.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(golden[i]).epsilon(1e-12));
}

TEST_CASE("checkpoint round trip") {
  const Cluster c = fixture_cluster();
  const ModelParams p = small_model(c, 2);
  const fs::path path = fs::temp_directory_path() / "gcnsum_model_test.ckpt";
  save_checkpoint(path, p, {{"graph_type", "adg"}});
  std::map<std::string, std::string> meta;
  const ModelParams q = load_checkpoint(path, &meta);
  CHECK(meta.at("graph_type") == "adg");
  CHECK(q.vocab.words() == p.vocab.words());
  CHECK(q.config.layers == 2);
  const auto pa = p.all();
  const auto qa = q.all();
  REQUIRE(pa.size() == qa.size());
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i]->value == qa[i]->value);

  SUBCASE("bad magic") {
    std::ofstream(path, std::ios::binary) << "NOTACKPTxxxxxxxxxxxx";
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
  }
  SUBCASE("truncated file") {
    const std::string bytes = serialize_archive(read_archive(path));
    std::ofstream(path, std::ios::binary) << bytes.substr(0, bytes.size() / 2);
    CHECK_THROWS_AS(load_checkpoint(path), ParseError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_checkpoint(path.string() + ".nope"), IoError); }
}

TEST_CASE("archive byte layout") {
  TensorArchive a;
  a.header = "h";
  a.tensors.push_back({"x", Tensor::vector({1.0})});
  const std::string b = serialize_archive(a);
  CHECK(b.substr(0, 8) == "GCNSUMCK");
  CHECK(static_cast<unsigned char>(b[8]) == 1);  // version, little-endian
  // magic + version + header len + header + count + name len + name + rank + dim + data
  CHECK(b.size() == 8 + 4 + 8 + 1 + 4 + 4 + 1 + 4 + 8 + 8);
  const auto back = deserialize_archive(b);
  CHECK(back.get("x") == Tensor::vector({1.0}));
  CHECK_THROWS(back.get("y"));
}
