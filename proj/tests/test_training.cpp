// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "gcnsum/error.hpp"
#include "gcnsum/graphs.hpp"
#include "gcnsum/synthetic.hpp"
#include "gcnsum/training.hpp"
#include "support/oracles.hpp"

using namespace gcnsum;

namespace {

ModelParams tiny_model(const std::vector<const Cluster*>& cs, std::size_t layers, std::size_t dim = 8) {
  const Vocabulary vocab = Vocabulary::from_clusters(cs);
  return ModelParams::initialize({dim, dim, layers}, random_embeddings(vocab, dim, 5), 5);
}

}  // namespace

TEST_CASE("sentence ROUGE targets") {
  SUBCASE("identical to the single reference") {
    const Cluster c = Cluster::from_documents("t", {{"The cat sat on the mat.", "Dogs run."}},
                                              {"The cat sat on the mat."});
    const auto r = sentence_rouge_targets(c);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r[1] == 0.0);
  }
  SUBCASE("hand n-gram count") {
    const Cluster c = Cluster::from_documents("t", {{"the cat"}}, {"the cat sat on the mat"});
    const std::vector<std::string> ref = {"the", "cat", "sat", "on", "the", "mat"};
    const std::vector<std::string> cand = {"the", "cat"};
    const double oracle_r = (oracle::ngram_recall(cand, ref, 1) + oracle::ngram_recall(cand, ref, 2)) / 2;
    CHECK(oracle_r == doctest::Approx(4.0 / 15).epsilon(1e-15));
    CHECK(sentence_rouge_targets(c)[0] == doctest::Approx(4.0 / 15).epsilon(1e-15));
  }
  SUBCASE("no references is a contract error") {
    const Cluster c = Cluster::from_documents("t", {{"A b c."}});
    CHECK_THROWS_AS(sentence_rouge_targets(c), ContractError);
  }
}

TEST_CASE("target distribution") {
  for (double a : {1.0, 40.0}) {
    const auto t = target_distribution(std::vector<double>{0.3, 0.3, 0.3, 0.3}, a);
    for (double x : t) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
  }
  const auto t = target_distribution(std::vector<double>{0.9, 0.1, 0.0}, 1e-6);
  for (double x : t) CHECK(std::abs(x - 1.0 / 3) < 1e-5);
  const auto h = target_distribution(std::vector<double>{0.5, 0.25}, 40.0);
  const double e = std::exp(-10.0);
  CHECK(h[0] == doctest::Approx(1 / (1 + e)).epsilon(1e-15));
  CHECK(h[1] == doctest::Approx(e / (1 + e)).epsilon(1e-15));
}

TEST_CASE("cross-entropy loss") {
  const std::vector<double> r = {0.6, 0.3, 0.1};
  CHECK(loss_value(r, r) == doctest::Approx(entropy(r)).epsilon(1e-15));
  CHECK(loss_value(std::vector<double>(4, 0.25), std::vector<double>{0, 0, 1, 0}) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(loss_value(std::vector<double>{0.5, 0.5}, std::vector<double>{0.75, 0.25}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  Tape t;
  const Var l = loss(t.constant(Tensor::vector({0.5, 0.5})), {0.75, 0.25});
  CHECK(l.value().item() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(loss(t.constant(Tensor::vector({1.0})), {0.5, 0.5}), DimensionError);
}

TEST_CASE("loss gradient matches finite differences") {
  SyntheticOptions o;
  o.clusters = 1;
  o.min_documents = o.max_documents = 2;
  o.min_sentences = o.max_sentences = 2;
  const Cluster c = make_synthetic_corpus(o)[0];
  ModelParams p = tiny_model({&c}, 2, 4);
  const SentenceGraph g = build_graph(c, GraphType::Adg);
  const Example ex = make_example(c, p.vocab, &g, 40.0);
  Tape t;
  t.backward(loss(forward(bind(t, p), ex.input, p.config), ex.targets));
  auto f = [&] {
    Tape u;
    return loss(forward(bind_const(u, p), ex.input, p.config), ex.targets).value().item();
  };
  for (Param* q : p.all()) {
    if (q == &p.embedding) continue;  // covered by the acceptance suite
    double num = 0, den = 0;
    for (std::size_t i = 0; i < q->value.numel(); ++i) {
      const double fd = oracle::central_difference(f, q->value[i], 1e-5);
      num += (fd - q->grad[i]) * (fd - q->grad[i]);
      den += fd * fd;
    }
    CAPTURE(q->name);
    CHECK(std::sqrt(num) <= 1e-4 * std::max(std::sqrt(den), 1e-8));
  }
}

TEST_CASE("training loop contracts") {
  SyntheticOptions o;
  o.clusters = 3;
  const auto cs = make_synthetic_corpus(o);
  std::vector<const Cluster*> ptrs;
  for (const auto& c : cs) ptrs.push_back(&c);
  const ModelParams init = tiny_model(ptrs, 0);
  std::vector<Example> ex;
  for (const auto& c : cs) ex.push_back(make_example(c, init.vocab, nullptr, 40.0));

  TrainingConfig cfg;
  cfg.validate_every = 3;
  cfg.max_iterations = 30;

  SUBCASE("lr 0 leaves parameters unchanged and costs flat") {
    cfg.learning_rate = 0;
    cfg.patience = 100;
    const auto r = train(init, ex, ex, cfg);
    const auto a = init.all();
    const auto b = r.best.all();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i]->value == b[i]->value);
    for (const auto& h : r.history) CHECK(h.validation_cost == r.history[0].validation_cost);
  }
  SUBCASE("patience 1 with non-improving validation stops at the second validation") {
    cfg.learning_rate = 0;
    cfg.patience = 1;
    const auto r = train(init, ex, ex, cfg);
    CHECK(r.early_stopped);
    CHECK(r.history.size() == 2);
    CHECK(r.iterations_run == 2 * cfg.validate_every);
  }
  SUBCASE("same seed reproduces the history") {
    const auto a = train(init, ex, ex, cfg);
    const auto b = train(init, ex, ex, cfg);
    CHECK(format_history(a.history) == format_history(b.history));
    CHECK(a.best_validation_cost <= a.history.front().validation_cost);
  }
  SUBCASE("validation mean invariants") {
    const double one = validate(init, std::span<const Example>(ex.data(), 1));
    std::vector<Example> dup = {ex[0], ex[0]};
    CHECK(validate(init, dup) == doctest::Approx(one).epsilon(1e-15));
    const Cluster oov = Cluster::from_documents("oov", {{"Zyxq wvut srqp.", "Mlkj ihgf."}}, {"Zyxq."});
    const Example e = make_example(oov, init.vocab, nullptr, 40.0);
    CHECK(std::isfinite(validate(init, std::span<const Example>(&e, 1))));
  }
  SUBCASE("empty sets are rejected") {
    CHECK_THROWS(train(init, {}, ex, cfg));
  }
}

TEST_CASE("single-cluster overfit reaches the entropy floor") {
  SyntheticOptions o;
  o.clusters = 1;
  o.seed = 3;
  const Cluster c = make_synthetic_corpus(o)[0];
  const ModelParams init = tiny_model({&c}, 2);
  const SentenceGraph g = build_graph(c, GraphType::Adg);
  const std::vector<Example> ex = {make_example(c, init.vocab, &g, 40.0)};
  TrainingConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.max_iterations = 500;
  cfg.patience = 1000;
  const auto r = train(init, ex, ex, cfg);
  const double floor = entropy(ex[0].targets);
  CHECK(validate(r.best, ex) - floor < 0.05);
}
