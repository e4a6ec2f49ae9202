// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers
//
// Commands, the C API and the command-line binary.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gcnsum/error.hpp"
#include "gcnsum/gcnsum.h"
#include "gcnsum/graphs.hpp"
#include "gcnsum/pipeline.hpp"
#include "gcnsum/text.hpp"
#include "support/oracles.hpp"

using namespace gcnsum;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("gcnsum_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Shell {
  int code;
  std::string out;
};

Shell sh(const std::string& cmd) {
  Shell r{0, ""};
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// Small, fast training settings on a synthetic corpus.
RunConfig small(const fs::path& dir) {
  RunConfig c;
  c.embed_dim = 6;
  c.hidden_dim = 6;
  c.layers = 2;
  c.max_iterations = 20;
  c.validate_every = 5;
  c.bootstrap = 50;
  c.out = dir.string();
  return c;
}

fs::path synthetic(const fs::path& dir, const std::string& name, std::size_t n, int seed) {
  RunConfig c;
  c.out = (dir / name).string();
  c.synthetic_clusters = n;
  c.seed = static_cast<std::uint64_t>(seed);
  cmd_make_synthetic(c);
  return dir / name;
}

}  // namespace

TEST_CASE("run configuration") {
  RunConfig c;
  c.set("graph-type", "adg");
  c.set("alpha", "12.5");
  c.set("verbose", "yes");
  CHECK(c.graph_type == "adg");
  CHECK(c.alpha == 12.5);
  CHECK(c.verbose);
  CHECK_THROWS_AS(c.set("nonsense", "1"), InvalidArgument);
  CHECK_THROWS_AS(c.set("layers", "-2"), InvalidArgument);
  CHECK_THROWS_AS(c.set("lr", "fast"), InvalidArgument);

  const fs::path d = fresh_dir("config");
  std::ofstream(d / "run.cfg") << "# comment\nlayers = 1\nseed=42  # trailing\n\n";
  RunConfig f;
  f.load_file(d / "run.cfg");
  CHECK(f.layers == 1);
  CHECK(f.seed == 42);
  std::ofstream(d / "bad.cfg") << "layers 1\n";
  CHECK_THROWS_AS(f.load_file(d / "bad.cfg"), ParseError);
  CHECK_THROWS_AS(f.load_file(d / "missing.cfg"), IoError);

  RunConfig back;
  const std::string text = c.to_text();
  std::ofstream(d / "echo.cfg") << text;
  back.load_file(d / "echo.cfg");
  CHECK(back.to_text() == text);
}

TEST_CASE("build-graph behaviour") {
  const fs::path d = fresh_dir("graphs");
  const fs::path fig = fs::path(GCNSUM_FIXTURES) / "figure1.jsonl";
  RunConfig c;
  c.corpus = fig.string();
  c.graphs_dir = (d / "g").string();

  SUBCASE("none writes nothing") {
    c.graph_type = "none";
    const auto r = cmd_build_graph(c);
    CHECK(r.files.empty());
    CHECK(r.message.find("none") != std::string::npos);
    CHECK_FALSE(fs::exists(d / "g"));
  }
  SUBCASE("pdg needs a personalization model") {
    c.graph_type = "pdg";
    try {
      cmd_build_graph(c);
      FAIL("expected an error");
    } catch (const ContractError& e) {
      CHECK(std::string(e.what()).find("fit-personalization") != std::string::npos);
    }
  }
  SUBCASE("cosine weights equal the oracle cosines, rescaled") {
    c.graph_type = "cosine";
    cmd_build_graph(c);
    const auto g = load_graph(d / "g" / "figure1.json");
    const auto cs = load_corpus(fig);
    std::vector<std::map<std::string, double>> vec;
    std::map<std::string, double> df;
    for (const auto& s : cs[0].sentences()) {
      std::map<std::string, double> tf;
      for (const auto& t : s.tokens)
        if (!is_punctuation(t)) tf[porter_stem(t)] += 1;
      for (const auto& [k, x] : tf) df[k] += 1;
      vec.push_back(tf);
    }
    for (auto& v : vec)
      for (auto& [k, x] : v) x *= 1 + std::log(4.0 / df[k]);
    double mx = 0;
    oracle::Mat cos = oracle::zeros(4, 4);
    for (std::size_t u = 0; u < 4; ++u)
      for (std::size_t v = 0; v < 4; ++v)
        if (u != v) {
          cos[u][v] = oracle::cosine(vec[u], vec[v]);
          if (cos[u][v] <= 0.2) cos[u][v] = 0;
          mx = std::max(mx, cos[u][v]);
        }
    REQUIRE(mx > 0);
    for (std::size_t u = 0; u < 4; ++u)
      for (std::size_t v = 0; v < 4; ++v)
        CHECK(g.weight(u, v) == doctest::Approx(cos[u][v] / mx).epsilon(1e-12));
  }
}

TEST_CASE("train, summarize, evaluate, stats") {
  const fs::path d = fresh_dir("pipeline");
  const fs::path train = synthetic(d, "train.jsonl", 4, 1);
  const fs::path valid = synthetic(d, "valid.jsonl", 2, 2);
  RunConfig c = small(d / "run");
  c.graph_type = "adg";
  c.corpus = train.string();
  c.validation_corpus = valid.string();
  c.graphs_dir = (d / "g").string();
  RunConfig bg = c;
  cmd_build_graph(bg);
  bg.corpus = valid.string();
  cmd_build_graph(bg);

  cmd_train(c);
  const std::string h1 = slurp(d / "run" / "history.tsv");
  const fs::path ckpt = d / "run" / "model.ckpt";
  CHECK(fs::exists(ckpt));
  CHECK(fs::exists(d / "run" / "resolved_config.train.txt"));
  cmd_train(c);
  CHECK(slurp(d / "run" / "history.tsv") == h1);

  SUBCASE("lr 0 gives a flat history") {
    RunConfig z = c;
    z.lr = 0;
    z.out = (d / "flat").string();
    cmd_train(z);
    std::istringstream in(slurp(d / "flat" / "history.tsv"));
    std::string line, first;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      const std::string val = line.substr(line.rfind('\t') + 1);
      if (first.empty()) first = val;
      CHECK(val == first);
    }
  }
  SUBCASE("summaries are deterministic and non-empty") {
    RunConfig s = c;
    s.corpus = valid.string();
    s.checkpoint = ckpt.string();
    s.out = (d / "s1").string();
    cmd_summarize(s);
    s.out = (d / "s2").string();
    cmd_summarize(s);
    for (const auto& id : {"valid-00", "valid-01"}) {
      const std::string a = slurp(d / "s1" / (std::string(id) + ".txt"));
      CHECK_FALSE(a.empty());
      CHECK(a == slurp(d / "s2" / (std::string(id) + ".txt")));
    }
    RunConfig e = c;
    e.corpus = valid.string();
    e.summaries_dir = (d / "s1").string();
    e.out = (d / "eval").string();
    const auto r = cmd_evaluate(e);
    CHECK(r.message.rfind("system\tR-1\tR-2\tCI-low\tCI-high\n", 0) == 0);
    CHECK(fs::exists(d / "eval" / "rouge.tsv"));
  }
  SUBCASE("graph type must match the checkpoint") {
    RunConfig s = c;
    s.graph_type = "cosine";
    s.corpus = valid.string();
    s.checkpoint = ckpt.string();
    s.out = (d / "bad").string();
    CHECK_THROWS_AS(cmd_summarize(s), ContractError);
  }
  SUBCASE("stats with and without a checkpoint") {
    RunConfig s = c;
    s.corpus = valid.string();
    s.out = (d / "stats").string();
    const auto a = cmd_stats(s);
    CHECK(a.message.find("nodes\tedges\tavg_edge_weight\tavg_node_degree\trho_degree_salience") !=
          std::string::npos);
    CHECK(a.message.find("absent") != std::string::npos);
    s.checkpoint = ckpt.string();
    const auto b = cmd_stats(s);
    CHECK(b.message.find("absent") == std::string::npos);
    CHECK(fs::exists(d / "stats" / "nodes.adg.tsv"));
  }
}

TEST_CASE("stats on a triangle fixture") {
  const fs::path d = fresh_dir("triangle");
  SentenceGraph g(3, false, GraphType::Cosine);
  g.set_weight(0, 1, 1);
  g.set_weight(1, 2, 1);
  g.set_weight(0, 2, 1);
  save_graph(d / "tri.json", rescale_max1(g));
  RunConfig c;
  c.graph_type = "cosine";
  c.graphs_dir = d.string();
  const auto r = cmd_stats(c);
  CHECK(r.message.find("tri\tcosine\t3\t3\t1.000000\t2.000000\tabsent\n") != std::string::npos);
}

TEST_CASE("summary with an exact ten-word budget") {
  const fs::path d = fresh_dir("tenword");
  std::ofstream(d / "c.jsonl")
      << R"({"id": "t", "documents": [["one two three four five six seven eight nine ten.", "Short."]], "references": ["one two"]})"
      << "\n";
  // Train a model with no graph for a few iterations just to get a checkpoint.
  RunConfig c = small(d / "run");
  c.graph_type = "none";
  c.corpus = (d / "c.jsonl").string();
  c.validation_corpus = c.corpus;
  c.max_iterations = 2;
  c.validate_every = 1;
  cmd_train(c);
  c.checkpoint = (d / "run" / "model.ckpt").string();
  c.out = (d / "sum").string();
  c.limit_words = 10;
  cmd_summarize(c);
  CHECK(slurp(d / "sum" / "t.txt") == "one two three four five six seven eight nine ten.\n");
}

TEST_CASE("C API") {
  gcnsum_config* cfg = nullptr;
  REQUIRE(gcnsum_config_new(&cfg) == GCNSUM_OK);
  CHECK(gcnsum_config_set(cfg, "layers", "2") == GCNSUM_OK);
  CHECK(gcnsum_config_set(cfg, "bogus", "2") == GCNSUM_E_INVALID_ARGUMENT);
  CHECK(std::string(gcnsum_last_error()).find("bogus") != std::string::npos);
  CHECK(gcnsum_config_set(nullptr, "layers", "2") == GCNSUM_E_INVALID_ARGUMENT);
  char* text = nullptr;
  REQUIRE(gcnsum_config_to_text(cfg, &text) == GCNSUM_OK);
  CHECK(std::string(text).find("layers = 2") != std::string::npos);
  gcnsum_string_free(text);
  CHECK(gcnsum_run(cfg, "no-such-command", nullptr) == GCNSUM_E_INVALID_ARGUMENT);
  gcnsum_config_set(cfg, "graph-type", "none");
  char* msg = nullptr;
  CHECK(gcnsum_run(cfg, "build-graph", &msg) == GCNSUM_OK);
  CHECK(std::string(msg).find("none") != std::string::npos);
  gcnsum_string_free(msg);
  gcnsum_config_free(cfg);
  CHECK(gcnsum_command_count() == 7);
  CHECK(std::string(gcnsum_status_name(GCNSUM_E_IO)) == "io");

  const char* refs[] = {"the cat sat"};
  double r = 0;
  CHECK(gcnsum_rouge_recall("the cat", refs, 1, 1, 1, &r) == GCNSUM_OK);
  CHECK(r == doctest::Approx(2.0 / 3));

  gcnsum_corpus* corpus = nullptr;
  CHECK(gcnsum_corpus_load("/nonexistent/file.jsonl", &corpus) == GCNSUM_E_IO);
  REQUIRE(gcnsum_corpus_load((std::string(GCNSUM_FIXTURES) + "/figure1.jsonl").c_str(), &corpus) == GCNSUM_OK);
  CHECK(gcnsum_corpus_size(corpus) == 1);
  CHECK(std::string(gcnsum_corpus_cluster_id(corpus, 0)) == "figure1");
  CHECK(gcnsum_corpus_cluster_sentences(corpus, 0) == 4);
  gcnsum_corpus_free(corpus);
}

TEST_CASE("command-line binary") {
  const fs::path d = fresh_dir("binary");
  const std::string cli = GCNSUM_CLI;
  SUBCASE("errors are one prefixed line and a nonzero exit") {
    const auto r = sh(cli + " build-graph --graph-type pdg --corpus " + GCNSUM_FIXTURES + "/figure1.jsonl");
    CHECK(r.code != 0);
    CHECK(r.out.rfind("gcnsum: error[contract]: ", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  }
  SUBCASE("flags override the config file") {
    std::ofstream(d / "run.cfg") << "graph-type = pdg\nclusters = 9\n";
    const auto r = sh(cli + " make-synthetic --config " + (d / "run.cfg").string() +
                      " --clusters 2 --out " + (d / "syn.jsonl").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("wrote 2 synthetic clusters") != std::string::npos);
  }
  SUBCASE("help lists the subcommands") {
    const auto r = sh(cli + " --help");
    for (const char* c : {"build-graph", "fit-personalization", "train", "summarize", "evaluate", "stats"})
      CHECK(r.out.find(c) != std::string::npos);
  }
}
