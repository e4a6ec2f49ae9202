// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "gcnsum/error.hpp"
#include "gcnsum/text.hpp"
#include "json.hpp"

namespace gcnsum {

using json = nlohmann::json;

Cluster Cluster::from_documents(std::string id,
                                const std::vector<std::vector<std::string>>& documents,
                                std::vector<std::string> references) {
  if (documents.empty()) throw ContractError("cluster '" + id + "' has no documents");
  Cluster c;
  c.id_ = std::move(id);
  for (std::size_t d = 0; d < documents.size(); ++d) {
    if (documents[d].empty())
      throw ContractError("cluster '" + c.id_ + "': document " + std::to_string(d) +
                          " has no sentences");
    for (std::size_t p = 0; p < documents[d].size(); ++p) {
      Sentence s;
      s.index = c.sentences_.size();
      s.document = d;
      s.position = p;
      s.text = documents[d][p];
      s.cased_tokens = tokenize_cased(s.text);
      if (s.cased_tokens.empty())
        throw ContractError("cluster '" + c.id_ + "': document " + std::to_string(d) +
                            " sentence " + std::to_string(p) + " has no tokens");
      s.tokens.reserve(s.cased_tokens.size());
      for (const auto& t : s.cased_tokens) s.tokens.push_back(to_lower(t));
      s.word_count = word_count(s.tokens);
      c.sentences_.push_back(std::move(s));
    }
    c.offsets_.push_back(c.sentences_.size());
  }
  c.references_ = std::move(references);
  for (const auto& r : c.references_) c.reference_tokens_.push_back(tokenize(r));
  return c;
}

std::vector<std::vector<std::string>> Cluster::documents() const {
  std::vector<std::vector<std::string>> docs(num_documents());
  for (const auto& s : sentences_) docs[s.document].push_back(s.text);
  return docs;
}

Cluster Cluster::permute_documents(const std::vector<std::size_t>& order) const {
  const auto docs = documents();
  if (order.size() != docs.size()) throw InvalidArgument("permute_documents: bad order size");
  std::vector<std::vector<std::string>> out;
  out.reserve(order.size());
  for (auto d : order) out.push_back(docs.at(d));
  return from_documents(id_, out, references_);
}

// --- JSONL --------------------------------------------------------------

namespace {

Cluster parse_cluster_line(const std::string& line, const std::string& where) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j.contains("documents"))
    throw ParseError(where + ": expected an object with \"id\" and \"documents\"");
  try {
    std::string id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                            : j.at("id").dump();
    auto docs = j.at("documents").get<std::vector<std::vector<std::string>>>();
    std::vector<std::string> refs;
    if (j.contains("references")) refs = j.at("references").get<std::vector<std::string>>();
    return Cluster::from_documents(std::move(id), docs, std::move(refs));
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const ContractError& e) {
    throw ContractError(where + ": " + e.what());
  }
}

}  // namespace

std::vector<Cluster> parse_corpus(const std::string& jsonl, const std::string& source) {
  std::vector<Cluster> out;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_cluster_line(line, source + ":" + std::to_string(lineno)));
  }
  return out;
}

std::vector<Cluster> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str(), path.string());
}

void save_corpus(const std::filesystem::path& path, const std::vector<Cluster>& clusters) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus " + path.string());
  for (const auto& c : clusters) {
    json j;
    j["id"] = c.id();
    j["documents"] = c.documents();
    j["references"] = c.references();
    out << j.dump() << '\n';
  }
}

// --- vocabulary and embeddings ------------------------------------------

Vocabulary::Vocabulary() { add(kUnknown); }

Vocabulary::Vocabulary(const std::vector<std::string>& words) : Vocabulary() {
  for (const auto& w : words) add(w);
}

Vocabulary Vocabulary::from_clusters(const std::vector<const Cluster*>& clusters) {
  std::set<std::string> words;
  for (const Cluster* c : clusters)
    for (const auto& s : c->sentences())
      words.insert(s.tokens.begin(), s.tokens.end());
  return Vocabulary(std::vector<std::string>(words.begin(), words.end()));
}

std::size_t Vocabulary::add(const std::string& w) {
  auto [it, inserted] = index_.emplace(w, words_.size());
  if (inserted) words_.push_back(w);
  return it->second;
}

std::size_t Vocabulary::lookup(const std::string& w) const {
  auto it = index_.find(w);
  return it == index_.end() ? 0 : it->second;
}

std::vector<std::size_t> Vocabulary::lookup(const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(lookup(t));
  return ids;
}

EmbeddingTable random_embeddings(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("embedding dimension must be positive");
  EmbeddingTable t;
  t.vocab = vocab;
  t.matrix = Tensor({vocab.size(), dim});
  t.pretrained.assign(vocab.size(), false);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (auto& v : t.matrix.values()) v = u(rng);
  return t;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                               std::size_t dim, std::uint64_t seed) {
  EmbeddingTable t = random_embeddings(vocab, dim, seed);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    vals.clear();
    std::string tok;
    bool ok = true;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        ok = ok && used == tok.size();
      } catch (const std::exception&) {
        ok = false;
      }
    }
    const auto where = path.string() + ":" + std::to_string(lineno);
    if (lineno == 1 && vals.size() == 1 && ok &&
        word.find_first_not_of("0123456789") == std::string::npos) {
      if (static_cast<std::size_t>(vals[0]) != dim)
        throw DimensionError(where + ": embedding file has dimension " +
                             std::to_string(static_cast<std::size_t>(vals[0])) +
                             ", configured " + std::to_string(dim));
      continue;
    }
    if (!ok) throw ParseError(where + ": malformed embedding value");
    if (vals.size() != dim)
      throw DimensionError(where + ": embedding row has " + std::to_string(vals.size()) +
                           " values, configured dimension " + std::to_string(dim));
    std::size_t id = vocab.lookup(word);
    if (id == 0) id = vocab.lookup(to_lower(word));
    if (id == 0 || t.pretrained[id]) continue;
    std::copy(vals.begin(), vals.end(), t.matrix.row(id).begin());
    t.pretrained[id] = true;
  }
  return t;
}

}  // namespace gcnsum
