// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/text.hpp"

#include <cctype>
#include <cmath>
#include <set>

namespace gcnsum {
namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool is_space_byte(unsigned char c) { return std::isspace(c) || c < 0x20; }

}  // namespace

std::vector<std::string> tokenize_cased(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c)) {
      ++i;
    } else if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, text[i]);
      ++i;
    }
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  auto toks = tokenize_cased(text);
  for (auto& t : toks) t = to_lower(t);
  return toks;
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token)
    if (is_word_byte(static_cast<unsigned char>(c))) return false;
  return true;
}

std::size_t word_count(const std::vector<std::string>& tokens) {
  std::size_t n = 0;
  for (const auto& t : tokens)
    if (!is_punctuation(t)) ++n;
  return n;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = 0, e = cur.size();
    while (b < e && std::isspace(static_cast<unsigned char>(cur[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(cur[e - 1]))) --e;
    if (e > b) out.push_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    cur.push_back(text[i]);
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))))
      flush();
  }
  flush();
  return out;
}

double cosine(const SparseVector& u, const SparseVector& v) {
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (const auto& [k, x] : u) {
    nu += x * x;
    auto it = v.find(k);
    if (it != v.end()) dot += x * it->second;
  }
  for (const auto& [k, y] : v) nv += y * y;
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return c > 1.0 ? 1.0 : (c < 0.0 ? 0.0 : c);
}

std::vector<std::string> tfidf_terms(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!is_punctuation(t)) out.push_back(porter_stem(t));
  return out;
}

TfIdfModel::TfIdfModel(const std::vector<std::vector<std::string>>& sentences)
    : n_(sentences.size()) {
  std::map<std::string, std::size_t> df;
  for (const auto& s : sentences) {
    const auto terms = tfidf_terms(s);
    for (const auto& t : std::set<std::string>(terms.begin(), terms.end())) ++df[t];
  }
  for (const auto& [t, d] : df)
    idf_[t] = 1.0 + std::log(static_cast<double>(n_) / static_cast<double>(d));
}

double TfIdfModel::idf(const std::string& term) const {
  auto it = idf_.find(term);
  return it == idf_.end() ? 0.0 : it->second;
}

SparseVector TfIdfModel::vector(const std::vector<std::string>& tokens) const {
  SparseVector tf;
  for (const auto& t : tfidf_terms(tokens))
    if (idf_.count(t)) tf[t] += 1.0;
  for (auto& [t, w] : tf) w *= idf_.at(t);
  return tf;
}

}  // namespace gcnsum
