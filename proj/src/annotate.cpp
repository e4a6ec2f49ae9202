// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

// Heuristic tagging behind the personalization features and the discourse
// graph indicators. No POS tagger or coreference system is involved: proper
// nouns come from capitalization, verbs and nouns from suffix rules plus a
// small irregular-verb list, co-reference from stem matches.

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "gcnsum/corpus.hpp"
#include "gcnsum/text.hpp"

namespace gcnsum {
namespace {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
      "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing",
      "down", "during", "each", "few", "for", "from", "further", "had", "has", "have",
      "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
      "i", "if", "in", "into", "is", "it", "its", "itself", "just", "me", "more", "most",
      "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
      "other", "our", "ours", "out", "over", "own", "same", "she", "should", "so", "some",
      "such", "than", "that", "the", "their", "theirs", "them", "themselves", "then",
      "there", "these", "they", "this", "those", "through", "to", "too", "under", "until",
      "up", "very", "was", "we", "were", "what", "when", "where", "which", "while", "who",
      "whom", "why", "will", "with", "would", "you", "your", "yours", "also", "however",
      "may", "might", "must", "shall", "mr", "mrs", "ms", "many", "much", "new", "said",
      "says", "say", "one", "two", "three", "first", "last", "yet", "still", "since",
      "although", "though", "thus", "therefore", "meanwhile", "moreover", "furthermore",
      "instead", "later", "earlier", "finally", "besides", "nevertheless", "nonetheless",
      "indeed", "hence", "otherwise", "likewise", "similarly", "consequently",
      "subsequently", "additionally", "previously", "afterwards", "second", "third"};
  return words;
}

// Frequent irregular or suffix-less verb forms. Regular forms are caught by
// the -ed / -ing rules.
const std::unordered_set<std::string>& verb_lexicon() {
  static const std::unordered_set<std::string> words = {
      "announce", "announces", "approve", "approves", "arrest", "arrests", "ask", "asks",
      "attack", "attacks", "became", "become", "becomes", "began", "begin", "begins",
      "bought", "brought", "build", "builds", "built", "buy", "came", "claim", "claims",
      "come", "comes", "declare", "declares", "deny", "denies", "died", "dies", "elect",
      "elects", "fell", "find", "finds", "fled", "fought", "found", "gave", "give", "gives",
      "grew", "held", "hit", "hold", "holds", "kill", "kills", "knew", "know", "left",
      "lost", "made", "make", "makes", "meet", "meets", "met", "paid", "pay", "pays",
      "ran", "rose", "run", "sent", "show", "shows", "sold", "speak", "speaks", "spoke",
      "struck", "take", "takes", "talk", "talks", "told", "took", "visit", "visits",
      "vote", "votes", "want", "wants", "went", "win", "wins", "won", "wrote", "launch",
      "launches", "sign", "signs", "warn", "warns", "report", "reports", "agree", "agrees",
      "leave", "leaves", "destroy", "destroys", "damage", "damages", "rescue", "rescues"};
  return words;
}

bool all_alpha(const std::string& w) {
  return !w.empty() &&
         std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isalpha(c); });
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

bool is_capitalized(const std::string& cased) {
  return cased.size() >= 2 && std::isupper(static_cast<unsigned char>(cased[0]));
}

bool is_all_caps(const std::string& cased) {
  if (cased.size() < 2) return false;
  bool letter = false;
  for (unsigned char c : cased) {
    if (std::islower(c)) return false;
    letter = letter || std::isupper(c);
  }
  return letter;
}

bool is_verb(const std::string& w) {
  if (verb_lexicon().count(w)) return true;
  return (w.size() >= 5 && ends_with(w, "ed")) || (w.size() >= 6 && ends_with(w, "ing"));
}

bool is_deverbal(const std::string& w) {
  if (w.size() < 7) return false;
  return ends_with(w, "tion") || ends_with(w, "ment") || ends_with(w, "ance") ||
         ends_with(w, "ence") || ends_with(w, "al");
}

// Index of the first word (non-punctuation) token, or npos.
std::size_t first_word(const Sentence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    if (!is_punctuation(s.tokens[i])) return i;
  return std::string::npos;
}

bool starts_with_marker(const Sentence& s) {
  std::vector<std::string> words;
  for (const auto& t : s.tokens)
    if (!is_punctuation(t)) words.push_back(t);
  for (const auto& m : discourse_markers()) {
    const auto parts = tokenize(m);
    if (parts.size() > words.size()) continue;
    if (std::equal(parts.begin(), parts.end(), words.begin())) return true;
  }
  return false;
}

}  // namespace

const std::vector<std::string>& discourse_markers() {
  static const std::vector<std::string> markers = {
      "however", "but", "and", "also", "moreover", "furthermore", "meanwhile",
      "therefore", "thus", "hence", "consequently", "instead", "nevertheless",
      "nonetheless", "still", "yet", "then", "later", "afterwards", "subsequently",
      "finally", "similarly", "likewise", "indeed", "in addition", "as a result",
      "for example", "for instance", "in contrast", "on the other hand", "in fact",
      "after that", "because", "since", "although", "though", "so", "besides",
      "otherwise", "earlier", "previously", "additionally", "at the same time"};
  return markers;
}

bool is_stopword(const std::string& lower_token) { return stopwords().count(lower_token) != 0; }

std::vector<SentenceAnnotation> annotate(const Cluster& cluster) {
  // Capitalized words seen in a non-initial position anywhere in the
  // cluster; a sentence-initial capitalized word is a proper noun only if it
  // appears here.
  std::unordered_set<std::string> mid_capitalized;
  for (const auto& s : cluster.sentences()) {
    const std::size_t f = first_word(s);
    for (std::size_t i = 0; i < s.cased_tokens.size(); ++i)
      if (i != f && is_capitalized(s.cased_tokens[i]) && all_alpha(s.cased_tokens[i]))
        mid_capitalized.insert(s.cased_tokens[i]);
  }

  std::vector<SentenceAnnotation> out;
  out.reserve(cluster.size());
  for (const auto& s : cluster.sentences()) {
    SentenceAnnotation a;
    a.starts_with_marker = starts_with_marker(s);
    const std::size_t f = first_word(s);
    std::vector<std::string> run;
    auto close_run = [&] {
      if (!run.empty()) a.proper_mentions.push_back(std::move(run));
      run.clear();
    };
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const std::string& lower = s.tokens[i];
      const std::string& cased = s.cased_tokens[i];
      if (!all_alpha(lower) || is_stopword(lower)) {
        close_run();
        continue;
      }
      bool proper = false;
      if (is_all_caps(cased)) {
        proper = true;
      } else if (is_capitalized(cased)) {
        proper = i != f || mid_capitalized.count(cased) != 0;
      }
      const std::string stem = porter_stem(lower);
      if (proper) {
        a.proper_nouns.push_back(stem);
        run.push_back(stem);
        continue;
      }
      close_run();
      if (is_verb(lower)) {
        a.verbs.push_back(stem);
      } else if (lower.size() >= 3 && !ends_with(lower, "ly")) {
        a.common_nouns.push_back(stem);
        if (is_deverbal(lower)) a.deverbal_nouns.push_back(stem);
      }
    }
    close_run();
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<SentenceFeatures> extract_features(const Cluster& cluster) {
  const auto ann = annotate(cluster);
  const std::size_t n = cluster.size();
  std::vector<SentenceFeatures> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Sentence& s = cluster.sentence(i);
    SentenceFeatures& f = out[i];
    const std::size_t len = cluster.doc_size(s.document);
    f.position = len > 1 ? static_cast<double>(s.position) / static_cast<double>(len - 1) : 0.0;
    f.in_first_three = s.position < 3 ? 1.0 : 0.0;
    f.proper_noun_count = static_cast<double>(ann[i].proper_nouns.size());
    f.length = static_cast<double>(s.word_count);
    f.over_twenty_tokens = s.word_count > 20 ? 1.0 : 0.0;

    const auto verbs = ann[i].verb_set();
    const auto commons = ann[i].common_set();
    const auto propers = ann[i].proper_set();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (const auto& v : ann[j].verbs) f.coref_verb_mentions += verbs.count(v) ? 1.0 : 0.0;
      for (const auto& c : ann[j].common_nouns)
        f.coref_common_noun_mentions += commons.count(c) ? 1.0 : 0.0;
      for (const auto& mention : ann[j].proper_mentions) {
        const bool hit = std::any_of(mention.begin(), mention.end(),
                                     [&](const std::string& p) { return propers.count(p) != 0; });
        f.coref_proper_noun_mentions += hit ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

}  // namespace gcnsum
