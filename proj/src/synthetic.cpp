// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include "gcnsum/synthetic.hpp"

#include <random>

#include "gcnsum/error.hpp"

namespace gcnsum {
namespace {

const std::vector<std::string> kPeople = {
    "Maria Lopez", "John Carter", "Ahmed Khan", "Li Wei", "Anna Petrova", "David Miller",
    "Sara Cohen", "Kofi Mensah", "Elena Rossi", "Tom Baker", "Ines Duarte", "Omar Haddad",
    "Grace Okafor", "Henrik Berg", "Yuki Tanaka", "Paul Martin"};
const std::vector<std::string> kPlaces = {"Geneva", "Nairobi", "Lima",  "Oslo",  "Manila",
                                          "Cairo",  "Denver",  "Hanoi", "Quito", "Dublin",
                                          "Dakar",  "Tbilisi"};
const std::vector<std::string> kOrgs = {"Red Cross", "World Bank", "Senate", "Parliament",
                                        "Health Ministry", "Supreme Court", "Coast Guard",
                                        "Energy Agency"};
const std::vector<std::string> kEvents = {"earthquake", "election", "flood",    "summit",
                                          "strike",     "trial",    "merger",   "storm",
                                          "outbreak",   "protest",  "wildfire", "drought"};
const std::vector<std::string> kVerbs = {
    "announced", "reported", "confirmed", "approved",  "rejected", "launched",
    "examined",  "criticized", "welcomed", "delayed",  "arrested", "evacuated",
    "funded",    "questioned", "defended", "organized"};
const std::vector<std::string> kDeverbal = {"announcement", "investigation", "approval",
                                            "agreement",    "evacuation",    "development",
                                            "assessment",   "settlement"};
const std::vector<std::string> kNouns = {
    "officials", "residents", "government", "police", "report", "plan", "agency",
    "city", "workers", "families", "hospital", "aid", "talks", "vote", "court",
    "company", "market", "region", "troops", "schools", "roads", "budget", "volunteers",
    "farmers", "prices", "witnesses", "engineers", "lawmakers"};
const std::vector<std::string> kAdjectives = {"local", "national", "early", "major", "several",
                                              "heavy", "final", "senior", "regional", "urgent",
                                              "formal", "public"};
const std::vector<std::string> kMarkers = {"However", "Meanwhile", "Moreover", "In addition",
                                           "As a result", "Later"};
const std::vector<std::string> kDays = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday",
                                        "Saturday", "Sunday"};
const std::vector<std::string> kPlantedObjects = {
    "bridges", "homes", "clinics", "farms", "factories", "ports", "villages", "stations"};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  const std::string& pick(const std::vector<std::string>& v) { return v[uniform(0, v.size() - 1)]; }
  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

 private:
  std::mt19937_64 rng_;
};

struct Topic {
  std::string person_a, person_b, place, org, event;
  std::string planted_object;
  std::size_t planted_count;
};

std::string ordinary_sentence(Gen& g, const Topic& t, bool allow_marker) {
  std::string s;
  if (allow_marker && g.coin(0.3)) s = g.pick(kMarkers) + ", ";
  auto cap = [](std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
  };
  const std::size_t form = g.uniform(0, 4);
  std::string body;
  switch (form) {
    case 0:
      body = "the " + g.pick(kAdjectives) + " " + g.pick(kNouns) + " in " + t.place + " " +
             g.pick(kVerbs) + " the " + g.pick(kNouns) + " after the " + t.event + " on " +
             g.pick(kDays);
      break;
    case 1:
      body = t.person_a + " " + g.pick(kVerbs) + " the " + g.pick(kDeverbal) + " of the " +
             g.pick(kNouns) + " and said the " + g.pick(kNouns) + " would need " +
             g.pick(kAdjectives) + " support";
      break;
    case 2:
      body = "the " + t.org + " " + g.pick(kVerbs) + " a " + g.pick(kAdjectives) + " " +
             g.pick(kDeverbal) + " while " + g.pick(kNouns) + " and " + g.pick(kNouns) +
             " waited for news from " + t.place;
      break;
    case 3:
      body = t.person_b + " told " + g.pick(kNouns) + " that the " + g.pick(kNouns) +
             " had " + g.pick(kVerbs) + " an " + g.pick(kDeverbal) + " of the " + t.event +
             " response";
      break;
    default:
      body = "several " + g.pick(kNouns) + " " + g.pick(kVerbs) + " the " + g.pick(kAdjectives) +
             " " + g.pick(kNouns) + " as the " + t.event + " continued across the " +
             g.pick(kNouns);
      break;
  }
  s += s.empty() ? cap(body) : body;
  return s + ".";
}

std::string short_sentence(Gen& g, const Topic& t) {
  return (g.coin(0.5) ? t.person_b : t.person_a) + " declined to comment.";
}

std::string planted_sentence(const Topic& t) {
  return t.person_a + " said the " + t.event + " in " + t.place + " destroyed " +
         std::to_string(t.planted_count) + " " + t.planted_object +
         " and forced thousands of families to leave their homes.";
}

std::string reference_summary(const Topic& t) {
  return "The " + t.event + " in " + t.place + " destroyed " + std::to_string(t.planted_count) +
         " " + t.planted_object + " and forced thousands of families to leave their homes, " +
         t.person_a + " said.";
}

}  // namespace

std::vector<SyntheticCluster> make_synthetic(const SyntheticOptions& o) {
  if (o.clusters == 0 || o.min_documents == 0 || o.min_documents > o.max_documents ||
      o.min_sentences < 2 || o.min_sentences > o.max_sentences)
    throw InvalidArgument("synthetic: inconsistent options");
  Gen g(o.seed);
  std::vector<SyntheticCluster> out;
  for (std::size_t c = 0; c < o.clusters; ++c) {
    Topic t;
    t.person_a = g.pick(kPeople);
    do t.person_b = g.pick(kPeople); while (t.person_b == t.person_a);
    t.place = g.pick(kPlaces);
    t.org = g.pick(kOrgs);
    t.event = g.pick(kEvents);
    t.planted_object = g.pick(kPlantedObjects);
    t.planted_count = g.uniform(12, 480);

    const std::size_t m = g.uniform(o.min_documents, o.max_documents);
    std::vector<std::vector<std::string>> docs(m);
    for (auto& d : docs) {
      const std::size_t n = g.uniform(o.min_sentences, o.max_sentences);
      for (std::size_t i = 0; i < n; ++i)
        d.push_back(i > 0 && g.coin(0.12) ? short_sentence(g, t) : ordinary_sentence(g, t, i > 0));
    }
    const std::size_t pd = g.uniform(0, m - 1);
    const std::size_t pp = g.uniform(0, docs[pd].size() - 1);
    docs[pd][pp] = planted_sentence(t);
    std::size_t planted = pp;
    for (std::size_t d = 0; d < pd; ++d) planted += docs[d].size();

    std::string id = o.id_prefix + std::string(c < 10 ? "0" : "") + std::to_string(c);
    out.push_back({Cluster::from_documents(std::move(id), docs, {reference_summary(t)}), planted});
  }
  return out;
}

std::vector<Cluster> make_synthetic_corpus(const SyntheticOptions& options) {
  std::vector<Cluster> out;
  for (auto& s : make_synthetic(options)) out.push_back(std::move(s.cluster));
  return out;
}

}  // namespace gcnsum
