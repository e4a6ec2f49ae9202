// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gcnsum/corpus.hpp"
#include "gcnsum/tensor.hpp"

namespace gcnsum {

enum class GraphType { Cosine, Adg, Pdg };

std::string to_string(GraphType t);
GraphType parse_graph_type(const std::string& s);

/// Processing stage, used to enforce build -> undirect -> rescale order.
enum class GraphStage { Built, Undirected, Rescaled };

/// Weighted sentence graph stored as a dense N x N matrix; entry (u, v) is
/// the weight of edge u -> v. The diagonal is always zero.
class SentenceGraph {
 public:
  SentenceGraph() = default;
  SentenceGraph(std::size_t n, bool directed, GraphType type);

  std::size_t size() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  GraphType type() const noexcept { return type_; }
  GraphStage stage() const noexcept { return stage_; }
  void set_stage(GraphStage s) { stage_ = s; }

  double weight(std::size_t u, std::size_t v) const { return w_[u * n_ + v]; }
  /// Sets u -> v (and v -> u when undirected). Self-loops are rejected.
  void set_weight(std::size_t u, std::size_t v, double w);

  /// Edges with positive weight. Undirected graphs list each pair once (u < v).
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges() const;
  std::size_t edge_count() const;
  double max_weight() const;

  const std::vector<double>& dense() const noexcept { return w_; }

 private:
  std::size_t n_ = 0;
  bool directed_ = false;
  GraphType type_ = GraphType::Cosine;
  GraphStage stage_ = GraphStage::Built;
  std::vector<double> w_;
};

/// Dense D^{-1/2} (A + I) D^{-1/2}.
struct RenormalizedAdjacency {
  std::size_t n = 0;
  Tensor matrix;
};

SentenceGraph build_cosine_graph(const Cluster& cluster, double threshold = 0.2);

/// Approximate discourse graph. For each eligible ordered pair (u, v) the
/// weight is 0.5 times the number of firing indicators:
///   1. v starts with a discourse marker and u immediately precedes v in the
///      same document;
///   2. u and v share a proper-noun stem;
///   3. u and v share a common-noun stem;
///   4. v has a deverbal noun whose stem is a verb stem of u;
///   5. u and v share a verb stem.
/// Eligible pairs: same-document u before v at most 3 positions apart, and
/// cross-document pairs sharing a proper-noun stem (directed from the lower
/// cluster index to the higher).
SentenceGraph build_adg(const Cluster& cluster);

inline constexpr double kMinPersonalization = 1e-3;

/// Linear model from the eight surface features to a personalization score.
struct PersonalizationModel {
  std::array<double, kNumFeatures> weights{};
  double bias = 0.0;
  bool ridge_fallback = false;
  std::size_t training_rows = 0;

  /// max(kMinPersonalization, w . f + b)
  double score(const SentenceFeatures& f) const;
  std::vector<double> scores(const Cluster& cluster) const;

  std::string to_json() const;
  static PersonalizationModel from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static PersonalizationModel load(const std::filesystem::path& path);
};

inline constexpr double kRidgeLambda = 1e-3;

/// Least squares on raw feature rows; switches to ridge (bias unpenalized)
/// when the design matrix is rank deficient.
PersonalizationModel fit_linear(const std::vector<std::array<double, kNumFeatures>>& rows,
                                const std::vector<double>& targets);

/// Regresses features onto the per-sentence ROUGE target r(s) of every
/// training cluster. Clusters must carry references.
PersonalizationModel fit_personalization(std::span<const Cluster> clusters);

/// w'(u, v) = w(u, v) s(u) / sum_u' w(u', v) s(u').
SentenceGraph build_pdg(const SentenceGraph& adg, std::span<const double> scores);

SentenceGraph undirect(const SentenceGraph& g);
SentenceGraph rescale_max1(const SentenceGraph& g);
RenormalizedAdjacency renormalized_adjacency(const SentenceGraph& g);

/// Full pipeline for one cluster: build, undirect when directed, rescale.
/// `personalization` is required for GraphType::Pdg.
SentenceGraph build_graph(const Cluster& cluster, GraphType type,
                          const PersonalizationModel* personalization = nullptr);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double avg_edge_weight = 0.0;
  double avg_node_degree = 0.0;
  std::optional<double> rho;  // empty: no salience, or zero variance
  std::vector<double> degrees;
};

std::vector<double> node_degrees(const SentenceGraph& g);
/// Pearson correlation; empty when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
GraphStats graph_stats(const SentenceGraph& g, std::span<const double> salience = {});

// JSON exchange format: {"n", "directed", "type", "edges": [[u, v, w], ...]}.
std::string graph_to_json(const SentenceGraph& g);
SentenceGraph graph_from_json(const std::string& text);
void save_graph(const std::filesystem::path& path, const SentenceGraph& g);
SentenceGraph load_graph(const std::filesystem::path& path);

}  // namespace gcnsum
