#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "qfraud/dataset.hpp"

namespace qfraud {

/// Per-feature 3-D points (time, V_j, amount) of one transaction. Point j
/// carries feature V_{j+1}; time and amount are shared by all points.
struct PointCloud {
  std::array<std::array<double, 3>, kNumPcaFeatures> points{};
};

struct CoverSpec {
  int n_intervals = 4;
  double overlap_frac = 0.5;

  void validate() const;
};

struct DbscanSpec {
  double eps = 0.1;
  int min_pts = 2;

  void validate() const;
};

/// Mapper-style lens, cover and clusterer settings.
struct TdaSpec {
  std::array<double, 3> projection{1.0, 1.0, 1.0};  // normalised before use
  CoverSpec cover;
  DbscanSpec dbscan;

  void validate() const;
};

/// One graph per transaction. Node k's feature vector holds V_j at each
/// coordinate j that belongs to cluster k and zero elsewhere.
struct TransactionGraph {
  std::vector<std::array<double, kNumPcaFeatures>> nodes;
  std::vector<std::pair<int, int>> edges;  // undirected, first < second, sorted
  int label = 0;
  std::int64_t source_row = -1;

  std::size_t num_nodes() const { return nodes.size(); }

  /// Neighbour lists derived from `edges`, each sorted ascending.
  std::vector<std::vector<int>> neighbours() const;

  friend bool operator==(const TransactionGraph&, const TransactionGraph&) = default;
};

/// Dense 0/1 matrix, row-major.
struct AdjacencyMatrix {
  std::size_t n = 0;
  std::vector<int> a;

  int operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// A cluster is a sorted list of 0-based feature indices.
using Cluster = std::vector<int>;

PointCloud build_point_cloud(const Transaction& t);

/// f_j = w . P_j with w the unit vector along `direction`.
std::array<double, kNumPcaFeatures> project_1d(const PointCloud& cloud,
                                               const std::array<double, 3>& direction);

/// DBSCAN on scalar values. A point is core when at least `min_pts` values
/// (itself included) lie within eps inclusive. Points are scanned in index
/// order, so border points join the earliest-created cluster that reaches
/// them. Noise is labelled -1.
std::vector<int> dbscan(const std::vector<double>& values, const DbscanSpec& spec);

/// Interval [lo, hi] of cover element `i` over the range [min_f, max_f].
std::pair<double, double> cover_interval(double min_f, double max_f, const CoverSpec& cover,
                                         int i);

/// Covers the range of `f` with overlapping intervals, runs DBSCAN inside
/// each, and returns all clusters. Identical member sets are reported once;
/// indices that end up in no cluster become singletons. Ordered by smallest
/// member, then lexicographically.
std::vector<Cluster> cover_and_cluster(const std::vector<double>& f, const CoverSpec& cover,
                                       const DbscanSpec& db);

/// One node per cluster; an edge joins clusters sharing any index.
TransactionGraph build_graph(const std::vector<Cluster>& clusters, const Transaction& t);

AdjacencyMatrix adjacency(const TransactionGraph& g);

/// Full per-transaction pipeline. `t` is expected to be scaled already.
TransactionGraph transaction_to_graph(const Transaction& t, const TdaSpec& spec);

std::vector<TransactionGraph> build_corpus(const TransactionSet& set, const TdaSpec& spec);

}  // namespace qfraud
