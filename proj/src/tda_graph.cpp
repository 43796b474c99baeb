#include "qfraud/tda_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace qfraud {

void CoverSpec::validate() const {
  if (n_intervals < 1) throw std::invalid_argument("cover: n_intervals must be positive");
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0)) {
    throw std::invalid_argument("cover: overlap_frac must lie in [0, 1)");
  }
}

void DbscanSpec::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("dbscan: eps must be > 0");
  if (min_pts < 1) throw std::invalid_argument("dbscan: min_pts must be positive");
}

void TdaSpec::validate() const {
  const double norm = std::hypot(projection[0], projection[1], projection[2]);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("tda: projection vector must be finite and non-zero");
  }
  cover.validate();
  dbscan.validate();
}

std::vector<std::vector<int>> TransactionGraph::neighbours() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

PointCloud build_point_cloud(const Transaction& t) {
  PointCloud cloud;
  for (std::size_t j = 0; j < kNumPcaFeatures; ++j) cloud.points[j] = {t.time, t.v[j], t.amount};
  return cloud;
}

std::array<double, kNumPcaFeatures> project_1d(const PointCloud& cloud,
                                               const std::array<double, 3>& direction) {
  const double norm = std::hypot(direction[0], direction[1], direction[2]);
  const std::array<double, 3> w{direction[0] / norm, direction[1] / norm, direction[2] / norm};
  std::array<double, kNumPcaFeatures> f{};
  for (std::size_t j = 0; j < kNumPcaFeatures; ++j) {
    const auto& p = cloud.points[j];
    f[j] = w[0] * p[0] + w[1] * p[1] + w[2] * p[2];
  }
  return f;
}

std::vector<int> dbscan(const std::vector<double>& values, const DbscanSpec& spec) {
  spec.validate();
  if (values.empty()) throw std::invalid_argument("dbscan: no values");
  const std::size_t n = values.size();

  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= spec.eps) nbrs[i].push_back(j);
    }
  }
  auto is_core = [&](std::size_t i) {
    return nbrs[i].size() >= static_cast<std::size_t>(spec.min_pts);
  };

  constexpr int kUnassigned = -2;
  std::vector<int> labels(n, kUnassigned);
  int next_cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnassigned) continue;
    if (!is_core(i)) {
      labels[i] = -1;  // may still be claimed as a border point later
      continue;
    }
    const int cluster = next_cluster++;
    labels[i] = cluster;
    std::deque<std::size_t> frontier{i};
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : nbrs[p]) {
        if (labels[q] >= 0) continue;
        labels[q] = cluster;
        if (is_core(q)) frontier.push_back(q);
      }
    }
  }
  return labels;
}

std::pair<double, double> cover_interval(double min_f, double max_f, const CoverSpec& cover,
                                         int i) {
  const double range = max_f - min_f;
  const double step = 1.0 - cover.overlap_frac;
  const double denom = 1.0 + (cover.n_intervals - 1) * step;
  const double lo = i == 0 ? min_f : min_f + range * (i * step) / denom;
  const double hi = i == cover.n_intervals - 1 ? max_f : min_f + range * (i * step + 1.0) / denom;
  return {lo, hi};
}

std::vector<Cluster> cover_and_cluster(const std::vector<double>& f, const CoverSpec& cover,
                                       const DbscanSpec& db) {
  cover.validate();
  db.validate();
  if (f.empty()) throw std::invalid_argument("cover_and_cluster: no points");

  const auto [min_it, max_it] = std::minmax_element(f.begin(), f.end());
  const double min_f = *min_it, max_f = *max_it;
  const int n_intervals = max_f > min_f ? cover.n_intervals : 1;

  std::set<Cluster> unique;
  std::vector<bool> covered(f.size(), false);
  for (int i = 0; i < n_intervals; ++i) {
    const auto [lo, hi] = n_intervals == 1 ? std::pair{min_f, max_f}
                                           : cover_interval(min_f, max_f, cover, i);
    std::vector<int> members;
    std::vector<double> values;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f[j] >= lo && f[j] <= hi) {
        members.push_back(static_cast<int>(j));
        values.push_back(f[j]);
      }
    }
    if (members.empty()) continue;
    const auto labels = dbscan(values, db);
    const int n_clusters = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<Cluster> local(static_cast<std::size_t>(std::max(n_clusters, 0)));
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (labels[m] < 0) continue;
      local[labels[m]].push_back(members[m]);
      covered[members[m]] = true;
    }
    for (auto& c : local) unique.insert(std::move(c));  // members already ascending
  }
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (!covered[j]) unique.insert(Cluster{static_cast<int>(j)});
  }
  // std::set orders lexicographically, which is by smallest member first.
  return {unique.begin(), unique.end()};
}

TransactionGraph build_graph(const std::vector<Cluster>& clusters, const Transaction& t) {
  if (clusters.empty()) throw std::invalid_argument("build_graph: no clusters");
  TransactionGraph g;
  g.label = t.label;
  g.source_row = t.source_row;
  g.nodes.resize(clusters.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    if (clusters[k].empty()) throw std::invalid_argument("build_graph: empty cluster");
    g.nodes[k].fill(0.0);
    for (int j : clusters[k]) {
      if (j < 0 || static_cast<std::size_t>(j) >= kNumPcaFeatures) {
        throw std::invalid_argument("build_graph: feature index out of range");
      }
      g.nodes[k][j] = t.v[j];
    }
  }
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    for (std::size_t l = k + 1; l < clusters.size(); ++l) {
      const auto& a = clusters[k];
      const auto& b = clusters[l];
      // Both sorted: linear merge test for a shared index.
      std::size_t x = 0, y = 0;
      bool shared = false;
      while (!shared && x < a.size() && y < b.size()) {
        if (a[x] == b[y]) shared = true;
        else if (a[x] < b[y]) ++x;
        else ++y;
      }
      if (shared) g.edges.emplace_back(static_cast<int>(k), static_cast<int>(l));
    }
  }
  return g;
}

AdjacencyMatrix adjacency(const TransactionGraph& g) {
  AdjacencyMatrix m;
  m.n = g.num_nodes();
  m.a.assign(m.n * m.n, 0);
  for (auto [i, j] : g.edges) {
    if (i == j) continue;
    m.a[i * m.n + j] = 1;
    m.a[j * m.n + i] = 1;
  }
  return m;
}

TransactionGraph transaction_to_graph(const Transaction& t, const TdaSpec& spec) {
  const auto f = project_1d(build_point_cloud(t), spec.projection);
  const auto clusters =
      cover_and_cluster(std::vector<double>(f.begin(), f.end()), spec.cover, spec.dbscan);
  return build_graph(clusters, t);
}

std::vector<TransactionGraph> build_corpus(const TransactionSet& set, const TdaSpec& spec) {
  spec.validate();
  std::vector<TransactionGraph> out;
  out.reserve(set.size());
  for (const auto& t : set.rows) out.push_back(transaction_to_graph(t, spec));
  return out;
}

}  // namespace qfraud
