#pragma once

#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "qfraud/rng.hpp"
#include "qfraud/tda_graph.hpp"

namespace fixture {

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("qfraud_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Connected-ish random graph with 1..max_nodes nodes and sparse features.
inline qfraud::TransactionGraph random_graph(qfraud::Rng& rng, int max_nodes = 5,
                                             double scale = 1.0) {
  qfraud::TransactionGraph g;
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes)));
  g.nodes.resize(n);
  for (auto& node : g.nodes) {
    for (auto& x : node) x = rng.bernoulli(0.3) ? scale * rng.normal() : 0.0;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.bernoulli(0.5)) g.edges.emplace_back(a, b);
    }
  }
  g.label = rng.bernoulli(0.5) ? 1 : 0;
  return g;
}

// Four graphs: two with positive features labelled 1, their negations labelled 0.
inline std::vector<qfraud::TransactionGraph> separable_four() {
  std::vector<qfraud::TransactionGraph> out;
  for (int k = 0; k < 2; ++k) {
    qfraud::TransactionGraph g;
    g.nodes.resize(3);
    for (int n = 0; n < 3; ++n) {
      for (int j = 0; j < 28; ++j) {
        if (j % 3 == n) g.nodes[n][j] = 1.0 + 0.25 * k + 0.05 * j;
      }
    }
    g.edges = {{0, 1}, {1, 2}};
    g.label = 1;
    g.source_row = 2 * k;
    qfraud::TransactionGraph neg = g;
    for (auto& node : neg.nodes)
      for (auto& x : node) x = -x;
    neg.label = 0;
    neg.source_row = 2 * k + 1;
    out.push_back(g);
    out.push_back(neg);
  }
  return out;
}

}  // namespace fixture
