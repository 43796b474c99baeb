#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qfraud/tda_graph.hpp"

namespace qfraud {

// Graph corpus files hold one record per line, tab-separated:
//
//   row=<source row>  label=<0|1>  nodes=<node>;<node>;...  edges=<a>-<b>;...
//
// Each <node> is 28 comma-separated values. Edges use 0-based node indices
// with a < b. Nodes appear in the order produced by cover_and_cluster.

std::string format_graph_record(const TransactionGraph& g);
TransactionGraph parse_graph_record(std::string_view line);

std::string format_corpus(const std::vector<TransactionGraph>& graphs);
void save_corpus(const std::filesystem::path& path, const std::vector<TransactionGraph>& graphs);
std::vector<TransactionGraph> load_corpus(const std::filesystem::path& path);

}  // namespace qfraud
