#include "qfraud/graph_io.hpp"

#include <charconv>
#include <fstream>

#include "qfraud/error.hpp"
#include "qfraud/text_io.hpp"

namespace qfraud {
namespace {

long long parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  long long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw DataError("graph record: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::string_view expect_key(std::string_view field, std::string_view key) {
  if (field.size() <= key.size() || field.substr(0, key.size()) != key ||
      field[key.size()] != '=') {
    throw DataError("graph record: expected field '" + std::string(key) + "='");
  }
  return field.substr(key.size() + 1);
}

}  // namespace

std::string format_graph_record(const TransactionGraph& g) {
  std::string out = "row=" + std::to_string(g.source_row) + "\tlabel=" + std::to_string(g.label) +
                    "\tnodes=";
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    if (k) out += ';';
    for (std::size_t j = 0; j < kNumPcaFeatures; ++j) {
      if (j) out += ',';
      out += format_double(g.nodes[k][j]);
    }
  }
  out += "\tedges=";
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (e) out += ';';
    out += std::to_string(g.edges[e].first) + '-' + std::to_string(g.edges[e].second);
  }
  return out;
}

TransactionGraph parse_graph_record(std::string_view line) {
  const auto fields = split(trim(line), '\t');
  if (fields.size() != 4) throw DataError("graph record: expected 4 tab-separated fields");
  TransactionGraph g;
  g.source_row = parse_int(expect_key(fields[0], "row"), "row");
  g.label = static_cast<int>(parse_int(expect_key(fields[1], "label"), "label"));
  if (g.label != 0 && g.label != 1) throw DataError("graph record: label must be 0 or 1");

  const auto nodes = expect_key(fields[2], "nodes");
  if (nodes.empty()) throw DataError("graph record: graph has no nodes");
  for (auto node : split(nodes, ';')) {
    const auto values = split(node, ',');
    if (values.size() != kNumPcaFeatures) {
      throw DataError("graph record: node needs " + std::to_string(kNumPcaFeatures) + " values");
    }
    std::array<double, kNumPcaFeatures> vec{};
    for (std::size_t j = 0; j < kNumPcaFeatures; ++j) {
      auto v = parse_double(values[j]);
      if (!v) throw DataError("graph record: bad node value '" + std::string(values[j]) + "'");
      vec[j] = *v;
    }
    g.nodes.push_back(vec);
  }

  const auto edges = expect_key(fields[3], "edges");
  if (!edges.empty()) {
    for (auto e : split(edges, ';')) {
      const auto ends = split(e, '-');
      if (ends.size() != 2) throw DataError("graph record: bad edge '" + std::string(e) + "'");
      const auto a = parse_int(ends[0], "edge endpoint");
      const auto b = parse_int(ends[1], "edge endpoint");
      const auto n = static_cast<long long>(g.nodes.size());
      if (a < 0 || b < 0 || a >= n || b >= n || a >= b) {
        throw DataError("graph record: edge '" + std::string(e) + "' out of range");
      }
      g.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return g;
}

std::string format_corpus(const std::vector<TransactionGraph>& graphs) {
  std::string out;
  for (const auto& g : graphs) {
    out += format_graph_record(g);
    out += '\n';
  }
  return out;
}

void save_corpus(const std::filesystem::path& path, const std::vector<TransactionGraph>& graphs) {
  write_file_atomic(path, format_corpus(graphs));
}

std::vector<TransactionGraph> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("graph corpus '" + path.string() + "' not found");
  std::vector<TransactionGraph> graphs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      graphs.push_back(parse_graph_record(line));
    } catch (const DataError& e) {
      throw DataError("'" + path.string() + "' line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return graphs;
}

}  // namespace qfraud
