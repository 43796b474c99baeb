#include "qfraud/params.hpp"

#include <sstream>
#include <stdexcept>

#include "qfraud/error.hpp"
#include "qfraud/text_io.hpp"

namespace qfraud {

void ParamLayout::add(std::string name, std::size_t rows, std::size_t cols) {
  for (const auto& b : blocks_) {
    if (b.name == name) throw std::invalid_argument("duplicate parameter block '" + name + "'");
  }
  blocks_.push_back({std::move(name), rows, cols, size_});
  size_ += rows * cols;
}

const ParamBlock& ParamLayout::block(const std::string& name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return b;
  }
  throw std::out_of_range("no parameter block named '" + name + "'");
}

const std::string& Checkpoint::require(const std::string& key) const {
  auto it = meta.find(key);
  if (it == meta.end()) throw DataError("checkpoint is missing meta field '" + key + "'");
  return it->second;
}

std::string format_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.values.size() != ckpt.layout.size()) {
    throw std::invalid_argument("checkpoint: value count does not match layout");
  }
  std::string out = "qfraud-checkpoint 1\n";
  for (const auto& [k, v] : ckpt.meta) out += "meta " + k + " " + v + "\n";
  for (const auto& b : ckpt.layout.blocks()) {
    out += "array " + b.name + " " + std::to_string(b.rows) + " " + std::to_string(b.cols) + "\n";
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) out += ' ';
      out += format_double(ckpt.values[b.offset + i]);
    }
    out += '\n';
  }
  return out;
}

Checkpoint parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "qfraud-checkpoint 1") {
    throw DataError("not a qfraud checkpoint (bad magic line)");
  }
  Checkpoint ckpt;
  while (std::getline(in, line)) {
    const auto content = trim(line);
    if (content.empty()) continue;
    std::istringstream ls{std::string(content)};
    std::string kind;
    ls >> kind;
    if (kind == "meta") {
      std::string key, value;
      ls >> key;
      std::getline(ls, value);
      ckpt.meta[key] = std::string(trim(value));
    } else if (kind == "array") {
      std::string name;
      std::size_t rows = 0, cols = 0;
      if (!(ls >> name >> rows >> cols)) throw DataError("checkpoint: malformed array header");
      ckpt.layout.add(name, rows, cols);
      std::string values_line;
      if (!std::getline(in, values_line)) throw DataError("checkpoint: array '" + name + "' truncated");
      const auto tokens = trim(values_line).empty() ? std::vector<std::string_view>{}
                                                    : split(trim(values_line), ' ');
      if (tokens.size() != rows * cols) {
        throw DataError("checkpoint: array '" + name + "' has wrong value count");
      }
      for (auto tok : tokens) {
        auto v = parse_double(tok);
        if (!v) throw DataError("checkpoint: bad value '" + std::string(tok) + "'");
        ckpt.values.push_back(*v);
      }
    } else {
      throw DataError("checkpoint: unexpected line '" + std::string(content) + "'");
    }
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_file_atomic(path, format_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(read_file(path));
}

}  // namespace qfraud
