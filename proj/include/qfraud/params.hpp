#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qfraud {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixView = Eigen::Map<RowMatrix>;
using ConstMatrixView = Eigen::Map<const RowMatrix>;
using VectorView = Eigen::Map<Eigen::VectorXd>;
using ConstVectorView = Eigen::Map<const Eigen::VectorXd>;

struct ParamBlock {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

/// Named row-major arrays packed back to back into one flat vector.
class ParamLayout {
 public:
  void add(std::string name, std::size_t rows, std::size_t cols);

  const ParamBlock& block(const std::string& name) const;
  const std::vector<ParamBlock>& blocks() const { return blocks_; }
  std::size_t size() const { return size_; }

  friend bool operator==(const ParamLayout&, const ParamLayout&) = default;

 private:
  std::vector<ParamBlock> blocks_;
  std::size_t size_ = 0;
};

inline MatrixView matrix_view(std::span<double> flat, const ParamBlock& b) {
  return MatrixView(flat.data() + b.offset, static_cast<Eigen::Index>(b.rows),
                    static_cast<Eigen::Index>(b.cols));
}
inline ConstMatrixView matrix_view(std::span<const double> flat, const ParamBlock& b) {
  return ConstMatrixView(flat.data() + b.offset, static_cast<Eigen::Index>(b.rows),
                         static_cast<Eigen::Index>(b.cols));
}
inline VectorView vector_view(std::span<double> flat, const ParamBlock& b) {
  return VectorView(flat.data() + b.offset, static_cast<Eigen::Index>(b.size()));
}
inline ConstVectorView vector_view(std::span<const double> flat, const ParamBlock& b) {
  return ConstVectorView(flat.data() + b.offset, static_cast<Eigen::Index>(b.size()));
}

/// Model parameters plus the metadata needed to rebuild and validate them.
///
/// Text format:
///   qfraud-checkpoint 1
///   meta <key> <value>          (zero or more)
///   array <name> <rows> <cols>
///   <rows*cols space-separated values>
struct Checkpoint {
  std::map<std::string, std::string> meta;
  ParamLayout layout;
  std::vector<double> values;

  const std::string& require(const std::string& key) const;
};

std::string format_checkpoint(const Checkpoint& ckpt);
Checkpoint parse_checkpoint(const std::string& text);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qfraud
