#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qfraud/dataset.hpp"
#include "qfraud/gnn_baseline.hpp"
#include "qfraud/qgnn.hpp"
#include "qfraud/tda_graph.hpp"
#include "qfraud/training.hpp"

namespace qfraud {

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "QFRAUD_OUTPUT_ROOT";

struct GridSpec {
  std::vector<int> qubits{6, 16};
  std::vector<int> layers{1, 2};
};

/// Everything a run depends on. Serialised as JSON; see configs/default.json.
struct RunConfig {
  std::filesystem::path dataset = "data/creditcard.csv";
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "runs";
  bool emit_svg = true;
  SplitSpec split;
  TdaSpec tda;
  QgnnConfig qgnn;
  SageConfig sage;
  TrainConfig training;  // training.seed always mirrors `seed`
  GridSpec grid;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
};

/// Defaults, with output_dir taken from $QFRAUD_OUTPUT_ROOT when set.
RunConfig default_run_config();

/// Overlays `json_text` on the defaults. Unknown keys and wrong types are
/// rejected with ConfigError. The result is validated.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Fully resolved config as pretty-printed JSON (round-trips through parse_run_config).
std::string run_config_json(const RunConfig& config);

/// Hash of every setting that shapes the graph corpus.
std::string corpus_config_hash(const RunConfig& config);

}  // namespace qfraud
