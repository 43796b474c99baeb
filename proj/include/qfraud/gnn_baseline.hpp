#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "qfraud/params.hpp"
#include "qfraud/rng.hpp"
#include "qfraud/tda_graph.hpp"
#include "qfraud/training.hpp"

namespace qfraud {

struct SageConfig {
  std::vector<int> widths{128, 128};  // per-half width of each layer
  std::vector<int> samples{2, 32};    // neighbour fan-out per layer while training
  double dropout = 0.1;

  void validate() const;
};

/// Flat parameter layout. Layer l (1-based) has
///   sage<l>.self   w_l x in_l
///   sage<l>.neigh  w_l x in_l
///   sage<l>.bias   2 w_l x 1
/// with in_1 = 28 and in_{l+1} = 2 w_l, then head.weight (1 x 2 w_last)
/// and head.bias (1 x 1).
struct SageParams {
  ParamLayout layout;
  std::vector<double> values;

  static ParamLayout make_layout(const SageConfig& config);
  static SageParams zeros(const SageConfig& config);
  /// Fan-in uniform weights, zero biases.
  static SageParams initialise(const SageConfig& config, Rng& rng);

  std::size_t count() const { return values.size(); }
};

using NodeVectors = std::vector<Eigen::VectorXd>;

/// Mean over all neighbours u of v of D_p[h_u], where D_p zeroes each entry
/// with probability p and scales survivors by 1/(1-p). Isolated nodes get
/// the zero vector.
Eigen::VectorXd mean_aggregate(const TransactionGraph& g, const NodeVectors& h, int v,
                               double dropout_p, Rng& rng);

/// One layer: h'_v = ReLU([W_self D_p[h_v] ; W_neigh h_N(v)] + b). In train
/// mode neighbourhoods are subsampled to `fan_out` without replacement and
/// dropout is active; in eval mode all neighbours are used and no dropout.
NodeVectors sage_layer(const TransactionGraph& g, const NodeVectors& h,
                       std::span<const double> params, const ParamLayout& layout, int layer,
                       double dropout_p, int fan_out, Rng& rng, bool train_mode);

/// Layers, mean pooling over nodes, dense head, sigmoid.
double sage_forward(const TransactionGraph& g, std::span<const double> params,
                    const SageConfig& config, Rng& rng, bool train_mode);

struct SageBackward {
  double probability = 0.0;
  double loss = 0.0;
  std::vector<double> grad;
};

/// Gradient of bce_loss(sage_forward(...), label). Consumes the RNG exactly
/// as sage_forward does, so both see the same samples and dropout masks.
SageBackward sage_backward(const TransactionGraph& g, std::span<const double> params,
                           const SageConfig& config, int label, Rng& rng, bool train_mode);

std::vector<double> sage_predict(const std::vector<TransactionGraph>& graphs,
                                 std::span<const double> params, const SageConfig& config);

struct SageTrainResult {
  SageParams params;
  TrainHistory history;
};

SageTrainResult sage_train(const std::vector<TransactionGraph>& train,
                           const std::vector<TransactionGraph>& val, const SageConfig& config,
                           const TrainConfig& train_config);

Checkpoint sage_to_checkpoint(const SageParams& params, const SageConfig& config);

struct SageModel {
  SageConfig config;
  SageParams params;
};
SageModel sage_from_checkpoint(const Checkpoint& ckpt);

}  // namespace qfraud
