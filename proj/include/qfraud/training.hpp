#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qfraud/adam.hpp"
#include "qfraud/rng.hpp"
#include "qfraud/tda_graph.hpp"

namespace qfraud {

struct TrainConfig {
  int epochs = 10;
  int batch_size = 5;
  AdamConfig adam;
  std::uint64_t seed = 42;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double seconds = 0.0;  // wall clock; not written to the history CSV
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
};

/// `epoch,train_loss,val_loss` rows. Wall-clock is left out so the file is
/// reproducible byte for byte.
std::string format_history_csv(const TrainHistory& history);

inline constexpr double kProbClamp = 1e-7;

double sigmoid(double z);

/// Binary cross-entropy with p clamped to [kProbClamp, 1 - kProbClamp].
double bce_loss(double p, int label);

/// Model-specific pieces plugged into run_minibatch_training.
struct TrainingHooks {
  /// Adds dLoss/dParams for one graph into `grad` and returns its loss.
  std::function<double(std::span<const double> params, const TransactionGraph& g, Rng& noise,
                       std::span<double> grad)>
      loss_and_grad;
  /// Deterministic (inference-mode) loss of one graph.
  std::function<double(std::span<const double> params, const TransactionGraph& g)> eval_loss;
};

/// Shuffled mini-batches, batch gradient = mean over the batch (accumulated in
/// batch order), one Adam step per batch. Train loss of an epoch is the mean
/// of the per-graph losses seen while training; validation loss is the mean
/// inference loss over `val` (NaN when `val` is empty).
TrainHistory run_minibatch_training(std::vector<double>& params,
                                    const std::vector<TransactionGraph>& train,
                                    const std::vector<TransactionGraph>& val,
                                    const TrainConfig& config, const TrainingHooks& hooks);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) fill.
void fill_fan_in_uniform(std::span<double> values, std::size_t fan_in, Rng& rng);

}  // namespace qfraud
