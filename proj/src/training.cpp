#include "qfraud/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qfraud/text_io.hpp"

namespace qfraud {

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("training: epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("training: batch_size must be positive");
  adam.validate();
}

std::string format_history_csv(const TrainHistory& history) {
  std::string out = "epoch,train_loss,val_loss\n";
  for (const auto& e : history.epochs) {
    out += std::to_string(e.epoch) + ',' + format_double(e.train_loss) + ',' +
           format_double(e.val_loss) + '\n';
  }
  return out;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double bce_loss(double p, int label) {
  const double q = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return label == 1 ? -std::log(q) : -std::log(1.0 - q);
}

TrainHistory run_minibatch_training(std::vector<double>& params,
                                    const std::vector<TransactionGraph>& train,
                                    const std::vector<TransactionGraph>& val,
                                    const TrainConfig& config, const TrainingHooks& hooks) {
  config.validate();
  if (train.empty()) throw std::invalid_argument("training: empty training set");

  Rng order_rng(derive_seed(config.seed, "batch-order"));
  Rng noise_rng(derive_seed(config.seed, "model-noise"));
  AdamState adam(params.size());
  std::vector<double> grad(params.size());
  std::vector<double> losses(train.size());
  std::vector<std::size_t> order(train.size());
  const auto batch = static_cast<std::size_t>(config.batch_size);

  TrainHistory history;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    order_rng.shuffle(std::span(order));

    for (std::size_t b = 0; b < order.size(); b += batch) {
      const std::size_t end = std::min(order.size(), b + batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t k = b; k < end; ++k) {
        losses[order[k]] = hooks.loss_and_grad(params, train[order[k]], noise_rng, grad);
      }
      const double scale = 1.0 / static_cast<double>(end - b);
      for (auto& g : grad) g *= scale;
      adam_step(params, grad, adam, config.adam);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    // Summed in index order so the value does not depend on the shuffle.
    rec.train_loss = std::accumulate(losses.begin(), losses.end(), 0.0) /
                     static_cast<double>(losses.size());
    if (val.empty()) {
      rec.val_loss = std::numeric_limits<double>::quiet_NaN();
    } else {
      double acc = 0.0;
      for (const auto& g : val) acc += hooks.eval_loss(params, g);
      rec.val_loss = acc / static_cast<double>(val.size());
    }
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    history.epochs.push_back(rec);
  }
  return history;
}

void fill_fan_in_uniform(std::span<double> values, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  for (auto& v : values) v = rng.uniform(-bound, bound);
}

}  // namespace qfraud
