#pragma once

#include <span>
#include <string>
#include <vector>

#include "qfraud/params.hpp"
#include "qfraud/qsim.hpp"
#include "qfraud/rng.hpp"
#include "qfraud/tda_graph.hpp"
#include "qfraud/training.hpp"

namespace qfraud {

enum class EncodeActivation { None, TanhPi };
enum class GradientMethod { ParameterShift, Adjoint };

std::string to_string(EncodeActivation a);
EncodeActivation parse_encode_activation(const std::string& name);
std::string to_string(GradientMethod m);
GradientMethod parse_gradient_method(const std::string& name);

struct QgnnConfig {
  int qubits = 6;
  int layers = 1;
  EntanglerKind entangler = EntanglerKind::Chain;
  std::vector<Axis> rotations{Axis::Y, Axis::X};
  EncodeActivation encode_activation = EncodeActivation::None;
  GradientMethod gradient = GradientMethod::ParameterShift;

  CircuitSpec circuit() const;
  void validate() const;
};

/// Trainable QGNN parameters in one flat vector:
///   compression.weight  q x 28    shared across nodes
///   compression.bias    q x 1
///   vqc.angles          1 x (layers * |rotations| * q)
///   head.weight         1 x q
///   head.bias           1 x 1
struct QgnnParams {
  ParamLayout layout;
  std::vector<double> values;

  static ParamLayout make_layout(const CircuitSpec& circuit);
  static QgnnParams zeros(const CircuitSpec& circuit);
  /// Fan-in uniform weights, angles uniform in [0, 2 pi), zero biases.
  static QgnnParams initialise(const CircuitSpec& circuit, Rng& rng);

  std::size_t count() const { return values.size(); }
};

/// Graph -> fraud probability: shared linear compression of every node to q
/// angles, angle encoding + VQC per node, mean pooling of the per-node <Z>
/// vectors, linear head, sigmoid.
double qgnn_forward(const TransactionGraph& g, std::span<const double> params,
                    const QgnnConfig& config);

struct QgnnBackward {
  double probability = 0.0;
  double loss = 0.0;
  std::vector<double> grad;  // same layout as the parameters
};

/// Exact gradient of bce_loss(qgnn_forward(g), label) over all parameters.
/// The logit gradient is taken as p - y, i.e. the clamp only guards the log.
QgnnBackward qgnn_backward(const TransactionGraph& g, std::span<const double> params,
                           const QgnnConfig& config, int label);

std::vector<double> qgnn_predict(const std::vector<TransactionGraph>& graphs,
                                 std::span<const double> params, const QgnnConfig& config);

struct QgnnTrainResult {
  QgnnParams params;
  TrainHistory history;
};

QgnnTrainResult qgnn_train(const std::vector<TransactionGraph>& train,
                           const std::vector<TransactionGraph>& val, const QgnnConfig& config,
                           const TrainConfig& train_config);

Checkpoint qgnn_to_checkpoint(const QgnnParams& params, const QgnnConfig& config);

struct QgnnModel {
  QgnnConfig config;
  QgnnParams params;
};
QgnnModel qgnn_from_checkpoint(const Checkpoint& ckpt);

}  // namespace qfraud
