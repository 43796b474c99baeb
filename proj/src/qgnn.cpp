#include "qfraud/qgnn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfraud/error.hpp"

namespace qfraud {
namespace {

constexpr double kPi = std::numbers::pi;

double activate(double v, EncodeActivation a) {
  return a == EncodeActivation::TanhPi ? kPi * std::tanh(v) : v;
}

double activate_derivative(double v, EncodeActivation a) {
  if (a == EncodeActivation::None) return 1.0;
  const double t = std::tanh(v);
  return kPi * (1.0 - t * t);
}

struct Blocks {
  ParamBlock wc, bc, angles, wo, bo;

  explicit Blocks(const ParamLayout& layout)
      : wc(layout.block("compression.weight")),
        bc(layout.block("compression.bias")),
        angles(layout.block("vqc.angles")),
        wo(layout.block("head.weight")),
        bo(layout.block("head.bias")) {}
};

void check_params(std::span<const double> params, const CircuitSpec& circuit) {
  if (params.size() != QgnnParams::make_layout(circuit).size()) {
    throw std::invalid_argument("qgnn: parameter vector does not match the circuit shape");
  }
}

// Encoding angles of every node.
std::vector<Eigen::VectorXd> node_angles(const TransactionGraph& g, std::span<const double> params,
                                         const Blocks& b, const QgnnConfig& config,
                                         std::vector<Eigen::VectorXd>* pre_out) {
  const auto wc = matrix_view(params, b.wc);
  const auto bc = vector_view(params, b.bc);
  std::vector<Eigen::VectorXd> angles;
  angles.reserve(g.num_nodes());
  for (const auto& node : g.nodes) {
    const Eigen::Map<const Eigen::VectorXd> features(node.data(), kNumPcaFeatures);
    Eigen::VectorXd pre = wc * features + bc;
    Eigen::VectorXd x = pre.unaryExpr([&](double v) { return activate(v, config.encode_activation); });
    if (pre_out) pre_out->push_back(std::move(pre));
    angles.push_back(std::move(x));
  }
  return angles;
}

}  // namespace

std::string to_string(EncodeActivation a) {
  return a == EncodeActivation::TanhPi ? "tanh_pi" : "none";
}

EncodeActivation parse_encode_activation(const std::string& name) {
  if (name == "none") return EncodeActivation::None;
  if (name == "tanh_pi") return EncodeActivation::TanhPi;
  throw std::invalid_argument("unknown encode_activation '" + name + "' (expected none or tanh_pi)");
}

std::string to_string(GradientMethod m) {
  return m == GradientMethod::Adjoint ? "adjoint" : "parameter_shift";
}

GradientMethod parse_gradient_method(const std::string& name) {
  if (name == "parameter_shift") return GradientMethod::ParameterShift;
  if (name == "adjoint") return GradientMethod::Adjoint;
  throw std::invalid_argument("unknown gradient method '" + name +
                              "' (expected parameter_shift or adjoint)");
}

CircuitSpec QgnnConfig::circuit() const {
  return CircuitSpec::make(qubits, layers, entangler, rotations);
}

void QgnnConfig::validate() const {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw std::invalid_argument("qgnn: qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (layers < 1) throw std::invalid_argument("qgnn: layers must be positive");
  if (rotations.empty()) throw std::invalid_argument("qgnn: rotation plan must not be empty");
}

ParamLayout QgnnParams::make_layout(const CircuitSpec& circuit) {
  const auto q = static_cast<std::size_t>(circuit.num_qubits);
  ParamLayout layout;
  layout.add("compression.weight", q, kNumPcaFeatures);
  layout.add("compression.bias", q, 1);
  layout.add("vqc.angles", 1, circuit.num_params());
  layout.add("head.weight", 1, q);
  layout.add("head.bias", 1, 1);
  return layout;
}

QgnnParams QgnnParams::zeros(const CircuitSpec& circuit) {
  QgnnParams p;
  p.layout = make_layout(circuit);
  p.values.assign(p.layout.size(), 0.0);
  return p;
}

QgnnParams QgnnParams::initialise(const CircuitSpec& circuit, Rng& rng) {
  QgnnParams p = zeros(circuit);
  const Blocks b(p.layout);
  std::span<double> all(p.values);
  fill_fan_in_uniform(all.subspan(b.wc.offset, b.wc.size()), kNumPcaFeatures, rng);
  for (auto& a : all.subspan(b.angles.offset, b.angles.size())) a = rng.uniform(0.0, 2.0 * kPi);
  fill_fan_in_uniform(all.subspan(b.wo.offset, b.wo.size()), circuit.num_qubits, rng);
  return p;
}

double qgnn_forward(const TransactionGraph& g, std::span<const double> params,
                    const QgnnConfig& config) {
  if (g.num_nodes() == 0) throw std::invalid_argument("qgnn: graph has no nodes");
  const auto circuit = config.circuit();
  check_params(params, circuit);
  const Blocks b(QgnnParams::make_layout(circuit));
  const auto angles = params.subspan(b.angles.offset, b.angles.size());

  Eigen::VectorXd pooled = Eigen::VectorXd::Zero(circuit.num_qubits);
  for (const auto& x : node_angles(g, params, b, config, nullptr)) {
    const auto z = run_vqc(std::span<const double>(x.data(), x.size()), circuit, angles);
    pooled += Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
  }
  pooled /= static_cast<double>(g.num_nodes());
  const double logit = vector_view(params, b.wo).dot(pooled) + params[b.bo.offset];
  return sigmoid(logit);
}

QgnnBackward qgnn_backward(const TransactionGraph& g, std::span<const double> params,
                           const QgnnConfig& config, int label) {
  if (g.num_nodes() == 0) throw std::invalid_argument("qgnn: graph has no nodes");
  const auto circuit = config.circuit();
  check_params(params, circuit);
  const Blocks b(QgnnParams::make_layout(circuit));
  const auto angles = params.subspan(b.angles.offset, b.angles.size());
  const double inv_n = 1.0 / static_cast<double>(g.num_nodes());

  std::vector<Eigen::VectorXd> pre;
  const auto xs = node_angles(g, params, b, config, &pre);
  Eigen::VectorXd pooled = Eigen::VectorXd::Zero(circuit.num_qubits);
  for (const auto& x : xs) {
    const auto z = run_vqc(std::span<const double>(x.data(), x.size()), circuit, angles);
    pooled += Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
  }
  pooled *= inv_n;
  const auto wo = vector_view(params, b.wo);
  const double p = sigmoid(wo.dot(pooled) + params[b.bo.offset]);

  QgnnBackward out;
  out.probability = p;
  out.loss = bce_loss(p, label);
  out.grad.assign(params.size(), 0.0);
  std::span<double> grad(out.grad);

  const double delta = p - static_cast<double>(label);
  vector_view(grad, b.wo) = delta * pooled;
  grad[b.bo.offset] = delta;

  // Mean pooling hands every node the same upstream vector.
  const Eigen::VectorXd upstream = (delta * inv_n) * wo;
  const std::span<const double> up(upstream.data(), static_cast<std::size_t>(upstream.size()));
  auto g_wc = matrix_view(grad, b.wc);
  auto g_bc = vector_view(grad, b.bc);
  auto g_angles = vector_view(grad, b.angles);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const std::span<const double> x(xs[k].data(), static_cast<std::size_t>(xs[k].size()));
    const VqcGradient vg = config.gradient == GradientMethod::Adjoint
                               ? adjoint_grad(x, circuit, angles, up)
                               : param_shift_grad(x, circuit, angles, up);
    g_angles += Eigen::Map<const Eigen::VectorXd>(vg.w.data(), static_cast<Eigen::Index>(vg.w.size()));
    Eigen::VectorXd g_pre(circuit.num_qubits);
    for (int i = 0; i < circuit.num_qubits; ++i) {
      g_pre[i] = vg.x[i] * activate_derivative(pre[k][i], config.encode_activation);
    }
    const Eigen::Map<const Eigen::VectorXd> features(g.nodes[k].data(), kNumPcaFeatures);
    g_wc += g_pre * features.transpose();
    g_bc += g_pre;
  }
  return out;
}

std::vector<double> qgnn_predict(const std::vector<TransactionGraph>& graphs,
                                 std::span<const double> params, const QgnnConfig& config) {
  std::vector<double> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(qgnn_forward(g, params, config));
  return out;
}

QgnnTrainResult qgnn_train(const std::vector<TransactionGraph>& train,
                           const std::vector<TransactionGraph>& val, const QgnnConfig& config,
                           const TrainConfig& train_config) {
  config.validate();
  train_config.validate();
  if (train.empty()) throw std::invalid_argument("qgnn_train: empty training set");
  const auto circuit = config.circuit();
  Rng init_rng(derive_seed(train_config.seed, "qgnn-init"));
  QgnnTrainResult result{QgnnParams::initialise(circuit, init_rng), {}};

  TrainingHooks hooks;
  hooks.loss_and_grad = [&](std::span<const double> params, const TransactionGraph& g, Rng&,
                            std::span<double> grad) {
    const auto bw = qgnn_backward(g, params, config, g.label);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += bw.grad[i];
    return bw.loss;
  };
  hooks.eval_loss = [&](std::span<const double> params, const TransactionGraph& g) {
    return bce_loss(qgnn_forward(g, params, config), g.label);
  };
  result.history = run_minibatch_training(result.params.values, train, val, train_config, hooks);
  return result;
}

Checkpoint qgnn_to_checkpoint(const QgnnParams& params, const QgnnConfig& config) {
  Checkpoint c;
  c.meta["model"] = "qgnn";
  c.meta["qubits"] = std::to_string(config.qubits);
  c.meta["layers"] = std::to_string(config.layers);
  c.meta["entangler"] = to_string(config.entangler);
  std::string rot;
  for (Axis a : config.rotations) rot += to_string(a);
  c.meta["rotations"] = rot;
  c.meta["encode_activation"] = to_string(config.encode_activation);
  c.meta["gradient"] = to_string(config.gradient);
  c.layout = params.layout;
  c.values = params.values;
  return c;
}

QgnnModel qgnn_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.require("model") != "qgnn") throw DataError("checkpoint is not a qgnn model");
  QgnnModel m;
  try {
    m.config.qubits = std::stoi(ckpt.require("qubits"));
    m.config.layers = std::stoi(ckpt.require("layers"));
    m.config.entangler = parse_entangler(ckpt.require("entangler"));
    m.config.rotations.clear();
    for (char c : ckpt.require("rotations")) m.config.rotations.push_back(parse_axis(std::string(1, c)));
    m.config.encode_activation = parse_encode_activation(ckpt.require("encode_activation"));
    m.config.gradient = parse_gradient_method(ckpt.require("gradient"));
    m.config.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  if (!(ckpt.layout == QgnnParams::make_layout(m.config.circuit()))) {
    throw DataError("checkpoint: parameter arrays do not match the recorded circuit shape");
  }
  m.params.layout = ckpt.layout;
  m.params.values = ckpt.values;
  return m;
}

}  // namespace qfraud
