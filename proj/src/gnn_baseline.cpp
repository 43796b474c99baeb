#include "qfraud/gnn_baseline.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qfraud/error.hpp"
#include "qfraud/text_io.hpp"

namespace qfraud {
namespace {

struct LayerBlocks {
  ParamBlock self, neigh, bias;
  Eigen::Index width = 0;
};

LayerBlocks layer_blocks(const ParamLayout& layout, int layer) {
  const std::string prefix = "sage" + std::to_string(layer);
  LayerBlocks b{layout.block(prefix + ".self"), layout.block(prefix + ".neigh"),
                layout.block(prefix + ".bias"), 0};
  b.width = static_cast<Eigen::Index>(b.self.rows);
  return b;
}

// Everything the backward pass needs from one layer's forward pass.
struct LayerTape {
  NodeVectors self_in;  // D_p[h_v]
  NodeVectors agg;      // h_N(v)
  NodeVectors pre;      // pre-activation
  std::vector<std::vector<int>> sampled;
  bool masked = false;
  NodeVectors self_mask;
  std::vector<NodeVectors> neigh_mask;
};

Eigen::VectorXd draw_mask(Eigen::Index n, double p, Rng& rng) {
  Eigen::VectorXd m(n);
  const double keep_scale = 1.0 / (1.0 - p);
  for (Eigen::Index i = 0; i < n; ++i) m[i] = rng.bernoulli(p) ? 0.0 : keep_scale;
  return m;
}

std::vector<int> sample_neighbours(const std::vector<int>& all, int fan_out, Rng& rng) {
  if (fan_out <= 0 || all.size() <= static_cast<std::size_t>(fan_out)) return all;
  std::vector<int> pool = all;
  for (int i = 0; i < fan_out; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(fan_out));
  std::sort(pool.begin(), pool.end());
  return pool;
}

NodeVectors layer_forward(const std::vector<std::vector<int>>& adj, const NodeVectors& h,
                          std::span<const double> params, const LayerBlocks& b, double dropout_p,
                          int fan_out, Rng& rng, bool train_mode, LayerTape* tape) {
  const auto w_self = matrix_view(params, b.self);
  const auto w_neigh = matrix_view(params, b.neigh);
  const auto bias = vector_view(params, b.bias);
  if (!h.empty() && h.front().size() != static_cast<Eigen::Index>(b.self.cols)) {
    throw std::invalid_argument("sage_layer: input width does not match layer weights");
  }
  const bool use_dropout = train_mode && dropout_p > 0.0;
  const std::size_t n = h.size();
  if (tape) {
    tape->masked = use_dropout;
    tape->self_in.resize(n);
    tape->agg.resize(n);
    tape->pre.resize(n);
    tape->sampled.resize(n);
    if (use_dropout) {
      tape->self_mask.resize(n);
      tape->neigh_mask.assign(n, {});
    }
  }

  NodeVectors out(n);
  const Eigen::Index in_dim = static_cast<Eigen::Index>(b.self.cols);
  for (std::size_t v = 0; v < n; ++v) {
    auto sampled = train_mode ? sample_neighbours(adj[v], fan_out, rng) : adj[v];

    Eigen::VectorXd self_in = h[v];
    if (use_dropout) {
      Eigen::VectorXd m = draw_mask(in_dim, dropout_p, rng);
      self_in = self_in.cwiseProduct(m);
      if (tape) tape->self_mask[v] = std::move(m);
    }
    Eigen::VectorXd agg = Eigen::VectorXd::Zero(in_dim);
    for (int u : sampled) {
      if (use_dropout) {
        Eigen::VectorXd m = draw_mask(in_dim, dropout_p, rng);
        agg += h[u].cwiseProduct(m);
        if (tape) tape->neigh_mask[v].push_back(std::move(m));
      } else {
        agg += h[u];
      }
    }
    if (!sampled.empty()) agg /= static_cast<double>(sampled.size());

    Eigen::VectorXd pre(2 * b.width);
    pre.head(b.width) = w_self * self_in;
    pre.tail(b.width) = w_neigh * agg;
    pre += bias;
    out[v] = pre.cwiseMax(0.0);
    if (tape) {
      tape->self_in[v] = std::move(self_in);
      tape->agg[v] = std::move(agg);
      tape->pre[v] = std::move(pre);
      tape->sampled[v] = std::move(sampled);
    }
  }
  return out;
}

NodeVectors layer_backward(const LayerTape& tape, const NodeVectors& d_out,
                           std::span<const double> params, std::span<double> grad,
                           const LayerBlocks& b) {
  const auto w_self = matrix_view(params, b.self);
  const auto w_neigh = matrix_view(params, b.neigh);
  auto g_self = matrix_view(grad, b.self);
  auto g_neigh = matrix_view(grad, b.neigh);
  auto g_bias = vector_view(grad, b.bias);
  const std::size_t n = d_out.size();
  const Eigen::Index in_dim = static_cast<Eigen::Index>(b.self.cols);

  NodeVectors d_in(n, Eigen::VectorXd::Zero(in_dim));
  for (std::size_t v = 0; v < n; ++v) {
    const Eigen::VectorXd dz =
        d_out[v].cwiseProduct((tape.pre[v].array() > 0.0).cast<double>().matrix());
    const auto top = dz.head(b.width);
    const auto bot = dz.tail(b.width);
    g_self.noalias() += top * tape.self_in[v].transpose();
    g_neigh.noalias() += bot * tape.agg[v].transpose();
    g_bias += dz;

    Eigen::VectorXd d_self = w_self.transpose() * top;
    if (tape.masked) d_self = d_self.cwiseProduct(tape.self_mask[v]);
    d_in[v] += d_self;

    const auto& sampled = tape.sampled[v];
    if (sampled.empty()) continue;
    const Eigen::VectorXd d_agg =
        (w_neigh.transpose() * bot) / static_cast<double>(sampled.size());
    for (std::size_t k = 0; k < sampled.size(); ++k) {
      if (tape.masked) {
        d_in[sampled[k]] += d_agg.cwiseProduct(tape.neigh_mask[v][k]);
      } else {
        d_in[sampled[k]] += d_agg;
      }
    }
  }
  return d_in;
}

NodeVectors input_features(const TransactionGraph& g) {
  NodeVectors h;
  h.reserve(g.num_nodes());
  for (const auto& node : g.nodes) {
    h.push_back(Eigen::Map<const Eigen::VectorXd>(node.data(), kNumPcaFeatures));
  }
  return h;
}

void check_params(std::span<const double> params, const SageConfig& config) {
  if (params.size() != SageParams::make_layout(config).size()) {
    throw std::invalid_argument("sage: parameter vector does not match the layer plan");
  }
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (auto tok : split(s, ',')) out.push_back(std::stoi(std::string(tok)));
  return out;
}

}  // namespace

void SageConfig::validate() const {
  if (widths.empty()) throw std::invalid_argument("sage: at least one layer is required");
  for (int w : widths) {
    if (w < 1) throw std::invalid_argument("sage: layer widths must be positive");
  }
  if (samples.size() != widths.size()) {
    throw std::invalid_argument("sage: need one neighbour fan-out per layer");
  }
  for (int s : samples) {
    if (s < 1) throw std::invalid_argument("sage: neighbour fan-outs must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("sage: dropout must lie in [0, 1)");
  }
}

ParamLayout SageParams::make_layout(const SageConfig& config) {
  ParamLayout layout;
  std::size_t in = kNumPcaFeatures;
  for (std::size_t l = 0; l < config.widths.size(); ++l) {
    const auto w = static_cast<std::size_t>(config.widths[l]);
    const std::string prefix = "sage" + std::to_string(l + 1);
    layout.add(prefix + ".self", w, in);
    layout.add(prefix + ".neigh", w, in);
    layout.add(prefix + ".bias", 2 * w, 1);
    in = 2 * w;
  }
  layout.add("head.weight", 1, in);
  layout.add("head.bias", 1, 1);
  return layout;
}

SageParams SageParams::zeros(const SageConfig& config) {
  SageParams p;
  p.layout = make_layout(config);
  p.values.assign(p.layout.size(), 0.0);
  return p;
}

SageParams SageParams::initialise(const SageConfig& config, Rng& rng) {
  SageParams p = zeros(config);
  std::span<double> all(p.values);
  for (const auto& b : p.layout.blocks()) {
    if (b.cols == 1 && b.name.ends_with(".bias")) continue;
    fill_fan_in_uniform(all.subspan(b.offset, b.size()), b.cols, rng);
  }
  return p;
}

Eigen::VectorXd mean_aggregate(const TransactionGraph& g, const NodeVectors& h, int v,
                               double dropout_p, Rng& rng) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.num_nodes() || h.size() != g.num_nodes()) {
    throw std::invalid_argument("mean_aggregate: node index or feature table out of range");
  }
  const auto adj = g.neighbours();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(h[v].size());
  for (int u : adj[v]) {
    if (dropout_p > 0.0) {
      acc += h[u].cwiseProduct(draw_mask(h[u].size(), dropout_p, rng));
    } else {
      acc += h[u];
    }
  }
  if (!adj[v].empty()) acc /= static_cast<double>(adj[v].size());
  return acc;
}

NodeVectors sage_layer(const TransactionGraph& g, const NodeVectors& h,
                       std::span<const double> params, const ParamLayout& layout, int layer,
                       double dropout_p, int fan_out, Rng& rng, bool train_mode) {
  if (h.size() != g.num_nodes()) throw std::invalid_argument("sage_layer: node count mismatch");
  if (params.size() != layout.size()) throw std::invalid_argument("sage_layer: params/layout mismatch");
  return layer_forward(g.neighbours(), h, params, layer_blocks(layout, layer), dropout_p, fan_out,
                       rng, train_mode, nullptr);
}

double sage_forward(const TransactionGraph& g, std::span<const double> params,
                    const SageConfig& config, Rng& rng, bool train_mode) {
  if (g.num_nodes() == 0) throw std::invalid_argument("sage: graph has no nodes");
  check_params(params, config);
  const auto layout = SageParams::make_layout(config);
  const auto adj = g.neighbours();
  NodeVectors h = input_features(g);
  for (std::size_t l = 0; l < config.widths.size(); ++l) {
    h = layer_forward(adj, h, params, layer_blocks(layout, static_cast<int>(l + 1)),
                      config.dropout, config.samples[l], rng, train_mode, nullptr);
  }
  Eigen::VectorXd pooled = Eigen::VectorXd::Zero(h.front().size());
  for (const auto& v : h) pooled += v;
  pooled /= static_cast<double>(h.size());
  const auto head = layout.block("head.weight");
  return sigmoid(vector_view(params, head).dot(pooled) + params[layout.block("head.bias").offset]);
}

SageBackward sage_backward(const TransactionGraph& g, std::span<const double> params,
                           const SageConfig& config, int label, Rng& rng, bool train_mode) {
  if (g.num_nodes() == 0) throw std::invalid_argument("sage: graph has no nodes");
  check_params(params, config);
  const auto layout = SageParams::make_layout(config);
  const auto adj = g.neighbours();
  const std::size_t n_layers = config.widths.size();

  std::vector<LayerTape> tapes(n_layers);
  NodeVectors h = input_features(g);
  for (std::size_t l = 0; l < n_layers; ++l) {
    h = layer_forward(adj, h, params, layer_blocks(layout, static_cast<int>(l + 1)),
                      config.dropout, config.samples[l], rng, train_mode, &tapes[l]);
  }
  const double inv_n = 1.0 / static_cast<double>(h.size());
  Eigen::VectorXd pooled = Eigen::VectorXd::Zero(h.front().size());
  for (const auto& v : h) pooled += v;
  pooled *= inv_n;
  const auto head = layout.block("head.weight");
  const auto head_bias = layout.block("head.bias");
  const double p = sigmoid(vector_view(params, head).dot(pooled) + params[head_bias.offset]);

  SageBackward out;
  out.probability = p;
  out.loss = bce_loss(p, label);
  out.grad.assign(params.size(), 0.0);
  std::span<double> grad(out.grad);

  const double delta = p - static_cast<double>(label);
  vector_view(grad, head) = delta * pooled;
  grad[head_bias.offset] = delta;

  const Eigen::VectorXd d_node = (delta * inv_n) * vector_view(params, head);
  NodeVectors d_h(h.size(), d_node);
  for (std::size_t l = n_layers; l-- > 0;) {
    d_h = layer_backward(tapes[l], d_h, params, grad, layer_blocks(layout, static_cast<int>(l + 1)));
  }
  return out;
}

std::vector<double> sage_predict(const std::vector<TransactionGraph>& graphs,
                                 std::span<const double> params, const SageConfig& config) {
  Rng unused(0);  // eval mode never draws
  std::vector<double> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(sage_forward(g, params, config, unused, false));
  return out;
}

SageTrainResult sage_train(const std::vector<TransactionGraph>& train,
                           const std::vector<TransactionGraph>& val, const SageConfig& config,
                           const TrainConfig& train_config) {
  config.validate();
  train_config.validate();
  if (train.empty()) throw std::invalid_argument("sage_train: empty training set");
  Rng init_rng(derive_seed(train_config.seed, "sage-init"));
  SageTrainResult result{SageParams::initialise(config, init_rng), {}};

  TrainingHooks hooks;
  hooks.loss_and_grad = [&](std::span<const double> params, const TransactionGraph& g, Rng& noise,
                            std::span<double> grad) {
    const auto bw = sage_backward(g, params, config, g.label, noise, true);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += bw.grad[i];
    return bw.loss;
  };
  hooks.eval_loss = [&](std::span<const double> params, const TransactionGraph& g) {
    Rng unused(0);
    return bce_loss(sage_forward(g, params, config, unused, false), g.label);
  };
  result.history = run_minibatch_training(result.params.values, train, val, train_config, hooks);
  return result;
}

Checkpoint sage_to_checkpoint(const SageParams& params, const SageConfig& config) {
  Checkpoint c;
  c.meta["model"] = "sage";
  c.meta["widths"] = join_ints(config.widths);
  c.meta["samples"] = join_ints(config.samples);
  c.meta["dropout"] = format_double(config.dropout);
  c.layout = params.layout;
  c.values = params.values;
  return c;
}

SageModel sage_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.require("model") != "sage") throw DataError("checkpoint is not a sage model");
  SageModel m;
  try {
    m.config.widths = parse_ints(ckpt.require("widths"));
    m.config.samples = parse_ints(ckpt.require("samples"));
    auto d = parse_double(ckpt.require("dropout"));
    if (!d) throw std::invalid_argument("bad dropout");
    m.config.dropout = *d;
    m.config.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  if (!(ckpt.layout == SageParams::make_layout(m.config))) {
    throw DataError("checkpoint: parameter arrays do not match the recorded layer plan");
  }
  m.params.layout = ckpt.layout;
  m.params.values = ckpt.values;
  return m;
}

}  // namespace qfraud
