#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles/finite_diff.hpp"
#include "qfraud/qgnn.hpp"
#include "support/fixtures.hpp"

using namespace qfraud;

namespace {

QgnnConfig small_config(int q, int layers) {
  QgnnConfig c;
  c.qubits = q;
  c.layers = layers;
  return c;
}

std::vector<double> random_params(const QgnnConfig& c, Rng& rng) {
  QgnnParams p = QgnnParams::initialise(c.circuit(), rng);
  // Non-zero biases so their gradients are exercised too.
  const auto& bc = p.layout.block("compression.bias");
  for (std::size_t i = 0; i < bc.size(); ++i) p.values[bc.offset + i] = 0.3 * rng.normal();
  p.values[p.layout.block("head.bias").offset] = 0.1 * rng.normal();
  return p.values;
}

}  // namespace

TEST(QgnnLayout, ParameterCounts) {
  // q x 28 + q + 2q (one RY and one RX per qubit per layer) + q + 1
  EXPECT_EQ(QgnnParams::zeros(small_config(6, 1).circuit()).count(), 168u + 6 + 12 + 6 + 1);
  EXPECT_EQ(QgnnParams::zeros(small_config(16, 2).circuit()).count(), 448u + 16 + 64 + 16 + 1);
}

TEST(QgnnForward, ZeroParamsGiveOneHalf) {
  Rng rng(1);
  const auto c = small_config(4, 2);
  const auto p = QgnnParams::zeros(c.circuit());
  for (int i = 0; i < 10; ++i) {
    EXPECT_DOUBLE_EQ(qgnn_forward(fixture::random_graph(rng), p.values, c), 0.5);
  }
}

TEST(QgnnForward, PoolingProperties) {
  Rng rng(2);
  const auto c = small_config(3, 1);
  const auto p = random_params(c, rng);
  TransactionGraph one = fixture::random_graph(rng, 1);
  TransactionGraph two = one;
  two.nodes.push_back(one.nodes[0]);
  two.edges = {{0, 1}};
  EXPECT_NEAR(qgnn_forward(one, p, c), qgnn_forward(two, p, c), 1e-14);

  TransactionGraph g = fixture::random_graph(rng, 5);
  while (g.num_nodes() < 3) g = fixture::random_graph(rng, 5);
  TransactionGraph perm = g;
  std::reverse(perm.nodes.begin(), perm.nodes.end());
  EXPECT_NEAR(qgnn_forward(g, p, c), qgnn_forward(perm, p, c), 1e-14);
}

TEST(QgnnForward, OutputInOpenUnitInterval) {
  Rng rng(3);
  const auto c = small_config(3, 2);
  for (int i = 0; i < 50; ++i) {
    auto p = random_params(c, rng);
    for (auto& v : p) v *= 20.0;
    const double y = qgnn_forward(fixture::random_graph(rng, 4, 5.0), p, c);
    EXPECT_GT(y, 0.0);
    EXPECT_LT(y, 1.0);
  }
}

TEST(QgnnForward, EmptyGraphAndBadShape) {
  const auto c = small_config(2, 1);
  const auto p = QgnnParams::zeros(c.circuit());
  EXPECT_THROW(qgnn_forward(TransactionGraph{}, p.values, c), std::invalid_argument);
  Rng rng(4);
  std::vector<double> short_params(p.count() - 1);
  EXPECT_THROW(qgnn_forward(fixture::random_graph(rng), short_params, c), std::invalid_argument);
}

TEST(BceLoss, KnownValues) {
  EXPECT_NEAR(bce_loss(0.5, 1), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce_loss(1 - kProbClamp, 1), 0.0, 1e-6);
  EXPECT_NEAR(bce_loss(0.9, 0), 2.302585092994046, 1e-12);
  EXPECT_TRUE(std::isfinite(bce_loss(1.0, 0)));
  EXPECT_TRUE(std::isfinite(bce_loss(0.0, 1)));
}

TEST(QgnnBackward, MatchesFiniteDifferences) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = small_config(1 + static_cast<int>(rng.below(4)), 1 + static_cast<int>(rng.below(2)));
    if (trial % 3 == 1) c.encode_activation = EncodeActivation::TanhPi;
    if (trial % 4 == 2) c.entangler = EntanglerKind::Ring;
    const auto p = random_params(c, rng);
    const TransactionGraph g = fixture::random_graph(rng, 4);
    const auto bw = qgnn_backward(g, p, c, g.label);
    const auto fd = oracle::central_diff(
        [&](const std::vector<double>& pp) { return bce_loss(qgnn_forward(g, pp, c), g.label); }, p);
    ASSERT_LT(oracle::rel_error(bw.grad, fd), 1e-4) << "trial " << trial;
    EXPECT_NEAR(bw.probability, qgnn_forward(g, p, c), 1e-15);
  }
}

TEST(QgnnBackward, AdjointMatchesParameterShift) {
  Rng rng(6);
  auto c = small_config(4, 2);
  const auto p = random_params(c, rng);
  const TransactionGraph g = fixture::random_graph(rng, 4);
  const auto a = qgnn_backward(g, p, c, 1);
  c.gradient = GradientMethod::Adjoint;
  const auto b = qgnn_backward(g, p, c, 1);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(a.grad[i], b.grad[i], 1e-12);
}

TEST(QgnnBackward, ZeroHeadBlocksUpstreamGradients) {
  Rng rng(7);
  const auto c = small_config(3, 1);
  auto p = random_params(c, rng);
  QgnnParams layout = QgnnParams::zeros(c.circuit());
  const auto& wo = layout.layout.block("head.weight");
  std::fill(p.begin() + wo.offset, p.begin() + wo.offset + wo.size(), 0.0);
  const auto bw = qgnn_backward(fixture::random_graph(rng, 4), p, c, 1);
  const std::size_t upstream_end = layout.layout.block("head.weight").offset;
  for (std::size_t i = 0; i < upstream_end; ++i) EXPECT_EQ(bw.grad[i], 0.0) << i;
}

TEST(QgnnPredict, MapsForward) {
  Rng rng(8);
  const auto c = small_config(2, 1);
  const auto p = random_params(c, rng);
  EXPECT_TRUE(qgnn_predict({}, p, c).empty());
  std::vector<TransactionGraph> gs;
  for (int i = 0; i < 5; ++i) gs.push_back(fixture::random_graph(rng));
  const auto out = qgnn_predict(gs, p, c);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(out[i], qgnn_forward(gs[i], p, c));
}

TEST(QgnnTrain, ZeroEpochsReturnsInitialisation) {
  const auto c = small_config(3, 1);
  TrainConfig t;
  t.epochs = 0;
  const auto r = qgnn_train(fixture::separable_four(), {}, c, t);
  Rng init(derive_seed(t.seed, "qgnn-init"));
  EXPECT_EQ(r.params.values, QgnnParams::initialise(c.circuit(), init).values);
  EXPECT_TRUE(r.history.epochs.empty());
}

TEST(QgnnTrain, DeterministicForSeed) {
  const auto c = small_config(3, 1);
  TrainConfig t;
  t.epochs = 3;
  t.batch_size = 2;
  const auto a = qgnn_train(fixture::separable_four(), fixture::separable_four(), c, t);
  const auto b = qgnn_train(fixture::separable_four(), fixture::separable_four(), c, t);
  EXPECT_EQ(a.params.values, b.params.values);
  EXPECT_EQ(format_history_csv(a.history), format_history_csv(b.history));
  t.seed = 43;
  EXPECT_NE(qgnn_train(fixture::separable_four(), {}, c, t).params.values, a.params.values);
}

TEST(QgnnTrain, ZeroLearningRateFreezesParameters) {
  const auto c = small_config(3, 1);
  TrainConfig t;
  t.epochs = 4;
  t.adam.learning_rate = 0.0;
  const auto r = qgnn_train(fixture::separable_four(), fixture::separable_four(), c, t);
  Rng init(derive_seed(t.seed, "qgnn-init"));
  EXPECT_EQ(r.params.values, QgnnParams::initialise(c.circuit(), init).values);
  for (const auto& e : r.history.epochs) {
    EXPECT_EQ(e.train_loss, r.history.epochs[0].train_loss);
    EXPECT_EQ(e.val_loss, r.history.epochs[0].val_loss);
  }
}

TEST(QgnnTrain, LearnsSeparableFixture) {
  TrainConfig t;
  t.epochs = 50;
  t.batch_size = 2;
  t.adam.learning_rate = 0.05;
  const auto r = qgnn_train(fixture::separable_four(), {}, small_config(6, 1), t);
  ASSERT_EQ(r.history.epochs.size(), 50u);
  EXPECT_TRUE(std::isnan(r.history.epochs[0].val_loss));
  EXPECT_LE(r.history.epochs.back().train_loss, 0.5 * r.history.epochs.front().train_loss);
}

TEST(QgnnCheckpoint, RoundTrip) {
  Rng rng(9);
  auto c = small_config(3, 2);
  c.entangler = EntanglerKind::Ring;
  c.encode_activation = EncodeActivation::TanhPi;
  QgnnParams p = QgnnParams::initialise(c.circuit(), rng);
  const auto ck = parse_checkpoint(format_checkpoint(qgnn_to_checkpoint(p, c)));
  const QgnnModel m = qgnn_from_checkpoint(ck);
  EXPECT_EQ(m.params.values, p.values);
  EXPECT_EQ(m.config.qubits, 3);
  EXPECT_EQ(m.config.layers, 2);
  EXPECT_EQ(m.config.entangler, EntanglerKind::Ring);
  EXPECT_EQ(m.config.encode_activation, EncodeActivation::TanhPi);
  EXPECT_EQ(m.config.rotations, c.rotations);
}
