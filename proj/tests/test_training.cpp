#include <gtest/gtest.h>

#include <cmath>

#include "qfraud/adam.hpp"
#include "qfraud/params.hpp"
#include "qfraud/text_io.hpp"
#include "qfraud/training.hpp"
#include "support/fixtures.hpp"

using namespace qfraud;

TEST(Adam, ZeroGradientLeavesParameters) {
  std::vector<double> p{1.0, -2.0};
  AdamState st(2);
  st.m = {0.5, -0.5};
  st.v = {0.25, 0.25};
  adam_step(p, std::vector<double>{0.0, 0.0}, st, AdamConfig{});
  EXPECT_NEAR(st.m[0], 0.45, 1e-15);
  EXPECT_NEAR(st.v[0], 0.24975, 1e-15);
  // Non-zero stored moments still move the parameters; with fresh state they do not.
  std::vector<double> q{1.0, -2.0};
  AdamState fresh(2);
  adam_step(q, std::vector<double>{0.0, 0.0}, fresh, AdamConfig{});
  EXPECT_EQ(q, (std::vector<double>{1.0, -2.0}));
  EXPECT_EQ(fresh.step, 1u);
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
  std::vector<double> p{0.0, 0.0, 0.0};
  AdamState st(3);
  AdamConfig cfg;
  adam_step(p, std::vector<double>{3.0, -0.02, 1e-3}, st, cfg);
  EXPECT_NEAR(p[0], -1e-3, 1e-9);
  EXPECT_NEAR(p[1], 1e-3, 1e-9);
  EXPECT_NEAR(p[2], -1e-3, 1e-8);
}

TEST(Adam, Deterministic) {
  std::vector<double> a{0.3, 0.1}, b{0.3, 0.1};
  AdamState sa(2), sb(2);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> g{std::sin(i), std::cos(i)};
    adam_step(a, g, sa, AdamConfig{});
    adam_step(b, g, sb, AdamConfig{});
  }
  EXPECT_EQ(a, b);
}

TEST(TrainConfig, Validation) {
  TrainConfig t;
  t.batch_size = 0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  t = TrainConfig{};
  t.adam.beta1 = 1.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  t = TrainConfig{};
  t.epochs = -1;
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

TEST(MinibatchTraining, QuadraticConvergesAndLossesAreMeans) {
  // Per-graph loss (p - label)^2 on a single parameter.
  std::vector<TransactionGraph> data(6);
  for (int i = 0; i < 6; ++i) data[i].label = i % 2;
  TrainingHooks hooks;
  hooks.loss_and_grad = [](std::span<const double> p, const TransactionGraph& g, Rng&, std::span<double> grad) {
    grad[0] += 2 * (p[0] - g.label);
    return (p[0] - g.label) * (p[0] - g.label);
  };
  hooks.eval_loss = [](std::span<const double> p, const TransactionGraph& g) {
    return (p[0] - g.label) * (p[0] - g.label);
  };
  std::vector<double> params{3.0};
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.batch_size = 6;
  cfg.adam.learning_rate = 0.05;
  const auto h = run_minibatch_training(params, data, data, cfg, hooks);
  EXPECT_NEAR(params[0], 0.5, 1e-2);
  EXPECT_EQ(h.epochs.size(), 300u);
  EXPECT_EQ(h.epochs[0].epoch, 1);
  // Full batch: epoch-1 train loss is the mean loss at the initial point.
  EXPECT_DOUBLE_EQ(h.epochs[0].train_loss, (3 * 9.0 + 3 * 4.0) / 6);
  EXPECT_THROW(run_minibatch_training(params, {}, data, cfg, hooks), std::invalid_argument);
}

TEST(History, CsvFormat) {
  TrainHistory h;
  h.epochs.push_back({1, 0.5, std::nan(""), 3.0});
  h.epochs.push_back({2, 0.25, 0.125, 3.0});
  EXPECT_EQ(format_history_csv(h), "epoch,train_loss,val_loss\n1,0.5,nan\n2,0.25,0.125\n");
}

TEST(Checkpoint, TextRoundTripIsExact) {
  Checkpoint c;
  c.meta["model"] = "test";
  c.meta["note"] = "two words";
  c.layout.add("a", 2, 3);
  c.layout.add("b", 1, 1);
  c.values = {0.1, -1e-300, 3.0, 1.0 / 3.0, 5e300, -0.0, 42.0};
  const auto text = format_checkpoint(c);
  const auto back = parse_checkpoint(text);
  EXPECT_EQ(back.meta, c.meta);
  EXPECT_EQ(back.layout, c.layout);
  EXPECT_EQ(back.values, c.values);
  EXPECT_EQ(format_checkpoint(back), text);
  EXPECT_THROW(parse_checkpoint("garbage\n"), std::runtime_error);
  EXPECT_THROW(c.require("missing"), std::runtime_error);
}

TEST(TextIo, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-310, -2.5, 123456789.0, 0.30000000000000004}) {
    EXPECT_EQ(*parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_FALSE(parse_double("1.0x").has_value());
  EXPECT_FALSE(parse_double("").has_value());
}
