#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "qfraud/dataset.hpp"
#include "qfraud/error.hpp"
#include "qfraud/pipeline.hpp"
#include "qfraud/qgnn.hpp"
#include "qfraud/synthetic.hpp"
#include "qfraud/text_io.hpp"
#include "support/fixtures.hpp"

using namespace qfraud;
namespace fs = std::filesystem;

namespace {

RunConfig small_run(const fs::path& dir) {
  RunConfig c = default_run_config();
  c.dataset = dir / "cc.csv";
  c.output_dir = dir / "out";
  c.training.epochs = 2;
  c.qgnn.qubits = 3;
  c.sage.widths = {8, 8};
  c.grid.qubits = {2, 3};
  c.grid.layers = {1, 2};
  c.qgnn.gradient = GradientMethod::Adjoint;
  return c;
}

fs::path make_dataset(const std::string& name, std::size_t legit = 400, std::size_t fraud = 40,
                      double shift = 1.0) {
  const auto dir = fixture::temp_dir(name);
  save_transactions(dir / "cc.csv", synthetic_transactions(legit, fraud, 13, shift));
  return dir;
}

}  // namespace

TEST(Pipeline, BuildGraphsWritesCorpusAndManifest) {
  const auto dir = make_dataset("pipe_build");
  const RunConfig c = small_run(dir);
  cmd_build_graphs(c);
  const auto cdir = corpus_dir(c);
  for (const char* f : {"train.graphs", "val.graphs", "test.graphs", "split.txt", "scaler.txt", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(cdir / f)) << f;
  }
  EXPECT_FALSE(fs::exists(cdir.string() + ".partial"));
  const Corpus corpus = load_corpus_dir(cdir);
  EXPECT_EQ(corpus.train.size() + corpus.val.size() + corpus.test.size(), 80u);
  EXPECT_EQ(corpus.test.size(), 24u);
  EXPECT_EQ(corpus.val.size(), 4u);
  for (const auto* part : {&corpus.train, &corpus.val, &corpus.test})
    for (const auto& g : *part) EXPECT_LE(g.num_nodes(), 28u);

  const std::string manifest = read_file(cdir / "manifest.json");
  EXPECT_NE(manifest.find("\"corpus_hash\": \"" + corpus.hash + "\""), std::string::npos);
  EXPECT_NE(manifest.find("\"train.graphs\""), std::string::npos);
  EXPECT_NE(manifest.find("\"eps\": 0.1"), std::string::npos);

  // Same config rebuilds identical bytes.
  const std::string before = read_file(cdir / "train.graphs") + read_file(cdir / "test.graphs");
  cmd_build_graphs(c);
  EXPECT_EQ(read_file(cdir / "train.graphs") + read_file(cdir / "test.graphs"), before);
}

TEST(Pipeline, InvalidConfigWritesNothing) {
  const auto dir = make_dataset("pipe_invalid");
  RunConfig c = small_run(dir);
  c.tda.dbscan.eps = 0.0;
  EXPECT_THROW(cmd_build_graphs(c), ConfigError);
  EXPECT_FALSE(fs::exists(c.output_dir));
}

TEST(Pipeline, MissingInputsAreRuntimeErrors) {
  const auto dir = fixture::temp_dir("pipe_missing");
  RunConfig c = small_run(dir);
  EXPECT_THROW(cmd_build_graphs(c), DataError);
  EXPECT_THROW(cmd_train(c, ModelKind::Qgnn), DataError);
  EXPECT_FALSE(fs::exists(model_dir(c, ModelKind::Qgnn)));
}

TEST(Pipeline, TrainEvaluateBothModelsReproducibly) {
  const auto dir = make_dataset("pipe_train");
  const RunConfig c = small_run(dir);
  cmd_build_graphs(c);
  for (ModelKind kind : {ModelKind::Qgnn, ModelKind::Sage}) {
    cmd_train(c, kind);
    const auto mdir = model_dir(c, kind);
    EXPECT_TRUE(fs::exists(mdir / "checkpoint.txt"));
    EXPECT_NE(read_file(mdir / "manifest.json").find("\"parameter_count\""), std::string::npos);
    const std::string history = read_file(mdir / "history.csv");
    EXPECT_EQ(history.substr(0, 25), "epoch,train_loss,val_loss");

    const EvalReport r = cmd_evaluate(c, kind);
    EXPECT_EQ(r.n, 24u);
    const auto edir = eval_dir(c, kind);
    for (const char* f : {"report.txt", "roc.csv", "pr.csv", "scores.csv", "roc.svg", "pr.svg", "manifest.json"}) {
      EXPECT_TRUE(fs::exists(edir / f)) << f;
    }
    const std::string report = read_file(edir / "report.txt");
    const std::string ckpt = read_file(mdir / "checkpoint.txt");

    cmd_train(c, kind);
    cmd_evaluate(c, kind);
    EXPECT_EQ(read_file(mdir / "history.csv"), history);
    EXPECT_EQ(read_file(mdir / "checkpoint.txt"), ckpt);
    EXPECT_EQ(read_file(edir / "report.txt"), report);
  }
}

TEST(Pipeline, ZeroEpochCheckpointEqualsInitialisation) {
  const auto dir = make_dataset("pipe_zero");
  RunConfig c = small_run(dir);
  c.training.epochs = 0;
  cmd_build_graphs(c);
  cmd_train(c, ModelKind::Qgnn);
  const auto ck = load_checkpoint(model_dir(c, ModelKind::Qgnn) / "checkpoint.txt");
  Rng init(derive_seed(c.seed, "qgnn-init"));
  EXPECT_EQ(ck.values, QgnnParams::initialise(c.qgnn.circuit(), init).values);
  EXPECT_EQ(read_file(model_dir(c, ModelKind::Qgnn) / "history.csv"), "epoch,train_loss,val_loss\n");
}

TEST(Pipeline, EvaluateRejectsMismatches) {
  const auto dir = make_dataset("pipe_mismatch");
  RunConfig c = small_run(dir);
  cmd_build_graphs(c);
  cmd_train(c, ModelKind::Qgnn);
  RunConfig other = c;
  other.qgnn.qubits = 4;
  EXPECT_THROW(cmd_evaluate(other, ModelKind::Qgnn), ConfigError);

  // Rebuilding the corpus with different settings invalidates the checkpoint.
  RunConfig rebuilt = c;
  rebuilt.tda.dbscan.eps = 0.3;
  cmd_build_graphs(rebuilt);
  EXPECT_THROW(cmd_evaluate(rebuilt, ModelKind::Qgnn), ConfigError);
  EXPECT_THROW(cmd_evaluate(c, ModelKind::Sage), DataError);
}

TEST(Pipeline, UntrainedModelRanksNearChance) {
  const auto dir = make_dataset("pipe_chance", 600, 300, 0.0);
  RunConfig c = small_run(dir);
  c.training.epochs = 0;
  cmd_build_graphs(c);
  cmd_train(c, ModelKind::Qgnn);
  const EvalReport r = cmd_evaluate(c, ModelKind::Qgnn);
  EXPECT_GE(r.roc.auc, 0.3);
  EXPECT_LE(r.roc.auc, 0.7);
}

TEST(Pipeline, GridAndPlot) {
  const auto dir = make_dataset("pipe_grid");
  RunConfig c = small_run(dir);
  c.training.epochs = 1;
  c.emit_svg = false;
  cmd_build_graphs(c);
  const auto rows = cmd_grid(c);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].qubits, 2);
  EXPECT_EQ(rows[0].layers, 1);
  EXPECT_EQ(rows[3].qubits, 3);
  EXPECT_EQ(rows[3].layers, 2);
  const std::string csv = read_file(grid_dir(c) / "summary.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "qubits,layers,accuracy,precision,recall,f1,auc_pr,auc_roc");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(grid_dir(c) / "summary.txt"));
  EXPECT_TRUE(fs::exists(grid_dir(c) / "q3_l2" / "eval" / "report.txt"));
  EXPECT_FALSE(fs::exists(grid_dir(c) / "q3_l2" / "eval" / "roc.svg"));

  cmd_grid(c);
  EXPECT_EQ(read_file(grid_dir(c) / "summary.csv"), csv);

  const auto written = cmd_plot(grid_dir(c));
  EXPECT_EQ(written.size(), 12u);
  EXPECT_TRUE(fs::exists(grid_dir(c) / "q3_l2" / "eval" / "roc.svg"));
  EXPECT_NE(read_file(grid_dir(c) / "q2_l1" / "history.svg").find("<svg"), std::string::npos);
}
