#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qfraud/config.hpp"
#include "qfraud/metrics.hpp"
#include "qfraud/params.hpp"
#include "qfraud/tda_graph.hpp"
#include "qfraud/training.hpp"

namespace qfraud {

enum class ModelKind { Qgnn, Sage };
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Output layout below config.output_dir:
///   corpus/            train.graphs val.graphs test.graphs split.txt scaler.txt manifest.json
///   <model>/           checkpoint.txt history.csv manifest.json
///   <model>/eval/      report.txt roc.csv pr.csv scores.csv [roc.svg pr.svg] manifest.json
///   grid/              summary.csv summary.txt manifest.json q<Q>_l<L>/...
std::filesystem::path corpus_dir(const RunConfig& config);
std::filesystem::path model_dir(const RunConfig& config, ModelKind kind);
std::filesystem::path eval_dir(const RunConfig& config, ModelKind kind);
std::filesystem::path grid_dir(const RunConfig& config);

struct Corpus {
  std::vector<TransactionGraph> train, val, test;
  std::string hash;  // over the three serialised splits
};

/// Undersample, split, scale (fitted on train) and graph every transaction.
Corpus make_corpus(const TransactionSet& data, const RunConfig& config);
Corpus load_corpus_dir(const std::filesystem::path& dir);

struct TrainedModel {
  Checkpoint checkpoint;
  TrainHistory history;
};

TrainedModel train_model(const RunConfig& config, ModelKind kind, const Corpus& corpus);

/// Scores with a checkpoint after checking it against the config's architecture.
std::vector<double> score_graphs(const Checkpoint& ckpt, const RunConfig& config,
                                 ModelKind kind, const std::vector<TransactionGraph>& graphs);

/// Threshold picked by max F1 on `val` (0.5 if val lacks a class), applied to `test`.
EvalReport evaluate_model(const Checkpoint& ckpt, const RunConfig& config, ModelKind kind,
                          const Corpus& corpus);

struct GridRow {
  int qubits = 0;
  int layers = 0;
  EvalReport report;
};

std::string format_grid_csv(const std::vector<GridRow>& rows);
std::string format_grid_table(const std::vector<GridRow>& rows);

// Commands. Each validates the config first and writes its directory
// atomically: a staging directory is renamed into place on success.
void cmd_build_graphs(const RunConfig& config);
void cmd_train(const RunConfig& config, ModelKind kind);
EvalReport cmd_evaluate(const RunConfig& config, ModelKind kind,
                        const std::filesystem::path& checkpoint = {});
std::vector<GridRow> cmd_grid(const RunConfig& config);
/// Renders an SVG next to every history.csv, roc.csv and pr.csv under `dir`.
std::vector<std::filesystem::path> cmd_plot(const std::filesystem::path& dir);

}  // namespace qfraud
