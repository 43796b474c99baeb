#include "qfraud/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <system_error>

#include <json.hpp>

#include "qfraud/dataset.hpp"
#include "qfraud/error.hpp"
#include "qfraud/gnn_baseline.hpp"
#include "qfraud/graph_io.hpp"
#include "qfraud/qgnn.hpp"
#include "qfraud/rng.hpp"
#include "qfraud/svg_plot.hpp"
#include "qfraud/text_io.hpp"

namespace qfraud {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

class StagedDir {
 public:
  explicit StagedDir(fs::path final_path)
      : final_(std::move(final_path)), tmp_(final_.string() + ".partial") {
    fs::remove_all(tmp_);
    fs::create_directories(tmp_);
  }
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;
  ~StagedDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(tmp_, ec);
    }
  }
  const fs::path& path() const { return tmp_; }
  void commit() {
    fs::remove_all(final_);
    fs::rename(tmp_, final_);
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path tmp_;
  bool committed_ = false;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& config,
                    json extra, double seconds) {
  json artifacts = json::array();
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir);
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  for (const auto& rel : files) {
    artifacts.push_back({{"path", rel.generic_string()},
                         {"fnv1a64", hex64(fnv1a64(read_file(dir / rel)))}});
  }
  json m{{"command", command},
         {"tool_version", kToolVersion},
         {"config", json::parse(run_config_json(config))},
         {"wall_clock_seconds", seconds},
         {"artifacts", artifacts}};
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

std::string corpus_hash_of(const std::string& train, const std::string& val,
                           const std::string& test) {
  std::uint64_t h = fnv1a64(train);
  h = fnv1a64(val, h);
  h = fnv1a64(test, h);
  return hex64(h);
}

void check_corpus_match(const Checkpoint& ckpt, const Corpus& corpus) {
  auto it = ckpt.meta.find("corpus_hash");
  if (it != ckpt.meta.end() && it->second != corpus.hash) {
    throw ConfigError("checkpoint was trained on corpus " + it->second +
                      " but the corpus directory holds " + corpus.hash +
                      "; retrain after rebuilding graphs");
  }
}

void write_eval_files(const fs::path& dir, const EvalReport& r,
                      const std::vector<TransactionGraph>& test,
                      const std::vector<double>& scores, bool svg) {
  write_file_atomic(dir / "report.txt", format_report(r));
  write_file_atomic(dir / "roc.csv", format_curve_csv(r.roc.points, "fpr", "tpr"));
  write_file_atomic(dir / "pr.csv", format_curve_csv(r.pr.points, "recall", "precision"));
  std::string s = "source_row,label,score\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    s += std::to_string(test[i].source_row) + ',' + std::to_string(test[i].label) + ',' +
         format_double(scores[i]) + '\n';
  }
  write_file_atomic(dir / "scores.csv", s);
  if (svg) {
    write_file_atomic(dir / "roc.svg", render_line_plot({{"ROC", r.roc.points}}, "ROC curve",
                                                        "false positive rate",
                                                        "true positive rate"));
    write_file_atomic(dir / "pr.svg",
                      render_line_plot({{"PR", r.pr.points}}, "Precision-recall curve",
                                       "recall", "precision"));
  }
}

json report_summary(const EvalReport& r) {
  return {{"threshold", r.threshold}, {"accuracy_pct", r.accuracy_pct},
          {"precision_pct", r.precision_pct}, {"recall_pct", r.recall_pct},
          {"f1", r.f1}, {"auc_roc", r.roc.auc}, {"auc_pr", r.pr.auc}};
}

// Writes checkpoint, history and an eval/ subdirectory for one trained model.
EvalReport train_and_evaluate_into(const fs::path& dir, const RunConfig& config, ModelKind kind,
                                   const Corpus& corpus) {
  TrainedModel m = train_model(config, kind, corpus);
  save_checkpoint(dir / "checkpoint.txt", m.checkpoint);
  write_file_atomic(dir / "history.csv", format_history_csv(m.history));
  EvalReport r = evaluate_model(m.checkpoint, config, kind, corpus);
  const auto scores = score_graphs(m.checkpoint, config, kind, corpus.test);
  write_eval_files(dir / "eval", r, corpus.test, scores, config.emit_svg);
  return r;
}

std::vector<CurvePoint> read_xy_csv(const fs::path& path, std::size_t y_column) {
  std::vector<CurvePoint> pts;
  const std::string text = read_file(path);
  bool header = true;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() <= y_column) throw DataError("malformed row in " + path.string());
    auto x = parse_double(cols[0]);
    auto y = parse_double(cols[y_column]);
    if (!x || !y) throw DataError("malformed number in " + path.string());
    if (std::isfinite(*y)) pts.push_back({*x, *y});
  }
  return pts;
}

}  // namespace

std::string to_string(ModelKind kind) { return kind == ModelKind::Qgnn ? "qgnn" : "sage"; }

ModelKind parse_model_kind(const std::string& name) {
  if (name == "qgnn") return ModelKind::Qgnn;
  if (name == "sage") return ModelKind::Sage;
  throw ConfigError("unknown model '" + name + "' (expected qgnn or sage)");
}

fs::path corpus_dir(const RunConfig& c) { return c.output_dir / "corpus"; }
fs::path model_dir(const RunConfig& c, ModelKind kind) { return c.output_dir / to_string(kind); }
fs::path eval_dir(const RunConfig& c, ModelKind kind) { return model_dir(c, kind) / "eval"; }
fs::path grid_dir(const RunConfig& c) { return c.output_dir / "grid"; }

Corpus make_corpus(const TransactionSet& data, const RunConfig& config) {
  const TransactionSet balanced = undersample(data, derive_seed(config.seed, "undersample"));
  const SplitResult parts = split(balanced, config.split, derive_seed(config.seed, "split"));
  const MinMaxScaler scaler = MinMaxScaler::fit(parts.train);
  Corpus c;
  c.train = build_corpus(scaler.apply(parts.train), config.tda);
  c.val = build_corpus(scaler.apply(parts.val), config.tda);
  c.test = build_corpus(scaler.apply(parts.test), config.tda);
  c.hash = corpus_hash_of(format_corpus(c.train), format_corpus(c.val), format_corpus(c.test));
  return c;
}

Corpus load_corpus_dir(const fs::path& dir) {
  for (const char* name : {"train.graphs", "val.graphs", "test.graphs"}) {
    if (!fs::exists(dir / name)) {
      throw DataError("missing corpus file " + (dir / name).string() + "; run build-graphs first");
    }
  }
  Corpus c;
  c.train = load_corpus(dir / "train.graphs");
  c.val = load_corpus(dir / "val.graphs");
  c.test = load_corpus(dir / "test.graphs");
  c.hash = corpus_hash_of(read_file(dir / "train.graphs"), read_file(dir / "val.graphs"),
                          read_file(dir / "test.graphs"));
  return c;
}

TrainedModel train_model(const RunConfig& config, ModelKind kind, const Corpus& corpus) {
  TrainedModel out;
  if (kind == ModelKind::Qgnn) {
    auto r = qgnn_train(corpus.train, corpus.val, config.qgnn, config.training);
    out.checkpoint = qgnn_to_checkpoint(r.params, config.qgnn);
    out.history = std::move(r.history);
  } else {
    auto r = sage_train(corpus.train, corpus.val, config.sage, config.training);
    out.checkpoint = sage_to_checkpoint(r.params, config.sage);
    out.history = std::move(r.history);
  }
  out.checkpoint.meta["corpus_hash"] = corpus.hash;
  out.checkpoint.meta["seed"] = std::to_string(config.seed);
  return out;
}

std::vector<double> score_graphs(const Checkpoint& ckpt, const RunConfig& config, ModelKind kind,
                                 const std::vector<TransactionGraph>& graphs) {
  if (kind == ModelKind::Qgnn) {
    QgnnModel m = qgnn_from_checkpoint(ckpt);
    const QgnnConfig& want = config.qgnn;
    if (m.config.qubits != want.qubits || m.config.layers != want.layers) {
      throw ConfigError("checkpoint has qubits=" + std::to_string(m.config.qubits) +
                        " layers=" + std::to_string(m.config.layers) + " but config asks for qubits=" +
                        std::to_string(want.qubits) + " layers=" + std::to_string(want.layers));
    }
    if (m.config.entangler != want.entangler || m.config.rotations != want.rotations ||
        m.config.encode_activation != want.encode_activation) {
      throw ConfigError("checkpoint circuit (entangler, rotations or activation) differs from config");
    }
    return qgnn_predict(graphs, m.params.values, m.config);
  }
  SageModel m = sage_from_checkpoint(ckpt);
  if (m.config.widths != config.sage.widths) {
    throw ConfigError("checkpoint layer widths differ from config sage.widths");
  }
  return sage_predict(graphs, m.params.values, m.config);
}

EvalReport evaluate_model(const Checkpoint& ckpt, const RunConfig& config, ModelKind kind,
                          const Corpus& corpus) {
  ScoredSet val;
  val.scores = score_graphs(ckpt, config, kind, corpus.val);
  for (const auto& g : corpus.val) val.labels.push_back(g.label);
  const std::size_t pos = val.positives();
  const double threshold = (pos > 0 && pos < val.size()) ? optimal_threshold(val) : 0.5;

  ScoredSet test;
  test.scores = score_graphs(ckpt, config, kind, corpus.test);
  for (const auto& g : corpus.test) test.labels.push_back(g.label);
  return evaluate(test, threshold);
}

std::string format_grid_csv(const std::vector<GridRow>& rows) {
  std::string out = "qubits,layers,accuracy,precision,recall,f1,auc_pr,auc_roc\n";
  for (const auto& r : rows) {
    out += std::to_string(r.qubits) + ',' + std::to_string(r.layers) + ',' +
           format_double(r.report.accuracy_pct) + ',' + format_double(r.report.precision_pct) +
           ',' + format_double(r.report.recall_pct) + ',' + format_double(r.report.f1) + ',' +
           format_double(r.report.pr.auc) + ',' + format_double(r.report.roc.auc) + '\n';
  }
  return out;
}

std::string format_grid_table(const std::vector<GridRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%6s %6s %9s %10s %7s %6s %7s %7s\n", "qubits", "layers",
                "accuracy", "precision", "recall", "f1", "auc_pr", "auc_roc");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%6d %6d %8.2f%% %9.2f%% %6.2f%% %6.3f %7.3f %7.3f\n", r.qubits,
                  r.layers, r.report.accuracy_pct, r.report.precision_pct, r.report.recall_pct,
                  r.report.f1, r.report.pr.auc, r.report.roc.auc);
    out += buf;
  }
  return out;
}

void cmd_build_graphs(const RunConfig& config) {
  config.validate();
  Stopwatch clock;
  const TransactionSet data = load_transactions(config.dataset);
  const TransactionSet balanced = undersample(data, derive_seed(config.seed, "undersample"));
  const std::uint64_t split_seed = derive_seed(config.seed, "split");
  const SplitResult parts = split(balanced, config.split, split_seed);
  const MinMaxScaler scaler = MinMaxScaler::fit(parts.train);
  const auto train = build_corpus(scaler.apply(parts.train), config.tda);
  const auto val = build_corpus(scaler.apply(parts.val), config.tda);
  const auto test = build_corpus(scaler.apply(parts.test), config.tda);
  const std::string train_s = format_corpus(train), val_s = format_corpus(val),
                    test_s = format_corpus(test);

  std::size_t max_nodes = 0;
  for (const auto* part : {&train, &val, &test}) {
    for (const auto& g : *part) max_nodes = std::max(max_nodes, g.num_nodes());
  }

  StagedDir stage(corpus_dir(config));
  write_file_atomic(stage.path() / "train.graphs", train_s);
  write_file_atomic(stage.path() / "val.graphs", val_s);
  write_file_atomic(stage.path() / "test.graphs", test_s);
  write_file_atomic(stage.path() / "split.txt", format_split_manifest(parts, config.split, split_seed));
  write_file_atomic(stage.path() / "scaler.txt",
                    "time_min = " + format_double(scaler.time_min) + "\ntime_max = " +
                        format_double(scaler.time_max) + "\namount_min = " +
                        format_double(scaler.amount_min) + "\namount_max = " +
                        format_double(scaler.amount_max) + "\n");
  const ClassCounts in = data.counts();
  write_manifest(stage.path(), "build-graphs", config,
                 {{"corpus_hash", corpus_hash_of(train_s, val_s, test_s)},
                  {"corpus_config_hash", corpus_config_hash(config)},
                  {"dataset_rows", data.size()},
                  {"dataset_fraud", in.fraud},
                  {"graphs", {{"train", train.size()}, {"val", val.size()}, {"test", test.size()}}},
                  {"max_nodes", max_nodes}},
                 clock.seconds());
  stage.commit();
}

void cmd_train(const RunConfig& config, ModelKind kind) {
  config.validate();
  Stopwatch clock;
  const Corpus corpus = load_corpus_dir(corpus_dir(config));
  TrainedModel m = train_model(config, kind, corpus);
  StagedDir stage(model_dir(config, kind));
  save_checkpoint(stage.path() / "checkpoint.txt", m.checkpoint);
  write_file_atomic(stage.path() / "history.csv", format_history_csv(m.history));
  if (config.emit_svg) {
    std::vector<CurvePoint> tr, va;
    for (const auto& e : m.history.epochs) {
      tr.push_back({static_cast<double>(e.epoch), e.train_loss});
      if (std::isfinite(e.val_loss)) va.push_back({static_cast<double>(e.epoch), e.val_loss});
    }
    write_file_atomic(stage.path() / "history.svg",
                      render_line_plot({{"train", tr}, {"val", va}}, "Training loss", "epoch",
                                       "loss"));
  }
  write_manifest(stage.path(), "train --model " + to_string(kind), config,
                 {{"model", to_string(kind)},
                  {"corpus_hash", corpus.hash},
                  {"parameter_count", m.checkpoint.values.size()}},
                 clock.seconds());
  stage.commit();
}

EvalReport cmd_evaluate(const RunConfig& config, ModelKind kind, const fs::path& checkpoint) {
  config.validate();
  Stopwatch clock;
  const fs::path ckpt_path = checkpoint.empty() ? model_dir(config, kind) / "checkpoint.txt" : checkpoint;
  if (!fs::exists(ckpt_path)) {
    throw DataError("missing checkpoint " + ckpt_path.string() + "; run train first");
  }
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const Corpus corpus = load_corpus_dir(corpus_dir(config));
  check_corpus_match(ckpt, corpus);
  const EvalReport r = evaluate_model(ckpt, config, kind, corpus);
  const auto scores = score_graphs(ckpt, config, kind, corpus.test);

  const fs::path out = checkpoint.empty() ? eval_dir(config, kind)
                                          : ckpt_path.parent_path() / "eval";
  StagedDir stage(out);
  write_eval_files(stage.path(), r, corpus.test, scores, config.emit_svg);
  write_manifest(stage.path(), "evaluate --model " + to_string(kind), config,
                 {{"model", to_string(kind)},
                  {"checkpoint", ckpt_path.generic_string()},
                  {"checkpoint_fnv1a64", hex64(fnv1a64(read_file(ckpt_path)))},
                  {"corpus_hash", corpus.hash},
                  {"parameter_count", ckpt.values.size()},
                  {"metrics", report_summary(r)}},
                 clock.seconds());
  stage.commit();
  return r;
}

std::vector<GridRow> cmd_grid(const RunConfig& config) {
  config.validate();
  Stopwatch clock;
  const Corpus corpus = load_corpus_dir(corpus_dir(config));
  StagedDir stage(grid_dir(config));
  std::vector<GridRow> rows;
  json runs = json::array();
  for (int q : config.grid.qubits) {
    for (int l : config.grid.layers) {
      RunConfig c = config;
      c.qgnn.qubits = q;
      c.qgnn.layers = l;
      const std::string name = "q" + std::to_string(q) + "_l" + std::to_string(l);
      GridRow row{q, l, train_and_evaluate_into(stage.path() / name, c, ModelKind::Qgnn, corpus)};
      runs.push_back({{"qubits", q},
                      {"layers", l},
                      {"directory", name},
                      {"parameter_count", QgnnParams::make_layout(c.qgnn.circuit()).size()},
                      {"metrics", report_summary(row.report)}});
      rows.push_back(std::move(row));
    }
  }
  write_file_atomic(stage.path() / "summary.csv", format_grid_csv(rows));
  write_file_atomic(stage.path() / "summary.txt", format_grid_table(rows));
  write_manifest(stage.path(), "grid", config, {{"corpus_hash", corpus.hash}, {"runs", runs}},
                 clock.seconds());
  stage.commit();
  return rows;
}

std::vector<fs::path> cmd_plot(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    const auto name = entry.path().filename();
    if (entry.is_regular_file() && (name == "history.csv" || name == "roc.csv" || name == "pr.csv")) {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  std::vector<fs::path> written;
  for (const auto& in : inputs) {
    fs::path out = in;
    out.replace_extension(".svg");
    const auto name = in.filename();
    std::string svg;
    if (name == "history.csv") {
      svg = render_line_plot({{"train", read_xy_csv(in, 1)}, {"val", read_xy_csv(in, 2)}},
                             "Training loss", "epoch", "loss");
    } else if (name == "roc.csv") {
      svg = render_line_plot({{"ROC", read_xy_csv(in, 1)}}, "ROC curve", "false positive rate",
                             "true positive rate");
    } else {
      svg = render_line_plot({{"PR", read_xy_csv(in, 1)}}, "Precision-recall curve", "recall",
                             "precision");
    }
    write_file_atomic(out, svg);
    written.push_back(out);
  }
  return written;
}

}  // namespace qfraud
