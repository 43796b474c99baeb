// qfraud: build TDA graph corpora, train the QGNN or GraphSAGE model,
// evaluate, run the qubit/layer grid and render plots.
//
// Exit codes: 0 success, 1 configuration or validation error, 2 runtime failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qfraud/config.hpp"
#include "qfraud/error.hpp"
#include "qfraud/pipeline.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> dataset, output, entangler, gradient, activation;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs, batch_size, qubits, layers;
  std::optional<double> learning_rate, eps;
  bool no_svg = false;
};

qfraud::RunConfig resolve(const Overrides& o) {
  using namespace qfraud;
  RunConfig c = o.config_path.empty() ? default_run_config() : load_run_config(o.config_path);
  if (o.dataset) c.dataset = *o.dataset;
  if (o.output) c.output_dir = *o.output;
  if (o.seed) c.seed = c.training.seed = *o.seed;
  if (o.epochs) c.training.epochs = *o.epochs;
  if (o.batch_size) c.training.batch_size = *o.batch_size;
  if (o.learning_rate) c.training.adam.learning_rate = *o.learning_rate;
  if (o.qubits) c.qgnn.qubits = *o.qubits;
  if (o.layers) c.qgnn.layers = *o.layers;
  if (o.eps) c.tda.dbscan.eps = *o.eps;
  try {
    if (o.entangler) c.qgnn.entangler = parse_entangler(*o.entangler);
    if (o.gradient) c.qgnn.gradient = parse_gradient_method(*o.gradient);
    if (o.activation) c.qgnn.encode_activation = parse_encode_activation(*o.activation);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (o.no_svg) c.emit_svg = false;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fraud detection with TDA graphs, a simulated QGNN and a GraphSAGE baseline"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("-c,--config", o.config_path, "JSON run config")->check(CLI::ExistingFile);
  app.add_option("--dataset", o.dataset, "Credit-card CSV");
  app.add_option("-o,--output", o.output, "Output directory (default $QFRAUD_OUTPUT_ROOT or runs)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--epochs", o.epochs);
  app.add_option("--batch-size", o.batch_size);
  app.add_option("--lr", o.learning_rate, "Adam learning rate");
  app.add_option("--qubits", o.qubits);
  app.add_option("--layers", o.layers);
  app.add_option("--entangler", o.entangler, "chain or ring");
  app.add_option("--gradient", o.gradient, "parameter_shift or adjoint");
  app.add_option("--encode-activation", o.activation, "none or tanh_pi");
  app.add_option("--eps", o.eps, "DBSCAN eps");
  app.add_flag("--no-svg", o.no_svg, "Skip SVG rendering");

  auto* build = app.add_subcommand("build-graphs", "Undersample, split and build graph corpora");
  std::string model = "qgnn";
  auto* train = app.add_subcommand("train", "Train a model on the corpus");
  train->add_option("--model", model, "qgnn or sage")->check(CLI::IsMember({"qgnn", "sage"}));
  auto* eval = app.add_subcommand("evaluate", "Evaluate a checkpoint on the test split");
  std::string checkpoint;
  eval->add_option("--model", model, "qgnn or sage")->check(CLI::IsMember({"qgnn", "sage"}));
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file (default <output>/<model>/checkpoint.txt)");
  auto* grid = app.add_subcommand("grid", "Train and evaluate the QGNN over the qubit/layer grid");
  auto* plot = app.add_subcommand("plot", "Render SVGs for every curve CSV under a directory");
  std::string plot_dir;
  plot->add_option("dir", plot_dir, "Directory to scan (default: output directory)");
  auto* show = app.add_subcommand("show-config", "Print the resolved config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const qfraud::RunConfig config = resolve(o);
    if (build->parsed()) {
      qfraud::cmd_build_graphs(config);
      std::cout << "corpus written to " << qfraud::corpus_dir(config).string() << "\n";
    } else if (train->parsed()) {
      const auto kind = qfraud::parse_model_kind(model);
      qfraud::cmd_train(config, kind);
      std::cout << "model written to " << qfraud::model_dir(config, kind).string() << "\n";
    } else if (eval->parsed()) {
      const auto r = qfraud::cmd_evaluate(config, qfraud::parse_model_kind(model), checkpoint);
      std::cout << qfraud::format_report(r).substr(0, qfraud::format_report(r).find("roc_points"));
    } else if (grid->parsed()) {
      std::cout << qfraud::format_grid_table(qfraud::cmd_grid(config));
    } else if (plot->parsed()) {
      for (const auto& p : qfraud::cmd_plot(plot_dir.empty() ? config.output_dir : std::filesystem::path(plot_dir))) {
        std::cout << p.string() << "\n";
      }
    } else if (show->parsed()) {
      std::cout << qfraud::run_config_json(config);
    }
  } catch (const qfraud::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
