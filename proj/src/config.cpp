#include "qfraud/config.hpp"

#include <cstdlib>
#include <set>

#include <json.hpp>

#include "qfraud/error.hpp"
#include "qfraud/text_io.hpp"

namespace qfraud {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + key + "' has the wrong type");
  }
}

json to_json(const RunConfig& c) {
  json rotations = json::array();
  for (Axis a : c.qgnn.rotations) rotations.push_back(to_string(a));
  return json{
      {"dataset", c.dataset.string()},
      {"seed", c.seed},
      {"output_dir", c.output_dir.string()},
      {"emit_svg", c.emit_svg},
      {"split", {{"train", c.split.train_frac}, {"val", c.split.val_frac}, {"test", c.split.test_frac}}},
      {"tda",
       {{"projection", c.tda.projection},
        {"n_intervals", c.tda.cover.n_intervals},
        {"overlap", c.tda.cover.overlap_frac},
        {"eps", c.tda.dbscan.eps},
        {"min_pts", c.tda.dbscan.min_pts}}},
      {"qgnn",
       {{"qubits", c.qgnn.qubits},
        {"layers", c.qgnn.layers},
        {"entangler", to_string(c.qgnn.entangler)},
        {"rotations", rotations},
        {"encode_activation", to_string(c.qgnn.encode_activation)},
        {"gradient", to_string(c.qgnn.gradient)}}},
      {"sage", {{"widths", c.sage.widths}, {"samples", c.sage.samples}, {"dropout", c.sage.dropout}}},
      {"training",
       {{"epochs", c.training.epochs},
        {"batch_size", c.training.batch_size},
        {"learning_rate", c.training.adam.learning_rate},
        {"beta1", c.training.adam.beta1},
        {"beta2", c.training.adam.beta2},
        {"epsilon", c.training.adam.epsilon}}},
      {"grid", {{"qubits", c.grid.qubits}, {"layers", c.grid.layers}}},
  };
}

}  // namespace

void RunConfig::validate() const {
  auto wrap = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  };
  if (dataset.empty()) throw ConfigError("dataset path must not be empty");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  wrap([&] { split.validate(); });
  wrap([&] { tda.validate(); });
  wrap([&] { qgnn.validate(); });
  wrap([&] { sage.validate(); });
  wrap([&] { training.validate(); });
  if (training.seed != seed) throw ConfigError("training seed must equal the run seed");
  if (grid.qubits.empty() || grid.layers.empty()) throw ConfigError("grid lists must not be empty");
  for (int q : grid.qubits) {
    if (q < 1 || q > kMaxQubits) throw ConfigError("grid qubit counts must be in [1, 20]");
  }
  for (int l : grid.layers) {
    if (l < 1) throw ConfigError("grid layer counts must be positive");
  }
}

RunConfig default_run_config() {
  RunConfig c;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) c.output_dir = root;
  c.training.seed = c.seed;
  return c;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c = default_run_config();
  reject_unknown(j, "", {"dataset", "seed", "output_dir", "emit_svg", "split", "tda", "qgnn", "sage",
                         "training", "grid"});

  std::string dataset = c.dataset.string(), output_dir = c.output_dir.string();
  read(j, "dataset", dataset, "");
  read(j, "output_dir", output_dir, "");
  c.dataset = dataset;
  c.output_dir = output_dir;
  read(j, "seed", c.seed, "");
  read(j, "emit_svg", c.emit_svg, "");

  if (j.contains("split")) {
    const auto& s = j["split"];
    reject_unknown(s, "split.", {"train", "val", "test"});
    read(s, "train", c.split.train_frac, "split.");
    read(s, "val", c.split.val_frac, "split.");
    read(s, "test", c.split.test_frac, "split.");
  }
  if (j.contains("tda")) {
    const auto& t = j["tda"];
    reject_unknown(t, "tda.", {"projection", "n_intervals", "overlap", "eps", "min_pts"});
    read(t, "projection", c.tda.projection, "tda.");
    read(t, "n_intervals", c.tda.cover.n_intervals, "tda.");
    read(t, "overlap", c.tda.cover.overlap_frac, "tda.");
    read(t, "eps", c.tda.dbscan.eps, "tda.");
    read(t, "min_pts", c.tda.dbscan.min_pts, "tda.");
  }
  if (j.contains("qgnn")) {
    const auto& q = j["qgnn"];
    reject_unknown(q, "qgnn.",
                   {"qubits", "layers", "entangler", "rotations", "encode_activation", "gradient"});
    read(q, "qubits", c.qgnn.qubits, "qgnn.");
    read(q, "layers", c.qgnn.layers, "qgnn.");
    try {
      std::string s;
      if (q.contains("entangler")) {
        read(q, "entangler", s, "qgnn.");
        c.qgnn.entangler = parse_entangler(s);
      }
      if (q.contains("rotations")) {
        std::vector<std::string> axes;
        read(q, "rotations", axes, "qgnn.");
        c.qgnn.rotations.clear();
        for (const auto& a : axes) c.qgnn.rotations.push_back(parse_axis(a));
      }
      if (q.contains("encode_activation")) {
        read(q, "encode_activation", s, "qgnn.");
        c.qgnn.encode_activation = parse_encode_activation(s);
      }
      if (q.contains("gradient")) {
        read(q, "gradient", s, "qgnn.");
        c.qgnn.gradient = parse_gradient_method(s);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("sage")) {
    const auto& s = j["sage"];
    reject_unknown(s, "sage.", {"widths", "samples", "dropout"});
    read(s, "widths", c.sage.widths, "sage.");
    read(s, "samples", c.sage.samples, "sage.");
    read(s, "dropout", c.sage.dropout, "sage.");
  }
  if (j.contains("training")) {
    const auto& t = j["training"];
    reject_unknown(t, "training.",
                   {"epochs", "batch_size", "learning_rate", "beta1", "beta2", "epsilon"});
    read(t, "epochs", c.training.epochs, "training.");
    read(t, "batch_size", c.training.batch_size, "training.");
    read(t, "learning_rate", c.training.adam.learning_rate, "training.");
    read(t, "beta1", c.training.adam.beta1, "training.");
    read(t, "beta2", c.training.adam.beta2, "training.");
    read(t, "epsilon", c.training.adam.epsilon, "training.");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, "grid.", {"qubits", "layers"});
    read(g, "qubits", c.grid.qubits, "grid.");
    read(g, "layers", c.grid.layers, "grid.");
  }
  c.training.seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error&) {
    throw ConfigError("cannot read config file '" + path.string() + "'");
  }
  return parse_run_config(text);
}

std::string run_config_json(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string corpus_config_hash(const RunConfig& config) {
  const json j = to_json(config);
  const json corpus{{"seed", j["seed"]}, {"split", j["split"]}, {"tda", j["tda"]}};
  return hex64(fnv1a64(corpus.dump()));
}

}  // namespace qfraud
