// SPDX-License-Identifier: Apache-2.0
//
// tmpgnn — temporal multilayer graphs: synthesis, supracentrality, anchored
// embeddings, pairwise classification, and missing-value imputation.
//
// Each subcommand writes its declared outputs plus a run manifest whose
// config block can be fed back through --config to reproduce the outputs
// byte for byte.
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmpgnn/graph_io.hpp"
#include "tmpgnn/imputation.hpp"
#include "tmpgnn/manifest.hpp"
#include "tmpgnn/tasks.hpp"

namespace {

using tmpgnn::ClassifyConfig;
using tmpgnn::CouplingMode;
using tmpgnn::SplitScheme;
using json = nlohmann::ordered_json;

std::string fnum(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, p);
}

std::string stem_of(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

double parse_omega(const std::string& s) {
  if (s == "auto") return -1.0;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v < 0.0)
    throw std::invalid_argument("--omega expects 'auto' or a nonnegative number, got '" + s + "'");
  return v;
}

CouplingMode parse_coupling(const std::string& s) {
  if (s == "chain") return CouplingMode::Chain;
  if (s == "teleport") return CouplingMode::Teleport;
  throw std::invalid_argument("--coupling expects chain or teleport, got '" + s + "'");
}

// Values from --config fill in every flag the command line left untouched.
struct ConfigMerge {
  CLI::App* sub;
  json cfg;

  template <class T>
  void operator()(const std::string& flag, const std::string& key, T& var) const {
    if (sub->count(flag) == 0 && cfg.contains(key)) var = cfg.at(key).get<T>();
  }
};

ConfigMerge merger_for(CLI::App* sub, const std::string& config_path) {
  ConfigMerge m{sub, json::object()};
  if (!config_path.empty()) m.cfg = tmpgnn::load_config_source(config_path);
  return m;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// ----------------------------------------------------------------- synth --

struct SynthArgs {
  uint32_t nodes = 20, layers = 5, streams = 1, communities = 2;
  double p_in = 0.3, p_out = 0.05, rewire = 0.1;
  std::string signal = "sinusoid";
  uint64_t seed = 0;
  std::string out = "graph.csv";
  std::string config_path;
};

int run_synth(CLI::App* sub, SynthArgs& a) {
  Timer timer;
  auto merge = merger_for(sub, a.config_path);
  merge("--nodes", "nodes", a.nodes);
  merge("--layers", "layers", a.layers);
  merge("--streams", "streams", a.streams);
  merge("--communities", "communities", a.communities);
  merge("--p-in", "p_in", a.p_in);
  merge("--p-out", "p_out", a.p_out);
  merge("--rewire", "rewire", a.rewire);
  merge("--signal", "signal", a.signal);
  merge("--seed", "seed", a.seed);
  merge("--out", "out", a.out);

  tmpgnn::SynthConfig cfg;
  cfg.num_nodes = a.nodes;
  cfg.num_layers = a.layers;
  cfg.num_streams = a.streams;
  cfg.communities = a.communities;
  cfg.p_in = a.p_in;
  cfg.p_out = a.p_out;
  cfg.rewire = a.rewire;
  cfg.seed = a.seed;
  tmpgnn::SignalKind kind;
  if (a.signal == "sinusoid")
    kind = tmpgnn::SignalKind::Sinusoid;
  else if (a.signal == "ar1")
    kind = tmpgnn::SignalKind::Ar1;
  else
    throw std::invalid_argument("--signal expects sinusoid or ar1, got '" + a.signal + "'");
  cfg.signals.assign(a.streams, kind);

  tmpgnn::TemporalMultilayerGraph g = tmpgnn::synth_graph(cfg);
  std::string labels_path = stem_of(a.out) + ".labels.csv";
  tmpgnn::save_graph(g, a.out);
  tmpgnn::save_labels(g, labels_path);

  tmpgnn::RunManifest m;
  m.subcommand = "synth";
  m.config = {{"nodes", a.nodes},   {"layers", a.layers}, {"streams", a.streams},
              {"communities", a.communities}, {"p_in", a.p_in}, {"p_out", a.p_out},
              {"rewire", a.rewire}, {"signal", a.signal}, {"seed", a.seed},
              {"out", a.out}};
  m.master_seed = a.seed;
  m.outputs = {a.out, labels_path};
  m.wall_clock_seconds = timer.seconds();
  tmpgnn::write_manifest(m, stem_of(a.out) + ".manifest.json");
  return 0;
}

// ------------------------------------------------------------ centrality --

struct CentralityArgs {
  std::string input;
  std::string omega = "auto";
  std::string coupling = "chain";
  double gamma = 0.1;
  uint32_t delta = 1;
  double tol = 1e-3;
  std::string out = "centrality";
  std::string config_path;
};

int run_centrality(CLI::App* sub, CentralityArgs& a) {
  Timer timer;
  auto merge = merger_for(sub, a.config_path);
  merge("--omega", "omega", a.omega);
  merge("--coupling", "coupling", a.coupling);
  merge("--gamma", "gamma", a.gamma);
  merge("--delta", "delta", a.delta);
  merge("--tol", "tol", a.tol);
  merge("--out", "out", a.out);
  merge("graph", "input", a.input);
  if (a.input.empty())
    throw std::invalid_argument("centrality: give an input graph, positionally or via --config");

  double omega_flag = parse_omega(a.omega);
  CouplingMode mode = parse_coupling(a.coupling);
  tmpgnn::TemporalMultilayerGraph g = tmpgnn::load_graph(a.input);
  if (g.num_layers < 2)
    throw std::invalid_argument("centrality needs at least 2 layers, got " +
                                std::to_string(g.num_layers));
  auto coupling = tmpgnn::interlayer_matrix(g.num_layers, a.delta, mode,
                                            mode == CouplingMode::Teleport ? a.gamma : 0.0);

  tmpgnn::CentralitySummary summary;
  double omega_used = 0.0;
  if (omega_flag < 0.0) {
    tmpgnn::OmegaSearchOptions opts;
    opts.tol = a.tol;
    auto st = tmpgnn::stationary_cc(g, coupling, opts);
    summary = st.summary;
    omega_used = st.selection.omega;
  } else {
    summary = tmpgnn::centralities(tmpgnn::build_supracentrality(g, omega_flag, coupling));
    omega_used = omega_flag;
  }

  std::string csv = "node,layer,joint,cc\n";
  for (uint32_t t = 0; t < g.num_layers; ++t)
    for (uint32_t v = 0; v < g.num_nodes; ++v)
      csv += std::to_string(v) + "," + std::to_string(t) + "," + fnum(summary.joint_at(v, t)) +
             "," + fnum(summary.cc_at(v, t)) + "\n";
  write_text(a.out + ".csv", csv);

  json report = {{"omega", omega_used}, {"lambda_max", summary.lambda_max}, {"mlc", summary.mlc}};
  write_text(a.out + ".json", report.dump(2) + "\n");

  tmpgnn::RunManifest m;
  m.subcommand = "centrality";
  m.config = {{"input", a.input}, {"omega", a.omega}, {"coupling", a.coupling},
              {"gamma", a.gamma}, {"delta", a.delta}, {"tol", a.tol},
              {"out", a.out}};
  m.inputs = {{a.input, tmpgnn::file_digest(a.input)}};
  m.outputs = {a.out + ".csv", a.out + ".json"};
  m.wall_clock_seconds = timer.seconds();
  tmpgnn::write_manifest(m, a.out + ".manifest.json");
  return 0;
}

// --------------------------------------------------- embed and classify --

struct EmbedArgs {
  std::string input;
  std::string scheme = "supra";
  std::string input_kind;  // classify alias: single|multi
  uint32_t embed_dim = 0;  // 0 = use anchor_copies directly
  uint32_t anchor_copies = 1;
  uint32_t hidden = 32;
  uint32_t pgnn_layers = 2;
  uint32_t q = 2;
  bool full_attention = false;
  bool cc_max = false;
  bool resample_anchors = false;
  bool intra_only = false;
  std::string coupling = "chain";
  double gamma = 0.1;
  uint32_t delta = 1;
  std::string omega = "auto";
  uint32_t epochs = 100;
  size_t train_pairs = 1000, val_pairs = 200, test_pairs = 200;
  double lr = 1e-2;
  uint64_t seed = 0;
  std::string labels;
  std::string out;
  std::string config_path;
};

void add_embed_flags(CLI::App* sub, EmbedArgs& a, bool classify) {
  sub->add_option("graph", a.input, "graph CSV (layer,src,dst[,f_0..]); optional with --config");
  sub->add_option("--scheme", a.scheme, "supra|multigraph: one coupled graph or per-layer graphs");
  sub->add_option("--embed-dim", a.embed_dim,
                  "target embedding width, rounded up to whole anchor scales (0 = --anchor-copies)");
  sub->add_option("--anchor-copies", a.anchor_copies, "anchor-set copies per scale");
  sub->add_option("--hidden", a.hidden, "attention hidden width");
  sub->add_option("--pgnn-layers", a.pgnn_layers, "message-passing layers");
  sub->add_option("--q", a.q, "shortest-path truncation for full attention");
  sub->add_flag("--full-attention", a.full_attention, "attend over every anchor member within q");
  sub->add_flag("--cc-max", a.cc_max, "weight anchor sets by max instead of summed centrality");
  sub->add_flag("--intra-only", a.intra_only, "drop inter-layer edges from hop distances");
  sub->add_option("--coupling", a.coupling, "chain|teleport");
  sub->add_option("--gamma", a.gamma, "teleport strength");
  sub->add_option("--delta", a.delta, "inter-layer step");
  sub->add_option("--omega", a.omega, "auto|FLOAT coupling weight");
  sub->add_option("--seed", a.seed, "master seed");
  if (classify) {
    sub->add_option("--input", a.input_kind, "single|multi (alias of --scheme)");
    sub->add_flag("--resample-anchors", a.resample_anchors, "fresh anchor sets every epoch");
    sub->add_option("--epochs", a.epochs, "training epochs");
    sub->add_option("--train-pairs", a.train_pairs, "pairs per training epoch");
    sub->add_option("--val-pairs", a.val_pairs, "fixed validation pairs");
    sub->add_option("--test-pairs", a.test_pairs, "fixed test pairs");
    sub->add_option("--lr", a.lr, "Adam learning rate");
    sub->add_option("--labels", a.labels, "labels CSV (default: <input stem>.labels.csv)");
  }
  sub->add_option("-o,--out", a.out, "output prefix")->required();
  sub->add_option("--config", a.config_path, "JSON config or manifest overriding defaults");
}

void merge_embed_flags(const ConfigMerge& merge, EmbedArgs& a, bool classify) {
  merge("graph", "input_path", a.input);
  merge("--scheme", "scheme", a.scheme);
  merge("--embed-dim", "embed_dim", a.embed_dim);
  merge("--anchor-copies", "anchor_copies", a.anchor_copies);
  merge("--hidden", "hidden", a.hidden);
  merge("--pgnn-layers", "pgnn_layers", a.pgnn_layers);
  merge("--q", "q", a.q);
  merge("--full-attention", "full_attention", a.full_attention);
  merge("--cc-max", "cc_max", a.cc_max);
  merge("--intra-only", "intra_only", a.intra_only);
  merge("--coupling", "coupling", a.coupling);
  merge("--gamma", "gamma", a.gamma);
  merge("--delta", "delta", a.delta);
  merge("--omega", "omega", a.omega);
  merge("--seed", "seed", a.seed);
  merge("--out", "out", a.out);
  if (classify) {
    merge("--input", "input_kind", a.input_kind);
    merge("--resample-anchors", "resample_anchors", a.resample_anchors);
    merge("--epochs", "epochs", a.epochs);
    merge("--train-pairs", "train_pairs", a.train_pairs);
    merge("--val-pairs", "val_pairs", a.val_pairs);
    merge("--test-pairs", "test_pairs", a.test_pairs);
    merge("--lr", "lr", a.lr);
    merge("--labels", "labels", a.labels);
  }
}

json embed_config_json(const EmbedArgs& a, bool classify) {
  json j = {{"input_path", a.input},
            {"scheme", a.scheme},
            {"embed_dim", a.embed_dim},
            {"anchor_copies", a.anchor_copies},
            {"hidden", a.hidden},
            {"pgnn_layers", a.pgnn_layers},
            {"q", a.q},
            {"full_attention", a.full_attention},
            {"cc_max", a.cc_max},
            {"intra_only", a.intra_only},
            {"coupling", a.coupling},
            {"gamma", a.gamma},
            {"delta", a.delta},
            {"omega", a.omega},
            {"seed", a.seed},
            {"out", a.out}};
  if (classify) {
    j["input_kind"] = a.input_kind;
    j["resample_anchors"] = a.resample_anchors;
    j["epochs"] = a.epochs;
    j["train_pairs"] = a.train_pairs;
    j["val_pairs"] = a.val_pairs;
    j["test_pairs"] = a.test_pairs;
    j["lr"] = a.lr;
    j["labels"] = a.labels;
  }
  return j;
}

SplitScheme resolve_scheme(const EmbedArgs& a) {
  SplitScheme scheme;
  if (a.scheme == "supra")
    scheme = SplitScheme::SingleSupragraph;
  else if (a.scheme == "multigraph")
    scheme = SplitScheme::MultigraphNodeSplit;
  else
    throw std::invalid_argument("--scheme expects supra or multigraph, got '" + a.scheme + "'");
  if (!a.input_kind.empty()) {
    SplitScheme from_kind;
    if (a.input_kind == "single")
      from_kind = SplitScheme::SingleSupragraph;
    else if (a.input_kind == "multi")
      from_kind = SplitScheme::MultigraphNodeSplit;
    else
      throw std::invalid_argument("--input expects single or multi, got '" + a.input_kind + "'");
    if (from_kind != scheme && a.scheme != "supra")
      throw std::invalid_argument("--input and --scheme disagree");
    scheme = from_kind;
  }
  return scheme;
}

ClassifyConfig to_classify_config(const EmbedArgs& a, const tmpgnn::TemporalMultilayerGraph& g) {
  ClassifyConfig cfg;
  cfg.scheme = resolve_scheme(a);
  cfg.pgnn.num_layers = a.pgnn_layers;
  cfg.pgnn.hidden = a.hidden;
  cfg.pgnn.full_mode = a.full_attention;
  cfg.pgnn.q = a.q;
  cfg.pgnn.cc_weight_max = a.cc_max;
  size_t universe = cfg.scheme == SplitScheme::SingleSupragraph
                        ? g.node_layer_count()
                        : size_t(g.num_nodes);
  uint32_t k = tmpgnn::anchor_scale_count(universe);
  cfg.anchor_copies =
      a.embed_dim > 0 ? std::max<uint32_t>(1, (a.embed_dim + k - 1) / k) : a.anchor_copies;
  cfg.resample_anchors = a.resample_anchors;
  cfg.intra_only = a.intra_only;
  cfg.coupling = parse_coupling(a.coupling);
  cfg.gamma = cfg.coupling == CouplingMode::Teleport ? a.gamma : 0.0;
  cfg.delta = a.delta;
  double omega_flag = parse_omega(a.omega);
  if (omega_flag >= 0.0) cfg.fixed_omega = omega_flag;
  cfg.epochs = a.epochs;
  cfg.train_pairs = a.train_pairs;
  cfg.val_pairs = a.val_pairs;
  cfg.test_pairs = a.test_pairs;
  cfg.adam.lr = a.lr;
  cfg.seed = a.seed;
  return cfg;
}

int run_embed(CLI::App* sub, EmbedArgs& a) {
  Timer timer;
  auto merge = merger_for(sub, a.config_path);
  merge_embed_flags(merge, a, false);
  if (a.input.empty())
    throw std::invalid_argument("embed: give an input graph, positionally or via --config");

  tmpgnn::TemporalMultilayerGraph g = tmpgnn::load_graph(a.input);
  ClassifyConfig cfg = to_classify_config(a, g);
  tmpgnn::EmbedResult res = tmpgnn::compute_embeddings(g, cfg);

  std::string csv = "node,layer";
  for (uint32_t c = 0; c < res.dim; ++c) csv += ",z_" + std::to_string(c);
  csv += "\n";
  for (uint32_t t = 0; t < g.num_layers; ++t)
    for (uint32_t v = 0; v < g.num_nodes; ++v) {
      csv += std::to_string(v) + "," + std::to_string(t);
      size_t row = size_t(v) + size_t(g.num_nodes) * t;
      for (uint32_t c = 0; c < res.dim; ++c) csv += "," + fnum(res.z[row * res.dim + c]);
      csv += "\n";
    }
  write_text(a.out + ".csv", csv);

  json report = {{"seed", a.seed},
                 {"omega", res.omega},
                 {"dim", res.dim},
                 {"scheme", a.scheme},
                 {"anchors", json::parse(tmpgnn::anchors_to_json(res.anchors))}};
  write_text(a.out + ".json", report.dump(2) + "\n");

  tmpgnn::RunManifest m;
  m.subcommand = "embed";
  m.config = embed_config_json(a, false);
  m.master_seed = a.seed;
  m.inputs = {{a.input, tmpgnn::file_digest(a.input)}};
  m.outputs = {a.out + ".csv", a.out + ".json"};
  m.wall_clock_seconds = timer.seconds();
  tmpgnn::write_manifest(m, a.out + ".manifest.json");
  return 0;
}

int run_classify(CLI::App* sub, EmbedArgs& a) {
  Timer timer;
  auto merge = merger_for(sub, a.config_path);
  merge_embed_flags(merge, a, true);
  if (a.input.empty())
    throw std::invalid_argument("classify: give an input graph, positionally or via --config");

  std::string labels = a.labels.empty() ? stem_of(a.input) + ".labels.csv" : a.labels;
  tmpgnn::LoadOptions opts;
  opts.labels_path = labels;
  tmpgnn::TemporalMultilayerGraph g = tmpgnn::load_graph(a.input, opts);
  ClassifyConfig cfg = to_classify_config(a, g);
  tmpgnn::ClassifyReport rep = tmpgnn::train_pairwise(g, cfg);

  json report = {{"auc_test", rep.test_auc},
                 {"auc_val", rep.best_val_auc},
                 {"epochs", rep.epochs_run},
                 {"seed", a.seed},
                 {"best_epoch", rep.best_epoch},
                 {"omega", rep.omega},
                 {"embed_dim", rep.embed_dim},
                 {"final_train_loss", rep.final_train_loss},
                 {"scheme", a.scheme}};
  write_text(a.out + ".json", report.dump(2) + "\n");

  tmpgnn::RunManifest m;
  m.subcommand = "classify";
  m.config = embed_config_json(a, true);
  m.config["labels"] = labels;
  m.master_seed = a.seed;
  m.inputs = {{a.input, tmpgnn::file_digest(a.input)}, {labels, tmpgnn::file_digest(labels)}};
  m.outputs = {a.out + ".json"};
  m.wall_clock_seconds = timer.seconds();
  tmpgnn::write_manifest(m, a.out + ".manifest.json");
  return 0;
}

// ----------------------------------------------------------------- impute --

struct ImputeArgs {
  std::string input;
  std::string arch = "mrnn";
  double tau = 0.2;
  std::vector<double> grid;
  uint32_t embed_dim = 8;
  uint32_t hidden = 16;
  uint32_t epochs = 60;
  uint32_t patience = 10;
  bool freeze_embeddings = false;
  bool mix_per_unit = false;
  double lr = 1e-2;
  std::string coupling = "chain";
  double gamma = 0.1;
  uint32_t delta = 1;
  std::string omega = "auto";
  uint64_t seed = 1;
  std::string out = "impute";
  std::string config_path;
};

tmpgnn::ImputerArch parse_arch(const std::string& s) {
  if (s == "mrnn") return tmpgnn::ImputerArch::Mrnn;
  if (s == "etmpgnn1") return tmpgnn::ImputerArch::Etmpgnn1;
  if (s == "etmpgnn2") return tmpgnn::ImputerArch::Etmpgnn2;
  throw std::invalid_argument("--arch expects mrnn, etmpgnn1 or etmpgnn2, got '" + s + "'");
}

json impute_report_json(const std::string& arch, const tmpgnn::ImputeReport& rep,
                        double mrnn_mae) {
  double improvement = 0.0;
  if (mrnn_mae > 0.0) improvement = tmpgnn::relative_improvement(rep.mae, mrnn_mae);
  return {{"arch", arch},
          {"tau", rep.tau},
          {"mae", rep.mae},
          {"rmse", rep.rmse},
          {"improvement_vs_mrnn_pct", improvement},
          {"val_rmse", std::isfinite(rep.val_rmse) ? rep.val_rmse : 0.0},
          {"best_epoch", rep.best_epoch},
          {"epochs_run", rep.epochs_run},
          {"embed_dim", rep.embed_dim},
          {"removed_cells", rep.removed_cells}};
}

int run_impute(CLI::App* sub, ImputeArgs& a) {
  Timer timer;
  auto merge = merger_for(sub, a.config_path);
  merge("graph", "input_path", a.input);
  merge("--arch", "arch", a.arch);
  merge("--tau", "tau", a.tau);
  merge("--grid", "grid", a.grid);
  merge("--embed-dim", "embed_dim", a.embed_dim);
  merge("--hidden", "hidden", a.hidden);
  merge("--epochs", "epochs", a.epochs);
  merge("--patience", "patience", a.patience);
  merge("--freeze-embeddings", "freeze_embeddings", a.freeze_embeddings);
  merge("--mix-per-unit", "mix_per_unit", a.mix_per_unit);
  merge("--lr", "lr", a.lr);
  merge("--coupling", "coupling", a.coupling);
  merge("--gamma", "gamma", a.gamma);
  merge("--delta", "delta", a.delta);
  merge("--omega", "omega", a.omega);
  merge("--seed", "seed", a.seed);
  merge("--out", "out", a.out);
  if (a.input.empty())
    throw std::invalid_argument("impute: give an input graph, positionally or via --config");

  tmpgnn::TemporalMultilayerGraph g = tmpgnn::load_graph(a.input);
  tmpgnn::ImputerConfig cfg;
  cfg.arch = parse_arch(a.arch);
  cfg.hidden = a.hidden;
  cfg.embed_dim = a.embed_dim;
  cfg.tau = a.tau;
  cfg.epochs = a.epochs;
  cfg.early_stop_patience = a.patience;
  cfg.freeze_embeddings = a.freeze_embeddings;
  cfg.mix_per_unit = a.mix_per_unit;
  cfg.adam.lr = a.lr;
  cfg.seed = a.seed;
  cfg.embed.coupling = parse_coupling(a.coupling);
  cfg.embed.gamma = cfg.embed.coupling == CouplingMode::Teleport ? a.gamma : 0.0;
  cfg.embed.delta = a.delta;
  double omega_flag = parse_omega(a.omega);
  if (omega_flag >= 0.0) cfg.embed.fixed_omega = omega_flag;

  std::vector<double> taus = a.grid.empty() ? std::vector<double>{a.tau} : a.grid;
  json runs = json::array();
  for (double tau : taus) {
    tmpgnn::ImputerConfig run_cfg = cfg;
    run_cfg.tau = tau;
    tmpgnn::ImputeReport rep = tmpgnn::train_imputer(g, run_cfg);
    double mrnn_mae = 0.0;
    if (cfg.arch != tmpgnn::ImputerArch::Mrnn) {
      tmpgnn::ImputerConfig base_cfg = run_cfg;
      base_cfg.arch = tmpgnn::ImputerArch::Mrnn;
      mrnn_mae = tmpgnn::train_imputer(g, base_cfg).mae;
    }
    runs.push_back(impute_report_json(a.arch, rep, mrnn_mae));
  }
  write_text(a.out + ".json", (runs.size() == 1 ? runs[0] : json{{"runs", runs}}).dump(2) + "\n");

  tmpgnn::RunManifest m;
  m.subcommand = "impute";
  m.config = {{"input_path", a.input},
              {"arch", a.arch},
              {"tau", a.tau},
              {"grid", a.grid},
              {"embed_dim", a.embed_dim},
              {"hidden", a.hidden},
              {"epochs", a.epochs},
              {"patience", a.patience},
              {"freeze_embeddings", a.freeze_embeddings},
              {"mix_per_unit", a.mix_per_unit},
              {"lr", a.lr},
              {"coupling", a.coupling},
              {"gamma", a.gamma},
              {"delta", a.delta},
              {"omega", a.omega},
              {"seed", a.seed},
              {"out", a.out}};
  m.master_seed = a.seed;
  m.inputs = {{a.input, tmpgnn::file_digest(a.input)}};
  m.outputs = {a.out + ".json"};
  m.wall_clock_seconds = timer.seconds();
  tmpgnn::write_manifest(m, a.out + ".manifest.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal multilayer graph centrality, embedding and imputation toolkit"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a labeled synthetic temporal graph");
  synth->add_option("--nodes", synth_args.nodes, "node count");
  synth->add_option("--layers", synth_args.layers, "layer count");
  synth->add_option("--streams", synth_args.streams, "edge feature streams");
  synth->add_option("--communities", synth_args.communities, "planted communities");
  synth->add_option("--p-in", synth_args.p_in, "intra-community edge probability");
  synth->add_option("--p-out", synth_args.p_out, "inter-community edge probability");
  synth->add_option("--rewire", synth_args.rewire, "per-layer rewire probability");
  synth->add_option("--signal", synth_args.signal, "sinusoid|ar1 stream model");
  synth->add_option("--seed", synth_args.seed, "master seed");
  synth->add_option("-o,--out", synth_args.out, "output CSV path");
  synth->add_option("--config", synth_args.config_path, "JSON config or manifest");

  CentralityArgs cent_args;
  CLI::App* cent = app.add_subcommand("centrality", "joint and conditional node-layer centralities");
  cent->add_option("graph", cent_args.input, "graph CSV; optional with --config");
  cent->add_option("--omega", cent_args.omega, "auto|FLOAT inter-layer coupling weight");
  cent->add_option("--coupling", cent_args.coupling, "chain|teleport");
  cent->add_option("--gamma", cent_args.gamma, "teleport strength");
  cent->add_option("--delta", cent_args.delta, "inter-layer step");
  cent->add_option("--tol", cent_args.tol, "relative gap tolerance for the omega search");
  cent->add_option("-o,--out", cent_args.out, "output prefix");
  cent->add_option("--config", cent_args.config_path, "JSON config or manifest");

  EmbedArgs embed_args;
  CLI::App* embed = app.add_subcommand("embed", "anchored position-aware node-layer embeddings");
  add_embed_flags(embed, embed_args, false);

  EmbedArgs classify_args;
  CLI::App* classify =
      app.add_subcommand("classify", "pairwise same-community classification from embeddings");
  add_embed_flags(classify, classify_args, true);

  ImputeArgs impute_args;
  CLI::App* impute = app.add_subcommand("impute", "recurrent imputation of hidden edge features");
  impute->add_option("graph", impute_args.input, "graph CSV; optional with --config");
  impute->add_option("--arch", impute_args.arch, "mrnn|etmpgnn1|etmpgnn2");
  impute->add_option("--tau", impute_args.tau, "removal probability");
  impute->add_option("--grid", impute_args.grid, "comma-separated taus, one run each")
      ->delimiter(',');
  impute->add_option("--embed-dim", impute_args.embed_dim, "embedding stream width (0 disables)");
  impute->add_option("--hidden", impute_args.hidden, "GRU hidden width");
  impute->add_option("--epochs", impute_args.epochs, "training epochs");
  impute->add_option("--patience", impute_args.patience, "early-stop patience (0 = off)");
  impute->add_flag("--freeze-embeddings", impute_args.freeze_embeddings,
                   "keep embeddings fixed instead of training through them");
  impute->add_flag("--mix-per-unit", impute_args.mix_per_unit,
                   "per-unit fusion weights instead of scalars");
  impute->add_option("--lr", impute_args.lr, "Adam learning rate");
  impute->add_option("--coupling", impute_args.coupling, "chain|teleport");
  impute->add_option("--gamma", impute_args.gamma, "teleport strength");
  impute->add_option("--delta", impute_args.delta, "inter-layer step");
  impute->add_option("--omega", impute_args.omega, "auto|FLOAT for the embedding side");
  impute->add_option("--seed", impute_args.seed, "master seed");
  impute->add_option("-o,--out", impute_args.out, "output prefix");
  impute->add_option("--config", impute_args.config_path, "JSON config or manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  try {
    if (*synth) return run_synth(synth, synth_args);
    if (*cent) return run_centrality(cent, cent_args);
    if (*embed) return run_embed(embed, embed_args);
    if (*classify) return run_classify(classify, classify_args);
    if (*impute) return run_impute(impute, impute_args);
  } catch (const tmpgnn::GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
