// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// rxngraph command line: parse/validate reaction files, dump hypergraphs,
// emit reaction fingerprints, generate synthetic benchmark data, train and
// evaluate models, rank candidate sets, and export attention-based
// interpretability reports.
//
// Exit codes: 0 success, 1 input error, 2 numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rxngraph/config.hpp"
#include "rxngraph/dataset.hpp"
#include "rxngraph/fingerprint.hpp"
#include "rxngraph/gnn.hpp"
#include "rxngraph/hypergraph.hpp"
#include "rxngraph/interpret.hpp"
#include "rxngraph/ranker.hpp"
#include "rxngraph/smiles.hpp"
#include "rxngraph/synth.hpp"
#include "rxngraph/trainer.hpp"

namespace {

using nlohmann::json;
using namespace rxngraph;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + out_path);
  out << content;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

// --------------------------------------------------------------------------

json stream_header(const char* kind) {
  return json{{"format_version", 1}, {"stream", kind}};
}

int cmd_parse(const std::string& data_path, bool strict) {
  const auto lines = split_lines(read_file(data_path));
  if (lines.empty()) throw InputError("empty input file: " + data_path);
  std::cout << stream_header("parse_report").dump() << "\n";
  int failures = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string_view line = lines[i];
    const std::size_t tab = line.find('\t');
    json row{{"line", i + 1}};
    try {
      const Reaction rxn = parse_reaction(line.substr(0, tab));
      row["ok"] = true;
      row["reactants"] = rxn.num_reactants();
      row["products"] = rxn.num_products();
    } catch (const ParseError& e) {
      ++failures;
      row["ok"] = false;
      row["error"] = e.what();
      row["offset"] = e.offset();
      if (e.fragment() >= 0) row["fragment"] = e.fragment();
    }
    std::cout << row.dump() << "\n";
  }
  std::cout << json{{"summary", true},
                    {"lines", lines.size()},
                    {"failures", failures}}
                   .dump()
            << "\n";
  return (strict && failures > 0) ? 1 : 0;
}

int cmd_build(const std::string& smirks, const std::string& out_path) {
  const auto g = build_hypergraph(parse_reaction(smirks));
  write_output(out_path, hypergraph_to_json(g).dump(2));
  return 0;
}

int cmd_fingerprint(const std::string& data_path, double w1, double w2, int bits,
                    int radius, const std::string& out_path) {
  const Dataset ds = Dataset::load(data_path);
  if (ds.records.empty()) throw InputError("empty dataset: " + data_path);
  FingerprintConfig cfg;
  cfg.bits = bits;
  cfg.radius = radius;
  std::ostringstream out;
  out << stream_header("fingerprints").dump() << "\n";
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto v = reaction_fp(ds.records[i].rxn, w1, w2, nullptr, cfg);
    out << json{{"reaction_index", i}, {"vector", v}}.dump() << "\n";
  }
  write_output(out_path, out.str());
  return 0;
}

int cmd_synth(const std::string& task, const std::string& out_dir, int count,
              int sets, std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  if (task == "fg3") {
    auto emit = [&](const std::string& name, int n, std::uint64_t s) {
      std::ostringstream text;
      for (const auto& [smirks, label] : synth_functional_group_task(n, s))
        text << smirks << "\t" << label << "\n";
      write_output(out_dir + "/" + name, text.str());
    };
    emit("train.tsv", count, seed);
    emit("test.tsv", std::max(1, count / 3), seed + 1);
    std::cout << json{{"task", "fg3"},
                      {"train", out_dir + "/train.tsv"},
                      {"test", out_dir + "/test.tsv"}}
                     .dump()
              << "\n";
    return 0;
  }
  if (task == "ranking") {
    auto emit = [&](const std::string& name, int n, std::uint64_t s) {
      std::ostringstream text;
      for (const auto& cs : synth_ranking_task(n, s)) {
        text << json{{"query_id", cs.query_id},
                     {"candidates", cs.smirks},
                     {"true_index", cs.true_index}}
                    .dump()
             << "\n";
      }
      write_output(out_dir + "/" + name, text.str());
    };
    emit("train_candidates.jsonl", sets, seed);
    emit("test_candidates.jsonl", std::max(1, sets / 3), seed + 1);
    std::cout << json{{"task", "ranking"},
                      {"train", out_dir + "/train_candidates.jsonl"},
                      {"test", out_dir + "/test_candidates.jsonl"}}
                     .dump()
              << "\n";
    return 0;
  }
  throw InputError("unknown synth task: " + task + " (expected fg3 or ranking)");
}

int cmd_split(const std::string& data_path, int per_class_train, int per_class_test,
              std::uint64_t seed, const std::string& out_train,
              const std::string& out_test) {
  const Dataset ds = Dataset::load(data_path);
  auto [train, test] = balanced_subsample(ds, per_class_train, per_class_test, seed);
  auto emit = [](const Dataset& part, const std::string& path) {
    std::ostringstream text;
    for (const auto& r : part.records)
      text << r.rxn.source_text << "\t" << r.label << "\n";
    write_output(path, text.str());
  };
  emit(train, out_train);
  emit(test, out_test);
  std::cout << json{{"train_records", train.records.size()},
                    {"test_records", test.records.size()}}
                   .dump()
            << "\n";
  return 0;
}

struct CandidateFile {
  struct Entry {
    std::string query_id;
    std::vector<Reaction> candidates;
    int true_index = -1;
  };
  std::vector<Entry> entries;

  static CandidateFile load(const std::string& path) {
    CandidateFile cf;
    const auto lines = split_lines(read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      json j;
      try {
        j = json::parse(lines[i]);
      } catch (const json::exception& e) {
        throw InputError("candidates line " + std::to_string(i + 1) + ": " + e.what());
      }
      Entry e;
      e.query_id = j.value("query_id", "q" + std::to_string(i));
      for (const auto& s : j.at("candidates"))
        e.candidates.push_back(parse_reaction(s.get<std::string>()));
      if (e.candidates.empty())
        throw InputError("candidates line " + std::to_string(i + 1) + ": empty set");
      e.true_index = j.value("true_index", -1);
      if (e.true_index >= static_cast<int>(e.candidates.size()))
        throw InputError("candidates line " + std::to_string(i + 1) +
                         ": true_index out of range");
      cf.entries.push_back(std::move(e));
    }
    if (cf.entries.empty()) throw InputError("no candidate sets in " + path);
    return cf;
  }
};

struct TrainCli {
  std::string config_path, data_path, valid_path, out_path, metrics_path;
  std::string model_kind = "gnn";
  // flag overrides (only applied when set on the command line)
  std::string layer_kind, readout, task;
  std::vector<int> head_dims;
  std::optional<int> layers, dim, classes, epochs, batch_size, attention_heads;
  std::optional<double> lr, lr_decay, l2, leaky_slope;
  std::optional<std::uint64_t> seed;
  std::optional<bool> share_relation_weights;
  bool head_dims_set = false;
};

ModelConfig resolve_train_config(const TrainCli& t) {
  ModelConfig cfg;
  if (!t.config_path.empty()) apply_config(cfg, load_config_file(t.config_path));
  if (!t.layer_kind.empty()) cfg.layer_kind = layer_kind_from_string(t.layer_kind);
  if (!t.readout.empty()) cfg.readout = readout_from_string(t.readout);
  if (!t.task.empty()) cfg.task = task_from_string(t.task);
  if (t.head_dims_set) cfg.head_dims = t.head_dims;
  if (t.layers) cfg.layers = *t.layers;
  if (t.dim) cfg.dim = *t.dim;
  if (t.classes) cfg.classes = *t.classes;
  if (t.epochs) cfg.epochs = *t.epochs;
  if (t.batch_size) cfg.batch_size = *t.batch_size;
  if (t.attention_heads) cfg.attention_heads = *t.attention_heads;
  if (t.lr) cfg.lr = *t.lr;
  if (t.lr_decay) cfg.lr_decay = *t.lr_decay;
  if (t.l2) cfg.l2 = *t.l2;
  if (t.leaky_slope) cfg.leaky_slope = *t.leaky_slope;
  if (t.seed) cfg.seed = *t.seed;
  if (t.share_relation_weights) cfg.share_relation_weights = *t.share_relation_weights;
  return cfg;
}

int cmd_train(const TrainCli& t) {
  ModelConfig cfg = resolve_train_config(t);
  const Dataset train = Dataset::load(t.data_path);
  if (train.records.empty()) throw InputError("empty training set");
  std::optional<Dataset> valid;
  if (!t.valid_path.empty()) valid = Dataset::load(t.valid_path);

  if (cfg.task == TaskKind::Classify) {
    const int observed = train.num_classes();
    if (observed > cfg.classes)
      throw InputError("dataset has " + std::to_string(observed) +
                       " classes but config says " + std::to_string(cfg.classes));
  } else if (cfg.task == TaskKind::Embed) {
    throw InputError("train: embed task is trained via `rank-train`");
  }

  std::ofstream metrics_file;
  if (!t.metrics_path.empty()) {
    metrics_file.open(t.metrics_path, std::ios::binary);
    if (!metrics_file) throw InputError("cannot write metrics: " + t.metrics_path);
  }
  (metrics_file.is_open() ? metrics_file : std::cout)
      << stream_header("epoch_metrics").dump() << "\n";
  TrainOptions opts;
  opts.on_epoch = [&](const EpochMetrics& m) {
    std::ostream& os = metrics_file.is_open() ? metrics_file : std::cout;
    os << epoch_to_json(m).dump() << "\n";
  };

  TrainLog log;
  if (t.model_kind == "gnn") {
    auto result = train_gnn_classifier(cfg, train.records,
                                       valid ? &valid->records : nullptr, opts);
    save_checkpoint(t.out_path, result.model);
    log = std::move(result.log);
  } else if (t.model_kind == "fp") {
    auto result = train_fp_baseline(cfg, train.records,
                                    valid ? &valid->records : nullptr, opts);
    save_fp_checkpoint(t.out_path, result.model);
    log = std::move(result.log);
  } else {
    throw InputError("unknown --model kind: " + t.model_kind);
  }

  const json manifest = make_manifest(cfg, train.digest, log, t.out_path);
  write_output(t.out_path + ".manifest.json", manifest.dump(2));
  std::cout << json{{"checkpoint", t.out_path},
                    {"manifest", t.out_path + ".manifest.json"},
                    {"final", epoch_to_json(log.final())}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_rank_train(const TrainCli& t, int pairs_per_query) {
  ModelConfig cfg = resolve_train_config(t);
  cfg.task = TaskKind::Embed;
  cfg.validate();
  auto cands = CandidateFile::load(t.data_path);

  // training pairs: (true candidate, other) plus random ordered pairs when
  // ground-truth utilities are unavailable we rely on true_index only
  std::vector<std::pair<Reaction, Reaction>> pairs;
  Rng rng(cfg.seed + 17);
  for (const auto& e : cands.entries) {
    if (e.true_index < 0)
      throw InputError("rank-train: every candidate set needs true_index");
    for (int draw = 0; draw < pairs_per_query; ++draw) {
      const int other = rng.index(e.candidates.size());
      if (other == e.true_index) continue;
      pairs.emplace_back(e.candidates[e.true_index], e.candidates[other]);
    }
  }

  Rng init_rng(cfg.seed);
  GnnModel model = init_model(cfg, FeatureConfig{}.dim(), init_rng);
  std::ofstream metrics_file;
  if (!t.metrics_path.empty()) {
    metrics_file.open(t.metrics_path, std::ios::binary);
    if (!metrics_file) throw InputError("cannot write metrics: " + t.metrics_path);
  }
  (metrics_file.is_open() ? metrics_file : std::cout)
      << stream_header("epoch_metrics").dump() << "\n";
  TrainOptions opts;
  opts.on_epoch = [&](const EpochMetrics& m) {
    std::ostream& os = metrics_file.is_open() ? metrics_file : std::cout;
    os << epoch_to_json(m).dump() << "\n";
  };
  const TrainLog log = train_ranker(model, pairs, cfg, opts);
  save_checkpoint(t.out_path, model);
  const json manifest =
      make_manifest(cfg, Dataset::digest_of(read_file(t.data_path)), log, t.out_path);
  write_output(t.out_path + ".manifest.json", manifest.dump(2));
  std::cout << json{{"checkpoint", t.out_path},
                    {"pairs", pairs.size()},
                    {"final", epoch_to_json(log.final())}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& data_path,
             const std::string& manifest_path, const std::string& out_path) {
  const Dataset ds = Dataset::load(data_path);
  if (ds.records.empty()) throw InputError("empty test set");
  if (!manifest_path.empty()) {
    json manifest = json::parse(read_file(manifest_path));
    const std::string expected = manifest.value("dataset_digest", "");
    if (!expected.empty() && expected != ds.digest)
      throw InputError("dataset digest mismatch: manifest has " + expected +
                       ", file has " + ds.digest);
  }
  json out;
  const std::string kind = checkpoint_kind(ckpt_path);
  if (kind == "gnn") {
    const GnnModel model = load_checkpoint(ckpt_path);
    if (model.cfg.task != TaskKind::Classify)
      throw InputError("eval: checkpoint is not a classifier");
    const EvalResult r = evaluate_classifier(model, ds.records);
    out = json{{"format_version", 1},
               {"records", ds.records.size()},
               {"loss", r.loss},
               {"accuracy", r.accuracy},
               {"per_class_accuracy", r.per_class_accuracy},
               {"confusion", r.confusion}};
  } else if (kind == "fp_baseline") {
    const FpBaselineModel model = load_fp_checkpoint(ckpt_path);
    out = json{{"format_version", 1},
               {"records", ds.records.size()},
               {"accuracy", fp_eval_accuracy(model, ds.records)}};
  } else {
    throw InputError("eval: unsupported checkpoint kind '" + kind + "'");
  }
  write_output(out_path, out.dump(2));
  return 0;
}

int cmd_rank(const std::string& ckpt_path, const std::string& candidates_path,
             const std::string& out_path) {
  const GnnModel model = load_checkpoint(ckpt_path);
  if (model.cfg.task != TaskKind::Embed)
    throw InputError("rank: checkpoint must be an embedding (ranking) model");
  const auto cands = CandidateFile::load(candidates_path);

  std::ostringstream out;
  out << stream_header("rankings").dump() << "\n";
  std::vector<std::vector<int>> orders;
  std::vector<int> truths;
  bool all_have_truth = true;
  for (const auto& e : cands.entries) {
    const RankMatrix mat = rank_matrix(model, e.candidates);
    const auto order = ranked_pairs(mat);
    std::vector<std::vector<double>> scores(mat.k, std::vector<double>(mat.k));
    for (int a = 0; a < mat.k; ++a)
      for (int b = 0; b < mat.k; ++b) scores[a][b] = mat.at(a, b);
    json row{{"query_id", e.query_id}, {"order", order}, {"scores", scores}};
    if (e.true_index >= 0) {
      row["true_index"] = e.true_index;
      orders.push_back(order);
      truths.push_back(e.true_index);
    } else {
      all_have_truth = false;
    }
    out << row.dump() << "\n";
  }
  if (all_have_truth && !orders.empty()) {
    const auto acc = top_k_accuracy(orders, truths);
    json jacc;
    for (const auto& [k, a] : acc) jacc[std::to_string(k)] = a;
    out << json{{"top_k_accuracy", jacc}, {"queries", orders.size()}}.dump() << "\n";
  }
  write_output(out_path, out.str());
  return 0;
}

int cmd_explain(const std::string& ckpt_path, const std::string& smirks,
                const std::string& attn_mode, int top_k,
                const std::string& out_path) {
  const GnnModel model = load_checkpoint(ckpt_path);
  InterpretOptions opts;
  if (attn_mode == "final") opts.path_mode = InterpretOptions::PathMode::FinalLayer;
  else if (attn_mode == "avg")
    opts.path_mode = InterpretOptions::PathMode::AverageLayerProducts;
  else throw InputError("explain: --attn must be final or avg");
  opts.top_k_atom_pairs = top_k;
  const Reaction rxn = parse_reaction(smirks);
  const InterpretReport rep = explain_reaction(model, rxn, opts);
  write_output(out_path, report_to_json(rep, rxn.source_text).dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rxngraph: reaction hypergraph models for classification, "
               "ranking, and attention-based interpretation"};
  app.require_subcommand(1);

  // parse
  std::string parse_data;
  bool parse_strict = false;
  auto* sc_parse = app.add_subcommand("parse", "validate a reaction file line by line");
  sc_parse->add_option("--data", parse_data, "reaction TSV/SMIRKS file")->required();
  sc_parse->add_flag("--strict", parse_strict, "exit nonzero if any line fails");

  // build
  std::string build_rxn, build_out;
  auto* sc_build = app.add_subcommand("build", "dump the hypergraph of one reaction as JSON");
  sc_build->add_option("--reaction", build_rxn, "reaction SMIRKS")->required();
  sc_build->add_option("--out", build_out, "output path (default stdout)");

  // fingerprint
  std::string fp_data, fp_out;
  double fp_w1 = 1.0, fp_w2 = 1.0;
  int fp_bits = 2048, fp_radius = 2;
  auto* sc_fp = app.add_subcommand("fingerprint", "emit reaction fingerprint vectors");
  sc_fp->add_option("--data", fp_data, "reaction TSV file")->required();
  sc_fp->add_option("--w1", fp_w1, "difference term weight");
  sc_fp->add_option("--w2", fp_w2, "agent term weight");
  sc_fp->add_option("--bits", fp_bits, "fingerprint length");
  sc_fp->add_option("--radius", fp_radius, "circular radius");
  sc_fp->add_option("--out", fp_out, "output path (default stdout)");

  // synth
  std::string synth_task, synth_out;
  int synth_count = 3000, synth_sets = 100;
  std::uint64_t synth_seed = 1;
  auto* sc_synth = app.add_subcommand("synth", "generate bundled synthetic benchmark data");
  sc_synth->add_option("--task", synth_task, "fg3 or ranking")->required();
  sc_synth->add_option("--out", synth_out, "output directory")->required();
  sc_synth->add_option("--count", synth_count, "reactions for fg3 train split");
  sc_synth->add_option("--sets", synth_sets, "candidate sets for ranking train split");
  sc_synth->add_option("--seed", synth_seed, "generator seed");

  // split
  std::string split_data, split_out_train, split_out_test;
  int split_train_n = 200, split_test_n = 800;
  std::uint64_t split_seed = 1;
  auto* sc_split = app.add_subcommand("split", "class-balanced train/test subsampling");
  sc_split->add_option("--data", split_data, "labeled TSV")->required();
  sc_split->add_option("--train-per-class", split_train_n, "train examples per class");
  sc_split->add_option("--test-per-class", split_test_n, "test examples per class");
  sc_split->add_option("--seed", split_seed, "shuffle seed");
  sc_split->add_option("--out-train", split_out_train, "train TSV path")->required();
  sc_split->add_option("--out-test", split_out_test, "test TSV path")->required();

  // train / rank-train share the flag set
  TrainCli t;
  int rank_pairs_per_query = 12;
  auto add_train_flags = [&](CLI::App* sc) {
    sc->add_option("--config", t.config_path, "config file (flat TOML)");
    sc->add_option("--data", t.data_path, "training data")->required();
    sc->add_option("--out", t.out_path, "checkpoint output path")->required();
    sc->add_option("--metrics", t.metrics_path, "epoch metrics JSONL path");
    sc->add_option("--layer_kind", t.layer_kind, "rgat or rgcn");
    sc->add_option("--readout", t.readout, "concat or subtract");
    sc->add_option("--layers", [&](const CLI::results_t& r) { t.layers = std::stoi(r[0]); return true; }, "layer count");
    sc->add_option("--dim", [&](const CLI::results_t& r) { t.dim = std::stoi(r[0]); return true; }, "latent dimension");
    sc->add_option("--classes", [&](const CLI::results_t& r) { t.classes = std::stoi(r[0]); return true; }, "class count");
    sc->add_option("--epochs", [&](const CLI::results_t& r) { t.epochs = std::stoi(r[0]); return true; }, "epochs");
    sc->add_option("--batch_size", [&](const CLI::results_t& r) { t.batch_size = std::stoi(r[0]); return true; }, "batch size");
    sc->add_option("--attention_heads", [&](const CLI::results_t& r) { t.attention_heads = std::stoi(r[0]); return true; }, "attention heads");
    sc->add_option("--lr", [&](const CLI::results_t& r) { t.lr = std::stod(r[0]); return true; }, "learning rate");
    sc->add_option("--lr_decay", [&](const CLI::results_t& r) { t.lr_decay = std::stod(r[0]); return true; }, "per-step decay");
    sc->add_option("--l2", [&](const CLI::results_t& r) { t.l2 = std::stod(r[0]); return true; }, "L2 coefficient");
    sc->add_option("--leaky_slope", [&](const CLI::results_t& r) { t.leaky_slope = std::stod(r[0]); return true; }, "leaky relu slope");
    sc->add_option("--seed", [&](const CLI::results_t& r) { t.seed = std::stoull(r[0]); return true; }, "seed");
    sc->add_option("--head_dims", [&](const CLI::results_t& r) {
      t.head_dims.clear();
      for (const auto& x : r) t.head_dims.push_back(std::stoi(x));
      t.head_dims_set = true;
      return true;
    }, "feed-forward head sizes")->expected(-1);
    sc->add_option("--share_relation_weights", [&](const CLI::results_t& r) {
      t.share_relation_weights = (r[0] == "true" || r[0] == "1");
      return true;
    }, "single W across relations");
  };

  auto* sc_train = app.add_subcommand("train", "train a classifier and write checkpoint + manifest");
  add_train_flags(sc_train);
  sc_train->add_option("--valid", t.valid_path, "validation TSV");
  sc_train->add_option("--model", t.model_kind, "gnn (default) or fp baseline");
  sc_train->add_option("--task", t.task, "classify or regress");

  auto* sc_rank_train = app.add_subcommand("rank-train", "train a pairwise ranking model on candidate sets");
  add_train_flags(sc_rank_train);
  sc_rank_train->add_option("--pairs-per-query", rank_pairs_per_query, "sampled pairs per candidate set");

  // eval
  std::string eval_ckpt, eval_data, eval_manifest, eval_out;
  auto* sc_eval = app.add_subcommand("eval", "evaluate a classifier checkpoint");
  sc_eval->add_option("--ckpt", eval_ckpt, "checkpoint path")->required();
  sc_eval->add_option("--data", eval_data, "labeled TSV")->required();
  sc_eval->add_option("--manifest", eval_manifest, "manifest to cross-check dataset digest");
  sc_eval->add_option("--out", eval_out, "output path (default stdout)");

  // rank
  std::string rank_ckpt, rank_cands, rank_out;
  auto* sc_rank = app.add_subcommand("rank", "rank candidate sets with a trained model");
  sc_rank->add_option("--ckpt", rank_ckpt, "embedding checkpoint")->required();
  sc_rank->add_option("--candidates", rank_cands, "candidate sets JSONL")->required();
  sc_rank->add_option("--out", rank_out, "output path (default stdout)");

  // explain
  std::string ex_ckpt, ex_rxn, ex_attn = "final", ex_out;
  int ex_topk = 20;
  auto* sc_explain = app.add_subcommand("explain", "attention interpretability report for one reaction");
  sc_explain->add_option("--ckpt", ex_ckpt, "rgat checkpoint")->required();
  sc_explain->add_option("--reaction", ex_rxn, "reaction SMIRKS")->required();
  sc_explain->add_option("--attn", ex_attn, "path-product layers: final or avg");
  sc_explain->add_option("--top-k", ex_topk, "atom-atom pairs kept per side");
  sc_explain->add_option("--out", ex_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sc_parse->parsed()) return cmd_parse(parse_data, parse_strict);
    if (sc_build->parsed()) return cmd_build(build_rxn, build_out);
    if (sc_fp->parsed())
      return cmd_fingerprint(fp_data, fp_w1, fp_w2, fp_bits, fp_radius, fp_out);
    if (sc_synth->parsed())
      return cmd_synth(synth_task, synth_out, synth_count, synth_sets, synth_seed);
    if (sc_split->parsed())
      return cmd_split(split_data, split_train_n, split_test_n, split_seed,
                       split_out_train, split_out_test);
    if (sc_train->parsed()) return cmd_train(t);
    if (sc_rank_train->parsed()) return cmd_rank_train(t, rank_pairs_per_query);
    if (sc_eval->parsed()) return cmd_eval(eval_ckpt, eval_data, eval_manifest, eval_out);
    if (sc_rank->parsed()) return cmd_rank(rank_ckpt, rank_cands, rank_out);
    if (sc_explain->parsed()) return cmd_explain(ex_ckpt, ex_rxn, ex_attn, ex_topk, ex_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
