// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Training loops (deterministic given the seed), evaluation metrics,
// JSON checkpoints and run manifests. Batches accumulate gradients example
// by example in a fixed order; one optimizer step per batch with the
// exponentially annealed learning rate.

#ifndef RXNGRAPH_TRAINER_HPP
#define RXNGRAPH_TRAINER_HPP

#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rxngraph/config.hpp"
#include "rxngraph/dataset.hpp"
#include "rxngraph/fingerprint.hpp"
#include "rxngraph/gnn.hpp"
#include "rxngraph/optim.hpp"
#include "rxngraph/ranker.hpp"

namespace rxngraph {

struct EpochMetrics {
  int epoch = 0;
  double lr = 0;
  double train_loss = 0;
  double train_acc = 0;
  bool has_valid = false;
  double valid_loss = 0;
  double valid_acc = 0;
};

struct TrainLog {
  std::vector<EpochMetrics> epochs;
  const EpochMetrics& final() const { return epochs.back(); }
};

struct TrainOptions {
  double early_stop_train_acc = -1.0;  // stop once train accuracy reaches this
  std::function<void(const EpochMetrics&)> on_epoch;
};

namespace detail {

// Shared batched loop. `forward_loss(i)` returns (loss tensor, correct flag)
// for training example i; `eval_metrics()` fills validation numbers.
template <typename ForwardLoss, typename EvalFn>
TrainLog run_training(std::size_t n_examples, const ModelConfig& cfg,
                      ParamStore& params, ForwardLoss&& forward_loss,
                      EvalFn&& eval_metrics, bool has_valid,
                      const TrainOptions& opts) {
  if (n_examples == 0) throw InputError("training: empty dataset");
  AdamState adam = AdamState::init(params);
  ExponentialSchedule sched(cfg.lr, cfg.lr_decay);
  Rng shuffle_rng(mix64(cfg.seed + 0x517f1e));  // decoupled from init draws

  TrainLog log;
  std::vector<int> order(n_examples);
  for (std::size_t i = 0; i < n_examples; ++i) order[i] = static_cast<int>(i);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < n_examples; start += cfg.batch_size) {
      const std::size_t stop = std::min(n_examples, start + cfg.batch_size);
      params.zero_grad();
      for (std::size_t i = start; i < stop; ++i) {
        auto [loss, ok] = forward_loss(order[i]);
        loss.backward(1.0 / static_cast<double>(stop - start));
        loss_sum += loss.item();
        correct += ok ? 1 : 0;
      }
      adam_step(params, adam, sched.lr(), cfg.l2);
      sched.advance();
    }
    EpochMetrics m;
    m.epoch = epoch;
    m.lr = sched.lr();
    m.train_loss = loss_sum / static_cast<double>(n_examples);
    m.train_acc = static_cast<double>(correct) / static_cast<double>(n_examples);
    if (has_valid) {
      m.has_valid = true;
      eval_metrics(m);
    }
    log.epochs.push_back(m);
    if (opts.on_epoch) opts.on_epoch(m);
    if (opts.early_stop_train_acc > 0 && m.train_acc >= opts.early_stop_train_acc)
      break;
  }
  return log;
}

}  // namespace detail

struct EvalResult {
  double loss = 0;
  double accuracy = 0;
  std::vector<double> per_class_accuracy;
  std::vector<std::vector<int>> confusion;  // [true][predicted]
};

inline int argmax_row(const Mat& m) {
  int best = 0;
  for (std::size_t c = 1; c < m.cols; ++c)
    if (m.v[c] > m.v[best]) best = static_cast<int>(c);
  return best;
}

inline EvalResult evaluate_classifier(const GnnModel& model,
                                      const std::vector<DataRecord>& records) {
  if (records.empty()) throw InputError("evaluate: empty dataset");
  const int k = model.cfg.classes;
  EvalResult res;
  res.confusion.assign(k, std::vector<int>(k, 0));
  for (const auto& rec : records) {
    if (!rec.has_label) throw InputError("evaluate: unlabeled record");
    if (rec.label < 0 || rec.label >= k)
      throw InputError("evaluate: label out of range for checkpoint");
    auto out = model_forward(model, rec.rxn);
    res.loss += task_loss(out.output, rec.label, TaskKind::Classify).item();
    ++res.confusion[rec.label][argmax_row(out.output.val())];
  }
  res.loss /= static_cast<double>(records.size());
  int correct = 0;
  res.per_class_accuracy.assign(k, 0.0);
  for (int c = 0; c < k; ++c) {
    int row_total = 0;
    for (int p = 0; p < k; ++p) row_total += res.confusion[c][p];
    correct += res.confusion[c][c];
    res.per_class_accuracy[c] =
        row_total > 0 ? static_cast<double>(res.confusion[c][c]) / row_total : 0.0;
  }
  res.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
  return res;
}

struct TrainedClassifier {
  GnnModel model;
  TrainLog log;
};

inline TrainedClassifier train_gnn_classifier(const ModelConfig& cfg,
                                              const std::vector<DataRecord>& train,
                                              const std::vector<DataRecord>* valid,
                                              const TrainOptions& opts = {}) {
  cfg.validate();
  if (cfg.task != TaskKind::Classify)
    throw InputError("train_gnn_classifier: task must be classify");
  for (const auto& r : train)
    if (!r.has_label) throw InputError("training: unlabeled record");

  Rng init_rng(cfg.seed);
  TrainedClassifier out{init_model(cfg, FeatureConfig{}.dim(), init_rng), {}};

  // hypergraphs are immutable; build once
  std::vector<RxnHypergraph> graphs;
  graphs.reserve(train.size());
  for (const auto& r : train) {
    if (r.label < 0 || r.label >= cfg.classes)
      throw InputError("training: label out of range");
    graphs.push_back(build_hypergraph(r.rxn));
  }

  auto forward_loss = [&](int i) {
    auto fwd = model_forward(out.model, graphs[i]);
    const bool ok = argmax_row(fwd.output.val()) == train[i].label;
    return std::pair<Tensor, bool>(
        task_loss(fwd.output, train[i].label, TaskKind::Classify), ok);
  };
  auto eval_metrics = [&](EpochMetrics& m) {
    auto r = evaluate_classifier(out.model, *valid);
    m.valid_loss = r.loss;
    m.valid_acc = r.accuracy;
  };
  out.log = detail::run_training(train.size(), cfg, out.model.params, forward_loss,
                                 eval_metrics, valid != nullptr, opts);
  return out;
}

struct TrainedFpBaseline {
  FpBaselineModel model;
  TrainLog log;
};

inline double fp_eval_accuracy(const FpBaselineModel& model,
                               const std::vector<DataRecord>& records) {
  int correct = 0;
  for (const auto& rec : records) {
    auto out = fp_baseline_forward(model, reaction_fp_parts(rec.rxn, model.fp_cfg));
    if (argmax_row(out.val()) == rec.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

inline TrainedFpBaseline train_fp_baseline(const ModelConfig& cfg,
                                           const std::vector<DataRecord>& train,
                                           const std::vector<DataRecord>* valid,
                                           const TrainOptions& opts = {},
                                           FingerprintConfig fp_cfg = {}) {
  Rng init_rng(cfg.seed);
  TrainedFpBaseline out{init_fp_baseline(cfg.classes, cfg.head_dims, init_rng, fp_cfg),
                        {}};
  std::vector<ReactionFpParts> feats;
  feats.reserve(train.size());
  for (const auto& r : train) {
    if (!r.has_label || r.label < 0 || r.label >= cfg.classes)
      throw InputError("training: bad label");
    feats.push_back(reaction_fp_parts(r.rxn, fp_cfg));
  }
  auto forward_loss = [&](int i) {
    auto logits = fp_baseline_forward(out.model, feats[i]);
    const bool ok = argmax_row(logits.val()) == train[i].label;
    return std::pair<Tensor, bool>(
        task_loss(logits, train[i].label, TaskKind::Classify), ok);
  };
  auto eval_metrics = [&](EpochMetrics& m) {
    m.valid_acc = fp_eval_accuracy(out.model, *valid);
    m.valid_loss = 0;
  };
  out.log = detail::run_training(train.size(), cfg, out.model.params, forward_loss,
                                 eval_metrics, valid != nullptr, opts);
  return out;
}

// DirectRanker training on ordered (more-plausible, less-plausible) pairs:
// Siamese embeddings, MSE against +1 on the pair score. "Accuracy" in the
// log is the fraction of training pairs currently ordered correctly.
inline TrainLog train_ranker(GnnModel& model,
                             const std::vector<std::pair<Reaction, Reaction>>& pairs,
                             const ModelConfig& cfg, const TrainOptions& opts = {}) {
  if (model.cfg.task != TaskKind::Embed || !model.ranker_w.defined())
    throw InputError("train_ranker: model task must be embed");
  if (pairs.empty()) throw InputError("train_ranker: no pairs");
  std::vector<std::pair<RxnHypergraph, RxnHypergraph>> graphs;
  graphs.reserve(pairs.size());
  for (const auto& [better, worse] : pairs) {
    if (better.source_text == worse.source_text)
      throw InputError("train_ranker: degenerate pair (identical reactions)");
    graphs.emplace_back(build_hypergraph(better), build_hypergraph(worse));
  }
  const Mat target(1, 1, 1.0);
  auto forward_loss = [&](int i) {
    Tensor xa = gnn_embed(model, graphs[i].first);
    Tensor xb = gnn_embed(model, graphs[i].second);
    Tensor score = pairwise_score_t(model, xa, xb);
    const bool ok = score.item() > 0;
    return std::pair<Tensor, bool>(mse(score, target), ok);
  };
  return detail::run_training(pairs.size(), cfg, model.params, forward_loss,
                              [](EpochMetrics&) {}, false, opts);
}

// ---------------------------------------------------------------------------
// Checkpoints: JSON with format version, config, and named parameter tensors
// (shape + row-major values). Doubles survive the round trip bit-exactly.

inline constexpr int kCheckpointFormatVersion = 1;

inline nlohmann::json config_to_json(const ModelConfig& cfg) {
  return nlohmann::json{{"layer_kind", layer_kind_name(cfg.layer_kind)},
                        {"layers", cfg.layers},
                        {"dim", cfg.dim},
                        {"readout", readout_name(cfg.readout)},
                        {"head_dims", cfg.head_dims},
                        {"task", task_name(cfg.task)},
                        {"classes", cfg.classes},
                        {"share_relation_weights", cfg.share_relation_weights},
                        {"attention_heads", cfg.attention_heads},
                        {"leaky_slope", cfg.leaky_slope},
                        {"lr", cfg.lr},
                        {"lr_decay", cfg.lr_decay},
                        {"l2", cfg.l2},
                        {"epochs", cfg.epochs},
                        {"batch_size", cfg.batch_size},
                        {"seed", cfg.seed}};
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.layer_kind = layer_kind_from_string(j.at("layer_kind").get<std::string>());
  cfg.layers = j.at("layers").get<int>();
  cfg.dim = j.at("dim").get<int>();
  cfg.readout = readout_from_string(j.at("readout").get<std::string>());
  cfg.head_dims = j.at("head_dims").get<std::vector<int>>();
  cfg.task = task_from_string(j.at("task").get<std::string>());
  cfg.classes = j.at("classes").get<int>();
  cfg.share_relation_weights = j.at("share_relation_weights").get<bool>();
  cfg.attention_heads = j.at("attention_heads").get<int>();
  cfg.leaky_slope = j.at("leaky_slope").get<double>();
  cfg.lr = j.at("lr").get<double>();
  cfg.lr_decay = j.at("lr_decay").get<double>();
  cfg.l2 = j.at("l2").get<double>();
  cfg.epochs = j.at("epochs").get<int>();
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

inline nlohmann::json params_to_json(const ParamStore& params) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [name, t] : params.items)
    out.push_back({{"name", name},
                   {"rows", t.val().rows},
                   {"cols", t.val().cols},
                   {"values", t.val().v}});
  return out;
}

inline void params_from_json(ParamStore& params, const nlohmann::json& j) {
  if (j.size() != params.items.size())
    throw InputError("checkpoint: parameter count mismatch");
  for (const auto& jt : j) {
    const std::string name = jt.at("name").get<std::string>();
    Tensor* t = params.find(name);
    if (!t) throw InputError("checkpoint: unknown parameter " + name);
    Mat& val = t->mutable_val();
    if (val.rows != jt.at("rows").get<std::size_t>() ||
        val.cols != jt.at("cols").get<std::size_t>())
      throw InputError("checkpoint: shape mismatch for " + name);
    auto values = jt.at("values").get<std::vector<double>>();
    if (values.size() != val.size())
      throw InputError("checkpoint: value count mismatch for " + name);
    val.v = std::move(values);
  }
}

inline void save_checkpoint(const std::string& path, const GnnModel& model) {
  nlohmann::json j{{"format_version", kCheckpointFormatVersion},
                   {"model_kind", "gnn"},
                   {"input_dim", model.input_dim},
                   {"config", config_to_json(model.cfg)},
                   {"params", params_to_json(model.params)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write checkpoint: " + path);
  out << j.dump();
}

inline GnnModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!j.contains("format_version") ||
      j.at("format_version").get<int>() != kCheckpointFormatVersion)
    throw InputError("checkpoint: unsupported format version");
  if (j.at("model_kind").get<std::string>() != "gnn")
    throw InputError("checkpoint: not a gnn checkpoint");
  const ModelConfig cfg = config_from_json(j.at("config"));
  Rng rng(cfg.seed);
  GnnModel model = init_model(cfg, j.at("input_dim").get<int>(), rng);
  params_from_json(model.params, j.at("params"));
  return model;
}

inline void save_fp_checkpoint(const std::string& path, const FpBaselineModel& model) {
  nlohmann::json j{{"format_version", kCheckpointFormatVersion},
                   {"model_kind", "fp_baseline"},
                   {"bits", model.fp_cfg.bits},
                   {"radius", model.fp_cfg.radius},
                   {"classes", model.classes},
                   {"head_dims", model.head_dims},
                   {"params", params_to_json(model.params)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write checkpoint: " + path);
  out << j.dump();
}

inline FpBaselineModel load_fp_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!j.contains("format_version") ||
      j.at("format_version").get<int>() != kCheckpointFormatVersion)
    throw InputError("checkpoint: unsupported format version");
  if (j.at("model_kind").get<std::string>() != "fp_baseline")
    throw InputError("checkpoint: not an fp_baseline checkpoint");
  FingerprintConfig fp_cfg;
  fp_cfg.bits = j.at("bits").get<int>();
  fp_cfg.radius = j.at("radius").get<int>();
  Rng rng(1);
  FpBaselineModel model = init_fp_baseline(j.at("classes").get<int>(),
                                           j.at("head_dims").get<std::vector<int>>(),
                                           rng, fp_cfg);
  params_from_json(model.params, j.at("params"));
  return model;
}

// Model kind stored in a checkpoint file, for CLI dispatch.
inline std::string checkpoint_kind(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  return j.value("model_kind", "");
}

// ---------------------------------------------------------------------------
// Run manifest: everything needed to reproduce and audit one training run.

inline nlohmann::json epoch_to_json(const EpochMetrics& m) {
  nlohmann::json j{{"epoch", m.epoch},
                   {"lr", m.lr},
                   {"train_loss", m.train_loss},
                   {"train_acc", m.train_acc}};
  if (m.has_valid) {
    j["valid_loss"] = m.valid_loss;
    j["valid_acc"] = m.valid_acc;
  }
  return j;
}

inline nlohmann::json make_manifest(const ModelConfig& cfg,
                                    const std::string& dataset_digest,
                                    const TrainLog& log,
                                    const std::string& checkpoint_path) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& m : log.epochs) epochs.push_back(epoch_to_json(m));
  return nlohmann::json{{"format_version", 1},
                        {"config", config_to_json(cfg)},
                        {"seed", cfg.seed},
                        {"dataset_digest", dataset_digest},
                        {"epochs", epochs},
                        {"final", epoch_to_json(log.final())},
                        {"checkpoint", checkpoint_path}};
}

}  // namespace rxngraph

#endif  // RXNGRAPH_TRAINER_HPP
