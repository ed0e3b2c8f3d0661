// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Relational graph convolution / attention over the reaction hypergraph.
//
// RGCN layer:  h_i' = W_o h_i + sum_s mean_{j in N_s(i)} W_s h_j
// RGAT layer:  h_i' = a_ii W_o h_i + sum_s sum_{j in N_s(i)} a_ij^s W_s h_j
// where for every relation s present at node i the weights a^s are a softmax
// over N_s(i) plus a self entry, logits leaky_relu(a_s . (W h_i || W h_j)).
// The self entry competes in each relation's softmax (using the
// relation-averaged attention vector and W_o) but its message is aggregated
// once, gated by the mean of its per-relation weights.

#ifndef RXNGRAPH_GNN_HPP
#define RXNGRAPH_GNN_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rxngraph/errors.hpp"
#include "rxngraph/hypergraph.hpp"
#include "rxngraph/optim.hpp"
#include "rxngraph/rng.hpp"
#include "rxngraph/tensor.hpp"

namespace rxngraph {

enum class LayerKind { Rgcn, Rgat };
enum class ReadoutKind { Subtract, Concat };
enum class TaskKind { Classify, Regress, Embed };

struct ModelConfig {
  LayerKind layer_kind = LayerKind::Rgat;
  int layers = 3;  // the architecture calls for at least 3
  int dim = 32;
  ReadoutKind readout = ReadoutKind::Concat;
  std::vector<int> head_dims;  // hidden feed-forward sizes, may be empty
  TaskKind task = TaskKind::Classify;
  int classes = 2;
  bool share_relation_weights = false;  // literal single-W reading
  int attention_heads = 1;
  double leaky_slope = 0.2;

  double lr = 1e-3;
  double lr_decay = 1.0;
  double l2 = 0.0;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 1;

  int latent_dim() const { return readout == ReadoutKind::Concat ? 2 * dim : dim; }
  int output_dim() const {
    switch (task) {
      case TaskKind::Classify: return classes;
      case TaskKind::Regress: return 1;
      case TaskKind::Embed: return latent_dim();
    }
    return 0;
  }

  void validate() const {
    if (layers < 3) throw InputError("config: layers must be >= 3");
    if (dim < 1) throw InputError("config: dim must be positive");
    if (attention_heads < 1 || dim % attention_heads != 0)
      throw InputError("config: attention_heads must divide dim");
    if (task == TaskKind::Classify && classes < 2)
      throw InputError("config: classify needs at least 2 classes");
    if (lr <= 0) throw InputError("config: lr must be positive");
    if (lr_decay <= 0 || lr_decay > 1) throw InputError("config: lr_decay in (0,1]");
    if (batch_size < 1) throw InputError("config: batch_size must be positive");
  }
};

struct GnnLayer {
  Tensor self_w;
  std::array<Tensor, kNumRelations> rel_w;
  std::array<Tensor, kNumRelations> attn;  // (2*dim/heads) x heads, rgat only
};

struct GnnModel {
  ModelConfig cfg;
  int input_dim = 0;
  ParamStore params;
  std::vector<GnnLayer> layers;
  std::vector<std::pair<Tensor, Tensor>> head;  // (W, b); last entry is the output layer
  Tensor ranker_w;  // only for task == Embed
};

// Parameter creation order is fixed: layers (relation weights, self weight,
// attention vectors), then head, then the ranking vector. Checkpoints and
// seeded init both rely on this order.
inline GnnModel init_model(const ModelConfig& cfg, int input_dim, Rng& rng) {
  GnnModel model;
  model.cfg = cfg;
  model.input_dim = input_dim;
  const int heads = cfg.attention_heads;
  const int dh = cfg.dim / heads;

  for (int l = 0; l < cfg.layers; ++l) {
    GnnLayer layer;
    const int in = l == 0 ? input_dim : cfg.dim;
    const std::string prefix = "layer" + std::to_string(l) + ".";
    if (cfg.share_relation_weights) {
      Tensor shared = model.params.add(prefix + "shared.W", glorot_param(in, cfg.dim, rng));
      for (int r = 0; r < kNumRelations; ++r) layer.rel_w[r] = shared;
      // literal reading: one W everywhere, including the self term, for rgat
      layer.self_w = cfg.layer_kind == LayerKind::Rgat
                         ? shared
                         : model.params.add(prefix + "self.W", glorot_param(in, cfg.dim, rng));
    } else {
      for (int r = 0; r < kNumRelations; ++r)
        layer.rel_w[r] = model.params.add(
            prefix + "rel" + std::to_string(r) + ".W", glorot_param(in, cfg.dim, rng));
      layer.self_w = model.params.add(prefix + "self.W", glorot_param(in, cfg.dim, rng));
    }
    if (cfg.layer_kind == LayerKind::Rgat) {
      for (int r = 0; r < kNumRelations; ++r)
        layer.attn[r] = model.params.add(
            prefix + "rel" + std::to_string(r) + ".a",
            glorot_param(2 * dh, heads, rng));
    }
    model.layers.push_back(std::move(layer));
  }

  if (cfg.task != TaskKind::Embed) {
    int in = cfg.latent_dim();
    for (std::size_t i = 0; i < cfg.head_dims.size(); ++i) {
      const std::string prefix = "head" + std::to_string(i) + ".";
      model.head.emplace_back(
          model.params.add(prefix + "W", glorot_param(in, cfg.head_dims[i], rng)),
          model.params.add(prefix + "b", zeros_param(1, cfg.head_dims[i])));
      in = cfg.head_dims[i];
    }
    model.head.emplace_back(
        model.params.add("out.W", glorot_param(in, cfg.output_dim(), rng)),
        model.params.add("out.b", zeros_param(1, cfg.output_dim())));
  } else {
    model.ranker_w = model.params.add("ranker.w", glorot_param(cfg.latent_dim(), 1, rng));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Attention bookkeeping (plain values, detached from the autodiff graph).

struct LayerAttention {
  // per relation, aligned with relation_adjacency(g, s) order
  std::array<std::vector<double>, kNumRelations> edge_alpha;
  // per relation, (node id, alpha_ii^s) for nodes where s is present
  std::array<std::vector<std::pair<int, double>>, kNumRelations> self_alpha;
  // aggregated self gate per node
  std::vector<double> self_gate;
};

struct AttentionRecord {
  std::vector<LayerAttention> layers;

  int num_layers() const { return static_cast<int>(layers.size()); }

  // alpha for directed edge (src -> dst) at one layer; nullopt if no edge.
  std::optional<double> edge_value(const RxnHypergraph& g, int layer, int src,
                                   int dst) const {
    for (int r = 0; r < kNumRelations; ++r) {
      const auto& edges = g.rel_edges[r];
      auto it = std::lower_bound(
          edges.begin(), edges.end(), std::make_pair(src, dst),
          [](const auto& a, const auto& b) {
            return std::tie(a.second, a.first) < std::tie(b.second, b.first);
          });
      if (it != edges.end() && *it == std::make_pair(src, dst))
        return layers[layer].edge_alpha[r][it - edges.begin()];
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Layers

inline Tensor rgcn_layer_forward(const GnnLayer& lw, const Tensor& h,
                                 const RxnHypergraph& g) {
  const int n = g.num_nodes();
  Tensor out = matmul(h, lw.self_w);
  for (int r = 0; r < kNumRelations; ++r) {
    const auto& edges = g.rel_edges[r];
    if (edges.empty()) continue;
    std::vector<int> srcs, dsts;
    srcs.reserve(edges.size());
    dsts.reserve(edges.size());
    for (const auto& [s, d] : edges) {
      srcs.push_back(s);
      dsts.push_back(d);
    }
    Tensor wh = matmul(h, lw.rel_w[r]);
    Tensor msgs = gather_rows(wh, std::move(srcs));
    out = add(out, segment_mean(msgs, std::move(dsts), n));
  }
  return out;
}

namespace detail {

struct RgatLayerPieces {
  Tensor output;              // n x dim
  LayerAttention record;      // detached alpha values
};

inline RgatLayerPieces rgat_layer_compute(const GnnLayer& lw, const Tensor& h,
                                          const RxnHypergraph& g, double slope,
                                          int heads) {
  const int n = g.num_nodes();
  const std::size_t dim = lw.self_w.cols();
  const std::size_t dh = dim / heads;

  Tensor wh_self = matmul(h, lw.self_w);
  std::array<Tensor, kNumRelations> wh_rel;
  for (int r = 0; r < kNumRelations; ++r)
    if (!g.rel_edges[r].empty()) wh_rel[r] = matmul(h, lw.rel_w[r]);

  // Relation-averaged attention vector for the self logit.
  Tensor attn_avg = lw.attn[0];
  for (int r = 1; r < kNumRelations; ++r) attn_avg = add(attn_avg, lw.attn[r]);
  attn_avg = scale(attn_avg, 1.0 / kNumRelations);

  // Which relations are present at each node, for the self-gate average.
  std::vector<double> active_count(n, 0.0);
  std::array<std::vector<int>, kNumRelations> active_nodes;
  for (int r = 0; r < kNumRelations; ++r) {
    const auto& edges = g.rel_edges[r];
    if (edges.empty()) continue;
    auto& act = active_nodes[r];
    for (const auto& [s, d] : edges)
      if (act.empty() || act.back() != d) act.push_back(d);  // dst-sorted
    for (int node : act) active_count[node] += 1.0;
  }

  LayerAttention record;
  record.self_gate.assign(n, 0.0);

  std::vector<Tensor> head_outputs;
  for (int hd = 0; hd < heads; ++hd) {
    Tensor wh_self_chunk = heads == 1 ? wh_self : slice_cols(wh_self, hd * dh, dh);
    // self logits: relation-averaged vector applied to (W_o h_i || W_o h_i)
    Tensor a_self_dst = slice(attn_avg, 0, dh, hd, hd + 1);
    Tensor a_self_src = slice(attn_avg, dh, 2 * dh, hd, hd + 1);
    Tensor self_logits = leaky_relu(
        add(matmul(wh_self_chunk, a_self_dst), matmul(wh_self_chunk, a_self_src)),
        slope);

    Tensor neigh_sum;            // n x dh accumulated over relations
    Tensor self_alpha_sum;       // n x 1 accumulated over relations
    for (int r = 0; r < kNumRelations; ++r) {
      const auto& edges = g.rel_edges[r];
      if (edges.empty()) continue;
      std::vector<int> srcs, dsts;
      srcs.reserve(edges.size());
      dsts.reserve(edges.size());
      for (const auto& [s, d] : edges) {
        srcs.push_back(s);
        dsts.push_back(d);
      }
      Tensor wh_chunk = heads == 1 ? wh_rel[r] : slice_cols(wh_rel[r], hd * dh, dh);
      Tensor a_dst = slice(lw.attn[r], 0, dh, hd, hd + 1);
      Tensor a_src = slice(lw.attn[r], dh, 2 * dh, hd, hd + 1);
      Tensor score_dst = matmul(wh_chunk, a_dst);  // n x 1
      Tensor score_src = matmul(wh_chunk, a_src);  // n x 1
      Tensor edge_logits = leaky_relu(
          add(gather_rows(score_dst, dsts), gather_rows(score_src, srcs)), slope);

      // softmax over each destination's neighbors plus its self entry
      const auto& act = active_nodes[r];
      Tensor logits = concat_rows(edge_logits, gather_rows(self_logits, act));
      std::vector<int> seg = dsts;
      for (int node : act) seg.push_back(node);
      Tensor alpha = segment_softmax(logits, seg, n);

      std::vector<int> edge_idx(edges.size()), self_idx(act.size());
      for (std::size_t i = 0; i < edges.size(); ++i) edge_idx[i] = static_cast<int>(i);
      for (std::size_t i = 0; i < act.size(); ++i)
        self_idx[i] = static_cast<int>(edges.size() + i);
      Tensor edge_alpha = gather_rows(alpha, std::move(edge_idx));
      Tensor self_alpha = gather_rows(alpha, std::move(self_idx));

      // record (head-averaged)
      auto& rec_e = record.edge_alpha[r];
      if (rec_e.empty()) rec_e.assign(edges.size(), 0.0);
      for (std::size_t i = 0; i < edges.size(); ++i)
        rec_e[i] += edge_alpha.val().v[i] / heads;
      auto& rec_s = record.self_alpha[r];
      if (rec_s.empty())
        for (int node : act) rec_s.emplace_back(node, 0.0);
      for (std::size_t i = 0; i < act.size(); ++i)
        rec_s[i].second += self_alpha.val().v[i] / heads;

      Tensor msgs = scale_rows(gather_rows(wh_chunk, srcs), edge_alpha);
      Tensor agg = segment_sum(msgs, dsts, n);
      neigh_sum = neigh_sum.defined() ? add(neigh_sum, agg) : agg;

      Tensor self_scatter = segment_sum(self_alpha, act, n);
      self_alpha_sum = self_alpha_sum.defined() ? add(self_alpha_sum, self_scatter)
                                                : self_scatter;
    }

    // Aggregate the self entry once: mean of its per-relation weights, 1 when
    // no relation is present at the node.
    Mat inv_count(n, 1, 0.0), base(n, 1, 0.0);
    for (int i = 0; i < n; ++i) {
      if (active_count[i] > 0) inv_count.v[i] = 1.0 / active_count[i];
      else base.v[i] = 1.0;
    }
    Tensor gate;
    if (self_alpha_sum.defined()) {
      gate = add(mul(self_alpha_sum, Tensor::constant(inv_count)),
                 Tensor::constant(base));
    } else {
      gate = Tensor::constant(Mat(n, 1, 1.0));
    }
    for (int i = 0; i < n; ++i) record.self_gate[i] += gate.val().v[i] / heads;

    Tensor out = scale_rows(wh_self_chunk, gate);
    if (neigh_sum.defined()) out = add(out, neigh_sum);
    head_outputs.push_back(out);
  }

  Tensor output = head_outputs[0];
  for (std::size_t i = 1; i < head_outputs.size(); ++i)
    output = concat_cols(output, head_outputs[i]);
  return {output, std::move(record)};
}

}  // namespace detail

inline Tensor rgat_layer_forward(const GnnLayer& lw, const Tensor& h,
                                 const RxnHypergraph& g, double slope = 0.2,
                                 int heads = 1, LayerAttention* rec = nullptr) {
  auto pieces = detail::rgat_layer_compute(lw, h, g, slope, heads);
  if (rec) *rec = std::move(pieces.record);
  return pieces.output;
}

// Attention weights only (per-relation softmax values incl. the self entry),
// without aggregating messages.
inline LayerAttention rgat_attention(const GnnLayer& lw, const Tensor& h,
                                     const RxnHypergraph& g, double slope = 0.2,
                                     int heads = 1) {
  return detail::rgat_layer_compute(lw, h, g, slope, heads).record;
}

// ---------------------------------------------------------------------------
// Readout, head, full model

inline Tensor readout(const Tensor& x_r, const Tensor& x_p, ReadoutKind kind) {
  return kind == ReadoutKind::Subtract ? sub(x_r, x_p) : concat_cols(x_r, x_p);
}

inline Tensor mlp_forward(const std::vector<std::pair<Tensor, Tensor>>& head,
                          Tensor x) {
  for (std::size_t i = 0; i < head.size(); ++i) {
    x = add(matmul(x, head[i].first), head[i].second);
    if (i + 1 < head.size()) x = relu(x);
  }
  return x;
}

struct ModelOutput {
  Tensor latent;  // X, 1 x latent_dim
  Tensor output;  // logits (classify), scalar (regress), or X (embed)
};

inline Tensor gnn_embed(const GnnModel& model, const RxnHypergraph& g,
                        AttentionRecord* rec = nullptr,
                        const Mat* feature_override = nullptr) {
  FeatureConfig fc;
  Tensor h;
  if (feature_override) {
    h = Tensor::constant(*feature_override);
  } else {
    auto rows = featurize(g, fc);
    Mat f(g.num_nodes(), fc.dim());
    f.v = std::move(rows);
    h = Tensor::constant(std::move(f));
  }
  if (rec) rec->layers.clear();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    if (l > 0) h = relu(h);  // between layers, never after the last
    if (model.cfg.layer_kind == LayerKind::Rgcn) {
      h = rgcn_layer_forward(model.layers[l], h, g);
    } else {
      LayerAttention la;
      h = rgat_layer_forward(model.layers[l], h, g, model.cfg.leaky_slope,
                             model.cfg.attention_heads, rec ? &la : nullptr);
      if (rec) rec->layers.push_back(std::move(la));
    }
  }
  Tensor x_r = gather_rows(h, {g.rxn_node_id(Side::Reactant)});
  Tensor x_p = gather_rows(h, {g.rxn_node_id(Side::Product)});
  return readout(x_r, x_p, model.cfg.readout);
}

inline ModelOutput model_forward(const GnnModel& model, const RxnHypergraph& g,
                                 AttentionRecord* rec = nullptr) {
  Tensor latent = gnn_embed(model, g, rec);
  if (model.cfg.task == TaskKind::Embed) return {latent, latent};
  return {latent, mlp_forward(model.head, latent)};
}

inline ModelOutput model_forward(const GnnModel& model, const Reaction& rxn,
                                 AttentionRecord* rec = nullptr) {
  return model_forward(model, build_hypergraph(rxn), rec);
}

// Task loss: softmax cross-entropy for classification, MSE otherwise.
inline Tensor task_loss(const Tensor& output, int label, TaskKind task) {
  if (task != TaskKind::Classify)
    throw InputError("task_loss: integer target is for classification");
  return softmax_cross_entropy(output, {label});
}

inline Tensor task_loss(const Tensor& output, double target, TaskKind task) {
  if (task == TaskKind::Classify)
    throw InputError("task_loss: classification needs an integer label");
  return mse(output, Mat(output.rows(), output.cols(), target));
}

}  // namespace rxngraph

#endif  // RXNGRAPH_GNN_HPP
