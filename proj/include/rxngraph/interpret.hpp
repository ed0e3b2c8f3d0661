// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Attention-based interpretability scores from a trained RGAT model.
// Three families over the recorded attention weights:
//  1. atom->rxn: product of weights along atom -> mol -> rxn-hypernode.
//  2. node->node: per-edge weights averaged over all layers (mol->rxn edges
//     give the relative importance of the reacting molecules).
//  3. intermolecular atom->atom: product along atom -> mol -> mol' -> atom',
//     for same-side atoms in different molecules.
// Path products use the final layer by default; averaging the per-layer
// products is available as an option. Directions follow information flow:
// alpha(a -> m) is the weight the aggregating node m gives to a.

#ifndef RXNGRAPH_INTERPRET_HPP
#define RXNGRAPH_INTERPRET_HPP

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "rxngraph/errors.hpp"
#include "rxngraph/gnn.hpp"
#include "rxngraph/hypergraph.hpp"

namespace rxngraph {

class UnsupportedModelError : public InputError {
 public:
  using InputError::InputError;
};

struct InterpretOptions {
  enum class PathMode { FinalLayer, AverageLayerProducts };
  PathMode path_mode = PathMode::FinalLayer;
  int top_k_atom_pairs = 20;  // per side
};

struct InterpretReport {
  std::vector<std::pair<int, double>> atom_rxn;           // atom node -> score
  std::vector<std::tuple<int, int, double>> node_node;    // src, dst -> score
  std::vector<std::tuple<int, int, double>> atom_atom;    // atom, atom -> score
  std::vector<std::pair<int, double>> mol_importance;     // mol node -> score
};

namespace detail {

inline double edge_alpha_at(const AttentionRecord& rec, const RxnHypergraph& g,
                            int layer, int src, int dst) {
  auto v = rec.edge_value(g, layer, src, dst);
  if (!v) throw NumericError("interpret: missing attention for edge");
  return *v;
}

// Product of alphas along a node path, per the configured layer mode.
inline double path_product(const AttentionRecord& rec, const RxnHypergraph& g,
                           const std::vector<int>& path,
                           InterpretOptions::PathMode mode) {
  auto product_at = [&](int layer) {
    double p = 1.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      p *= edge_alpha_at(rec, g, layer, path[i], path[i + 1]);
    return p;
  };
  if (mode == InterpretOptions::PathMode::FinalLayer)
    return product_at(rec.num_layers() - 1);
  double sum = 0;
  for (int l = 0; l < rec.num_layers(); ++l) sum += product_at(l);
  return sum / rec.num_layers();
}

}  // namespace detail

inline std::vector<std::pair<int, double>> atom_rxn_scores(
    const AttentionRecord& rec, const RxnHypergraph& g,
    const InterpretOptions& opts = {}) {
  if (rec.layers.empty())
    throw UnsupportedModelError("interpret: model has no attention weights");
  std::vector<std::pair<int, double>> out;
  for (int v = 0; v < g.num_nodes(); ++v) {
    const HyperNode& n = g.nodes[v];
    if (n.kind != NodeKind::Atom) continue;
    const int mol = g.mol_node_id(n.mol);
    const int rxn = g.rxn_node_id(n.side);
    out.emplace_back(v, detail::path_product(rec, g, {v, mol, rxn}, opts.path_mode));
  }
  return out;
}

inline std::vector<std::tuple<int, int, double>> node_node_scores(
    const AttentionRecord& rec, const RxnHypergraph& g) {
  if (rec.layers.empty())
    throw UnsupportedModelError("interpret: model has no attention weights");
  std::vector<std::tuple<int, int, double>> out;
  for (int r = 0; r < kNumRelations; ++r) {
    const auto& edges = g.rel_edges[r];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      double sum = 0;
      for (int l = 0; l < rec.num_layers(); ++l) sum += rec.layers[l].edge_alpha[r][e];
      out.emplace_back(edges[e].first, edges[e].second, sum / rec.num_layers());
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  return out;
}

inline std::vector<std::tuple<int, int, double>> atom_atom_scores(
    const AttentionRecord& rec, const RxnHypergraph& g,
    const InterpretOptions& opts = {}) {
  if (rec.layers.empty())
    throw UnsupportedModelError("interpret: model has no attention weights");
  std::vector<std::tuple<int, int, double>> all;
  for (Side side : {Side::Reactant, Side::Product}) {
    std::vector<std::tuple<int, int, double>> side_scores;
    for (int a = 0; a < g.total_atoms; ++a) {
      if (g.nodes[a].side != side) continue;
      for (int b = 0; b < g.total_atoms; ++b) {
        if (g.nodes[b].side != side || g.nodes[b].mol == g.nodes[a].mol) continue;
        const int mol_a = g.mol_node_id(g.nodes[a].mol);
        const int mol_b = g.mol_node_id(g.nodes[b].mol);
        side_scores.emplace_back(
            a, b,
            detail::path_product(rec, g, {a, mol_a, mol_b, b}, opts.path_mode));
      }
    }
    std::sort(side_scores.begin(), side_scores.end(), [](const auto& x, const auto& y) {
      if (std::get<2>(x) != std::get<2>(y)) return std::get<2>(x) > std::get<2>(y);
      return std::tie(std::get<0>(x), std::get<1>(x)) <
             std::tie(std::get<0>(y), std::get<1>(y));
    });
    if (opts.top_k_atom_pairs >= 0 &&
        side_scores.size() > static_cast<std::size_t>(opts.top_k_atom_pairs))
      side_scores.resize(opts.top_k_atom_pairs);
    all.insert(all.end(), side_scores.begin(), side_scores.end());
  }
  return all;
}

// node->node scores restricted to mol -> rxn edges.
inline std::vector<std::pair<int, double>> mol_importance_scores(
    const AttentionRecord& rec, const RxnHypergraph& g) {
  std::vector<std::pair<int, double>> out;
  for (const auto& [src, dst, score] : node_node_scores(rec, g))
    if (g.nodes[src].kind == NodeKind::Mol && g.nodes[dst].kind == NodeKind::Rxn)
      out.emplace_back(src, score);
  return out;
}

inline InterpretReport interpret_scores(const AttentionRecord& rec,
                                        const RxnHypergraph& g,
                                        const InterpretOptions& opts = {}) {
  InterpretReport rep;
  rep.atom_rxn = atom_rxn_scores(rec, g, opts);
  rep.node_node = node_node_scores(rec, g);
  rep.atom_atom = atom_atom_scores(rec, g, opts);
  rep.mol_importance = mol_importance_scores(rec, g);
  return rep;
}

// Runs the model with attention recording and scores one reaction.
inline InterpretReport explain_reaction(const GnnModel& model, const Reaction& rxn,
                                        const InterpretOptions& opts = {}) {
  if (model.cfg.layer_kind != LayerKind::Rgat)
    throw UnsupportedModelError(
        "interpret: attention scores need an rgat model (rgcn has none)");
  auto g = build_hypergraph(rxn);
  AttentionRecord rec;
  model_forward(model, g, &rec);
  return interpret_scores(rec, g, opts);
}

inline nlohmann::json report_to_json(const InterpretReport& rep,
                                     const std::string& reaction_text) {
  auto pairs = [](const std::vector<std::pair<int, double>>& v, const char* key) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [node, score] : v)
      arr.push_back({{key, node}, {"score", score}});
    return arr;
  };
  nlohmann::json node_node = nlohmann::json::array();
  for (const auto& [src, dst, score] : rep.node_node)
    node_node.push_back({{"src", src}, {"dst", dst}, {"score", score}});
  nlohmann::json atom_atom = nlohmann::json::array();
  for (const auto& [a, b, score] : rep.atom_atom)
    atom_atom.push_back({{"a", a}, {"b", b}, {"score", score}});
  return nlohmann::json{{"format_version", 1},
                        {"reaction", reaction_text},
                        {"atom_rxn", pairs(rep.atom_rxn, "node")},
                        {"node_node", node_node},
                        {"atom_atom", atom_atom},
                        {"mol_importance", pairs(rep.mol_importance, "mol")}};
}

}  // namespace rxngraph

#endif  // RXNGRAPH_INTERPRET_HPP
