// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "rxngraph/interpret.hpp"
#include "rxngraph/smiles.hpp"
#include "rxngraph/synth.hpp"

using namespace rxngraph;

namespace {

GnnModel rgat_model(std::uint64_t seed, int layers = 3, int dim = 8) {
  ModelConfig cfg;
  cfg.layer_kind = LayerKind::Rgat;
  cfg.layers = layers;
  cfg.dim = dim;
  cfg.task = TaskKind::Classify;
  cfg.classes = 2;
  cfg.seed = seed;
  Rng rng(seed);
  return init_model(cfg, FeatureConfig{}.dim(), rng);
}

// Record with hand-set attention: every edge of every layer gets `value`,
// except overrides. Self entries get whatever normalization leaves over; the
// scores only read edge entries so that is irrelevant here.
AttentionRecord uniform_record(const RxnHypergraph& g, int layers, double value) {
  AttentionRecord rec;
  for (int l = 0; l < layers; ++l) {
    LayerAttention la;
    la.self_gate.assign(g.num_nodes(), 0.0);
    for (int r = 0; r < kNumRelations; ++r)
      la.edge_alpha[r].assign(g.rel_edges[r].size(), value);
    rec.layers.push_back(std::move(la));
  }
  return rec;
}

void set_alpha(AttentionRecord& rec, const RxnHypergraph& g, int layer, int src,
               int dst, double value) {
  for (int r = 0; r < kNumRelations; ++r) {
    const auto& edges = g.rel_edges[r];
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e] == std::make_pair(src, dst)) {
        rec.layers[layer].edge_alpha[r][e] = value;
        return;
      }
  }
  FAIL("no such edge");
}

}  // namespace

TEST_CASE("atom_rxn scores multiply path weights") {
  auto g = build_hypergraph(parse_reaction("C>>C"));
  auto rec = uniform_record(g, 2, 0.9);
  const int atom = 0;  // reactant atom
  const int mol = g.mol_node_id(0);
  const int rxn = g.rxn_node_id(Side::Reactant);
  set_alpha(rec, g, 1, atom, mol, 0.5);  // final layer
  set_alpha(rec, g, 1, mol, rxn, 0.2);

  auto scores = atom_rxn_scores(rec, g);
  double got = -1;
  for (const auto& [node, s] : scores)
    if (node == atom) got = s;
  CHECK(got == Catch::Approx(0.1).epsilon(1e-12));

  SECTION("score never exceeds either factor") {
    for (const auto& [node, s] : scores) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
  SECTION("averaged-product mode uses every layer") {
    set_alpha(rec, g, 0, atom, mol, 1.0);
    set_alpha(rec, g, 0, mol, rxn, 1.0);
    InterpretOptions opts;
    opts.path_mode = InterpretOptions::PathMode::AverageLayerProducts;
    auto avg = atom_rxn_scores(rec, g, opts);
    double got_avg = -1;
    for (const auto& [node, s] : avg)
      if (node == atom) got_avg = s;
    CHECK(got_avg == Catch::Approx((1.0 + 0.1) / 2).epsilon(1e-12));
  }
}

TEST_CASE("node_node scores average layers") {
  auto g = build_hypergraph(parse_reaction("CC>>CC"));
  SECTION("constant attention stays constant") {
    auto rec = uniform_record(g, 4, 0.3);
    for (const auto& [src, dst, s] : node_node_scores(rec, g))
      CHECK(s == Catch::Approx(0.3).epsilon(1e-12));
  }
  SECTION("mean of per-layer values") {
    auto rec = uniform_record(g, 2, 0.0);
    set_alpha(rec, g, 0, 0, 1, 0.4);
    set_alpha(rec, g, 1, 0, 1, 0.8);
    for (const auto& [src, dst, s] : node_node_scores(rec, g))
      if (src == 0 && dst == 1) CHECK(s == Catch::Approx(0.6).epsilon(1e-12));
  }
  SECTION("covers every directed edge") {
    auto rec = uniform_record(g, 2, 0.1);
    CHECK(node_node_scores(rec, g).size() == static_cast<std::size_t>(g.num_edges()));
  }
}

TEST_CASE("atom_atom intermolecular scores") {
  // two reactant molecules with two atoms each
  auto g = build_hypergraph(parse_reaction("CC.CC>>CCCC"));
  auto rec = uniform_record(g, 1, 0.5);

  SECTION("counts directed pairs across molecules") {
    InterpretOptions opts;
    opts.top_k_atom_pairs = -1;  // keep all
    auto scores = atom_atom_scores(rec, g, opts);
    int reactant_pairs = 0;
    for (const auto& [a, b, s] : scores)
      if (g.nodes[a].side == Side::Reactant) ++reactant_pairs;
    CHECK(reactant_pairs == 8);  // 2 mols x 2 atoms x 2 atoms, both directions
  }
  SECTION("all factors one gives one") {
    auto ones = uniform_record(g, 1, 1.0);
    for (const auto& [a, b, s] : atom_atom_scores(ones, g))
      CHECK(s == 1.0);
  }
  SECTION("any zero factor gives zero") {
    const int mol0 = g.mol_node_id(0), mol1 = g.mol_node_id(1);
    set_alpha(rec, g, 0, mol0, mol1, 0.0);
    for (const auto& [a, b, s] : atom_atom_scores(rec, g))
      if (g.nodes[a].mol == 0 && g.nodes[b].mol == 1) CHECK(s == 0.0);
  }
  SECTION("top_k truncates per side") {
    InterpretOptions opts;
    opts.top_k_atom_pairs = 3;
    CHECK(atom_atom_scores(rec, g, opts).size() == 3);  // no product-side pairs
  }
}

TEST_CASE("interpretability on a live model") {
  auto rxn = parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O");
  auto model = rgat_model(71);

  SECTION("all scores lie in [0, 1]") {
    auto rep = explain_reaction(model, rxn);
    for (const auto& [n, s] : rep.atom_rxn) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    for (const auto& [a, b, s] : rep.node_node) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    for (const auto& [a, b, s] : rep.atom_atom) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    for (const auto& [m, s] : rep.mol_importance) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    CHECK(rep.mol_importance.size() == 4);
  }
  SECTION("zeroed attention parameters give uniform neighborhood weights") {
    auto model0 = rgat_model(72);
    for (auto& [name, t] : model0.params.items)
      if (name.find(".a") != std::string::npos)
        std::fill(t.mutable_val().v.begin(), t.mutable_val().v.end(), 0.0);
    auto g = build_hypergraph(rxn);
    AttentionRecord rec;
    model_forward(model0, g, &rec);
    // in-degree per (node, relation), self entry included
    for (const auto& [src, dst, s] : node_node_scores(rec, g)) {
      RelationKind rel{};
      for (const auto& e : g.edges)
        if (e.src == src && e.dst == dst) rel = e.rel;
      int indeg = 0;
      for (const auto& [s2, d2] : relation_adjacency(g, rel))
        if (d2 == dst) ++indeg;
      CHECK(s == Catch::Approx(1.0 / (indeg + 1)).epsilon(1e-9));
    }
  }
  SECTION("permutation consistency of the score multiset") {
    Rng rng(73);
    auto perms = random_atom_permutations(rxn, rng);
    auto permuted = permute_reaction(rxn, perms,
                                     random_permutation(rxn.reactants.size(), rng),
                                     random_permutation(rxn.products.size(), rng));
    auto rep_a = explain_reaction(model, rxn);
    auto rep_b = explain_reaction(model, permuted);

    auto sorted_scores = [](const std::vector<std::pair<int, double>>& v) {
      std::vector<double> s;
      for (const auto& [n, x] : v) s.push_back(x);
      std::sort(s.begin(), s.end());
      return s;
    };
    auto sa = sorted_scores(rep_a.atom_rxn);
    auto sb = sorted_scores(rep_b.atom_rxn);
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i)
      CHECK(sa[i] == Catch::Approx(sb[i]).margin(1e-9));

    auto sorted_edge_scores = [](const std::vector<std::tuple<int, int, double>>& v) {
      std::vector<double> s;
      for (const auto& [a, b, x] : v) s.push_back(x);
      std::sort(s.begin(), s.end());
      return s;
    };
    auto ea = sorted_edge_scores(rep_a.node_node);
    auto eb = sorted_edge_scores(rep_b.node_node);
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i)
      CHECK(ea[i] == Catch::Approx(eb[i]).margin(1e-9));
  }
  SECTION("rgcn models are rejected") {
    ModelConfig cfg;
    cfg.layer_kind = LayerKind::Rgcn;
    cfg.layers = 3;
    cfg.dim = 8;
    Rng rng(74);
    auto rgcn = init_model(cfg, FeatureConfig{}.dim(), rng);
    CHECK_THROWS_AS(explain_reaction(rgcn, rxn), UnsupportedModelError);
  }
  SECTION("report serializes with node ids") {
    auto rep = explain_reaction(model, rxn);
    auto j = report_to_json(rep, rxn.source_text);
    CHECK(j["format_version"] == 1);
    CHECK(j["reaction"] == rxn.source_text);
    CHECK(j["atom_rxn"].size() == 14);
    CHECK(j["mol_importance"].size() == 4);
  }
}
