// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <deque>
#include <map>
#include <set>

#include "rxngraph/hypergraph.hpp"
#include "rxngraph/rng.hpp"
#include "rxngraph/smiles.hpp"
#include "rxngraph/synth.hpp"

using namespace rxngraph;

namespace {

int expected_nodes(const Reaction& r) {
  return r.total_atoms() + r.num_reactants() + r.num_products() + 2;
}

int expected_edges(const Reaction& r) {
  const int n = r.num_reactants(), m = r.num_products();
  return 2 * r.total_bonds() + 2 * r.total_atoms() + n * (n - 1) + m * (m - 1) +
         n + m;
}

// Directed BFS distances from one source.
std::vector<int> bfs_dist(const RxnHypergraph& g, int src) {
  std::vector<std::vector<int>> adj(g.num_nodes());
  for (const auto& e : g.edges) adj[e.src].push_back(e.dst);
  std::vector<int> dist(g.num_nodes(), -1);
  std::deque<int> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return dist;
}

}  // namespace

TEST_CASE("hypergraph node and edge counts") {
  SECTION("esterification example") {
    auto rxn = parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O");
    auto g = build_hypergraph(rxn);
    CHECK(g.total_atoms == 14);
    CHECK(g.num_nodes() == 20);
    CHECK(g.num_edges() == 56);  // 20 + 28 + 2 + 2 + 4
  }
  SECTION("single atoms on both sides") {
    auto g = build_hypergraph(parse_reaction("C>>C"));
    CHECK(g.num_nodes() == 6);
    CHECK(g.num_edges() == 6);
  }
  SECTION("three reactants give six directed mol-mol edges") {
    auto g = build_hypergraph(parse_reaction("C.C.C>>C"));
    CHECK(relation_adjacency(g, RelationKind::MolMol).size() == 6);
  }
  SECTION("count formulas hold on random reactions") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      auto rxn = random_reaction(rng);
      auto g = build_hypergraph(rxn);
      REQUIRE(g.num_nodes() == expected_nodes(rxn));
      REQUIRE(g.num_edges() == expected_edges(rxn));
    }
  }
}

TEST_CASE("hypergraph node ordering") {
  auto rxn = parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O");
  auto g = build_hypergraph(rxn);
  // reactant atoms, product atoms, reactant mols, product mols, x^r, x^p
  for (int i = 0; i < 14; ++i) CHECK(g.nodes[i].kind == NodeKind::Atom);
  for (int i = 0; i < 7; ++i) CHECK(g.nodes[i].side == Side::Reactant);
  for (int i = 7; i < 14; ++i) CHECK(g.nodes[i].side == Side::Product);
  for (int i = 14; i < 18; ++i) CHECK(g.nodes[i].kind == NodeKind::Mol);
  CHECK(g.nodes[18].kind == NodeKind::Rxn);
  CHECK(g.nodes[18].side == Side::Reactant);
  CHECK(g.nodes[19].kind == NodeKind::Rxn);
  CHECK(g.nodes[19].side == Side::Product);
  CHECK(g.mol_node_id(0) == 14);
  CHECK(g.rxn_node_id(Side::Product) == 19);
}

TEST_CASE("relation_adjacency") {
  SECTION("mol-rxn edges on C>>C") {
    auto g = build_hypergraph(parse_reaction("C>>C"));
    auto mr = relation_adjacency(g, RelationKind::MolRxn);
    REQUIRE(mr.size() == 2);
    CHECK(mr[0] == std::make_pair(g.mol_node_id(0), g.rxn_node_id(Side::Reactant)));
    CHECK(mr[1] == std::make_pair(g.mol_node_id(1), g.rxn_node_id(Side::Product)));
  }
  SECTION("absent relation is empty") {
    auto g = build_hypergraph(parse_reaction("CC>>CC"));
    CHECK(relation_adjacency(g, RelationKind::BondTriple).empty());
  }
  SECTION("relations partition the edge set") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
      auto g = build_hypergraph(random_reaction(rng));
      std::multiset<std::pair<int, int>> from_relations, from_edges;
      for (int r = 0; r < kNumRelations; ++r)
        for (auto& e : relation_adjacency(g, static_cast<RelationKind>(r)))
          from_relations.insert(e);
      for (const auto& e : g.edges) from_edges.insert({e.src, e.dst});
      REQUIRE(from_relations == from_edges);
    }
  }
  SECTION("deterministic (dst, src) order") {
    auto g = build_hypergraph(parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O"));
    for (int r = 0; r < kNumRelations; ++r) {
      const auto& v = relation_adjacency(g, static_cast<RelationKind>(r));
      for (std::size_t i = 1; i < v.size(); ++i)
        CHECK(std::make_pair(v[i - 1].second, v[i - 1].first) <
              std::make_pair(v[i].second, v[i].first));
    }
  }
}

TEST_CASE("featurize") {
  FeatureConfig cfg;
  auto rxn = parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O");
  auto g = build_hypergraph(rxn);
  auto f = featurize(g, cfg);
  const int d = cfg.dim();
  REQUIRE(f.size() == static_cast<std::size_t>(20 * d));

  SECTION("rxn hypernode rows have exactly one nonzero entry") {
    const int row = g.rxn_node_id(Side::Reactant);
    int nonzero = 0;
    for (int c = 0; c < d; ++c)
      if (f[row * d + c] != 0.0) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(f[row * d + cfg.atom_dim() + 2] == 1.0);
  }
  SECTION("identical atoms get identical rows") {
    // reactant atoms 0 and 1 are both CH3/CH2? no: C(0) has 3 H, C(1) has 2.
    // Use the two methyl carbons of the two acetyl groups instead:
    // reactant CC(=O)O atom 3(C) vs product CC(=O)OCC atom 0(C) both CH3.
    const int r_methyl = 3;       // first atom of second reactant (base 3)
    const int p_methyl = 7;       // first atom of first product (base 7)
    CHECK(g.nodes[r_methyl].atom.element == "C");
    CHECK(g.nodes[p_methyl].atom.element == "C");
    for (int c = 0; c < d; ++c)
      CHECK(f[r_methyl * d + c] == f[p_methyl * d + c]);
  }
  SECTION("atom rows have zero hypernode slots and vice versa") {
    for (int i = 0; i < g.num_nodes(); ++i) {
      double atom_part = 0, hyper_part = 0;
      for (int c = 0; c < cfg.atom_dim(); ++c) atom_part += f[i * d + c];
      for (int c = cfg.atom_dim(); c < d; ++c) hyper_part += f[i * d + c];
      if (g.nodes[i].kind == NodeKind::Atom) {
        CHECK(atom_part > 0);
        CHECK(hyper_part == 0);
      } else {
        CHECK(atom_part == 0);
        CHECK(hyper_part == 1.0);
      }
    }
  }
}

TEST_CASE("hypergraph reachability invariants") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto rxn = random_reaction(rng, 4, 1, 12);
    auto g = build_hypergraph(rxn);
    for (int src = 0; src < g.total_atoms; ++src) {
      auto dist = bfs_dist(g, src);
      const Side side = g.nodes[src].side;
      for (int v = 0; v < g.num_nodes(); ++v) {
        if (g.nodes[v].side != side) {
          REQUIRE(dist[v] < 0);  // never reaches the opposite side
        } else if (g.nodes[v].kind == NodeKind::Atom) {
          REQUIRE(dist[v] >= 0);
          REQUIRE(dist[v] <= 3);  // same-side atoms within three hops
        } else if (g.nodes[v].kind == NodeKind::Rxn) {
          REQUIRE(dist[v] == 2);  // atom -> mol -> rxn
        }
      }
    }
    // rxn-hypernodes are sinks
    for (const auto& e : g.edges) {
      REQUIRE(g.nodes[e.src].kind != NodeKind::Rxn);
    }
  }
}

TEST_CASE("hypergraph construction is permutation equivariant") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto rxn = random_reaction(rng, 4, 1, 10);
    auto perms = random_atom_permutations(rxn, rng);
    auto mol_r = random_permutation(rxn.reactants.size(), rng);
    auto mol_p = random_permutation(rxn.products.size(), rng);
    auto permuted = permute_reaction(rxn, perms, mol_r, mol_p);

    auto g0 = build_hypergraph(rxn);
    auto g1 = build_hypergraph(permuted);
    REQUIRE(g0.num_nodes() == g1.num_nodes());
    REQUIRE(g0.num_edges() == g1.num_edges());

    // induced node permutation: node id in g0 -> node id in g1
    const int n_r = rxn.num_reactants(), n_p = rxn.num_products();
    std::vector<int> mol_map(n_r + n_p);
    for (int i = 0; i < n_r; ++i) mol_map[i] = mol_r[i];
    for (int i = 0; i < n_p; ++i) mol_map[n_r + i] = n_r + mol_p[i];

    std::vector<int> new_mol_base(n_r + n_p, 0);
    for (int m = 1; m < n_r + n_p; ++m)
      new_mol_base[m] = new_mol_base[m - 1] + g1.mol_atom_counts[m - 1];

    std::vector<int> node_map(g0.num_nodes());
    for (int v = 0; v < g0.num_nodes(); ++v) {
      const auto& n = g0.nodes[v];
      if (n.kind == NodeKind::Atom)
        node_map[v] = new_mol_base[mol_map[n.mol]] + perms[n.mol][n.atom_in_mol];
      else if (n.kind == NodeKind::Mol)
        node_map[v] = g1.mol_node_id(mol_map[n.mol]);
      else
        node_map[v] = g1.rxn_node_id(n.side);
    }

    std::multiset<std::tuple<int, int, int>> e0, e1;
    for (const auto& e : g0.edges)
      e0.insert({node_map[e.src], node_map[e.dst], static_cast<int>(e.rel)});
    for (const auto& e : g1.edges)
      e1.insert({e.src, e.dst, static_cast<int>(e.rel)});
    REQUIRE(e0 == e1);
  }
}

TEST_CASE("hypergraph json dump") {
  auto g = build_hypergraph(parse_reaction("C>>C"));
  auto j = hypergraph_to_json(g);
  CHECK(j["format_version"] == 1);
  CHECK(j["nodes"].size() == 6);
  CHECK(j["edges"].size() == 6);
  CHECK(j["nodes"][0]["element"] == "C");
  CHECK(j["counts"]["reactants"] == 1);
}

TEST_CASE("build_hypergraph rejects empty input") {
  Reaction r;
  r.reactants.push_back(parse_molecule("C"));
  CHECK_THROWS_AS(build_hypergraph(r), InputError);
  r.products.push_back(MolecularGraph{});
  CHECK_THROWS_AS(build_hypergraph(r), InputError);
}
