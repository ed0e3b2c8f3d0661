// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Reaction hypergraph: the union of all molecular graphs plus one
// mol-hypernode per molecule, one rxn-hypernode per side, and four extra
// edge relations (atom-mol, mol-atom, mol-mol, mol-rxn). Every pair of
// same-side atoms ends up within three directed hops; the rxn-hypernodes
// are pure sinks, so the two sides never exchange information.

#ifndef RXNGRAPH_HYPERGRAPH_HPP
#define RXNGRAPH_HYPERGRAPH_HPP

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "rxngraph/chem.hpp"
#include "rxngraph/errors.hpp"

namespace rxngraph {

enum class Side { Reactant = 0, Product = 1 };

inline const char* side_name(Side s) {
  return s == Side::Reactant ? "reactant" : "product";
}

enum class NodeKind { Atom = 0, Mol = 1, Rxn = 2 };

inline const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Atom: return "atom";
    case NodeKind::Mol: return "mol";
    case NodeKind::Rxn: return "rxn";
  }
  return "?";
}

enum class RelationKind {
  BondSingle = 0,
  BondDouble = 1,
  BondTriple = 2,
  BondAromatic = 3,
  AtomMol = 4,
  MolAtom = 5,
  MolMol = 6,
  MolRxn = 7,
};

inline constexpr int kNumRelations = 8;

inline const char* relation_name(RelationKind r) {
  switch (r) {
    case RelationKind::BondSingle: return "bond-single";
    case RelationKind::BondDouble: return "bond-double";
    case RelationKind::BondTriple: return "bond-triple";
    case RelationKind::BondAromatic: return "bond-aromatic";
    case RelationKind::AtomMol: return "atom-mol";
    case RelationKind::MolAtom: return "mol-atom";
    case RelationKind::MolMol: return "mol-mol";
    case RelationKind::MolRxn: return "mol-rxn";
  }
  return "?";
}

inline RelationKind bond_relation(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return RelationKind::BondSingle;
    case BondOrder::Double: return RelationKind::BondDouble;
    case BondOrder::Triple: return RelationKind::BondTriple;
    case BondOrder::Aromatic: return RelationKind::BondAromatic;
  }
  return RelationKind::BondSingle;
}

struct HyperNode {
  NodeKind kind = NodeKind::Atom;
  Side side = Side::Reactant;
  int mol = -1;          // molecule index (reactants first), -1 for rxn nodes
  int atom_in_mol = -1;  // atom index within the molecule, -1 for hypernodes
  Atom atom;             // valid only for atom nodes
};

struct HyperEdge {
  int src = 0;
  int dst = 0;
  RelationKind rel = RelationKind::BondSingle;
};

struct RxnHypergraph {
  std::vector<HyperNode> nodes;
  std::vector<HyperEdge> edges;  // construction order
  int n_reactants = 0;
  int n_products = 0;
  int total_atoms = 0;
  std::vector<int> mol_atom_counts;  // reactants first, then products

  // Per relation, edges as (src, dst) sorted by (dst, src). This order is
  // the contract for everything downstream (GNN message passing, recorded
  // attention weights).
  std::array<std::vector<std::pair<int, int>>, kNumRelations> rel_edges;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_molecules() const { return n_reactants + n_products; }

  int mol_node_id(int mol_index) const { return total_atoms + mol_index; }
  int rxn_node_id(Side s) const {
    return total_atoms + num_molecules() + (s == Side::Reactant ? 0 : 1);
  }
};

// Rebuilds rel_edges from the flat edge list; (dst, src) sorted per relation.
inline void rebuild_relation_index(RxnHypergraph& g) {
  for (auto& v : g.rel_edges) v.clear();
  for (const HyperEdge& e : g.edges)
    g.rel_edges[static_cast<int>(e.rel)].emplace_back(e.src, e.dst);
  for (auto& v : g.rel_edges)
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
}

inline RxnHypergraph build_hypergraph(const Reaction& rxn) {
  if (rxn.reactants.empty() || rxn.products.empty())
    throw InputError("build_hypergraph: reaction needs both sides");
  for (const auto& m : rxn.reactants)
    if (m.atoms.empty()) throw InputError("build_hypergraph: empty molecule");
  for (const auto& m : rxn.products)
    if (m.atoms.empty()) throw InputError("build_hypergraph: empty molecule");

  RxnHypergraph g;
  g.n_reactants = rxn.num_reactants();
  g.n_products = rxn.num_products();

  // Node order: reactant atoms, product atoms, reactant mol-hypernodes,
  // product mol-hypernodes, rxn-hypernode(reactant), rxn-hypernode(product).
  std::vector<int> atom_base;  // first node id of each molecule's atoms
  auto add_side_atoms = [&](const std::vector<MolecularGraph>& mols, Side side,
                            int mol_offset) {
    for (std::size_t i = 0; i < mols.size(); ++i) {
      atom_base.push_back(g.num_nodes());
      g.mol_atom_counts.push_back(mols[i].num_atoms());
      for (int a = 0; a < mols[i].num_atoms(); ++a) {
        HyperNode n;
        n.kind = NodeKind::Atom;
        n.side = side;
        n.mol = mol_offset + static_cast<int>(i);
        n.atom_in_mol = a;
        n.atom = mols[i].atoms[a];
        g.nodes.push_back(n);
      }
    }
  };
  add_side_atoms(rxn.reactants, Side::Reactant, 0);
  add_side_atoms(rxn.products, Side::Product, g.n_reactants);
  g.total_atoms = g.num_nodes();

  const int n_mols = g.num_molecules();
  for (int m = 0; m < n_mols; ++m) {
    HyperNode n;
    n.kind = NodeKind::Mol;
    n.side = m < g.n_reactants ? Side::Reactant : Side::Product;
    n.mol = m;
    g.nodes.push_back(n);
  }
  for (Side s : {Side::Reactant, Side::Product}) {
    HyperNode n;
    n.kind = NodeKind::Rxn;
    n.side = s;
    g.nodes.push_back(n);
  }

  auto push_edge = [&](int src, int dst, RelationKind rel) {
    g.edges.push_back({src, dst, rel});
  };

  // Bonds, both directions, typed by order.
  auto add_bonds = [&](const std::vector<MolecularGraph>& mols, int mol_offset) {
    for (std::size_t i = 0; i < mols.size(); ++i) {
      const int base = atom_base[mol_offset + static_cast<int>(i)];
      for (const Bond& b : mols[i].bonds) {
        const RelationKind rel = bond_relation(b.order);
        push_edge(base + b.u, base + b.v, rel);
        push_edge(base + b.v, base + b.u, rel);
      }
    }
  };
  add_bonds(rxn.reactants, 0);
  add_bonds(rxn.products, g.n_reactants);

  // atom <-> mol-hypernode.
  for (int m = 0; m < n_mols; ++m) {
    const int mol_id = g.mol_node_id(m);
    for (int a = 0; a < g.mol_atom_counts[m]; ++a) {
      const int atom_id = atom_base[m] + a;
      push_edge(atom_id, mol_id, RelationKind::AtomMol);
      push_edge(mol_id, atom_id, RelationKind::MolAtom);
    }
  }

  // mol <-> mol, complete digraph within each side.
  auto add_mol_mol = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i)
      for (int j = lo; j < hi; ++j)
        if (i != j) push_edge(g.mol_node_id(i), g.mol_node_id(j), RelationKind::MolMol);
  };
  add_mol_mol(0, g.n_reactants);
  add_mol_mol(g.n_reactants, n_mols);

  // mol -> rxn, one way only: the rxn-hypernode is a sink.
  for (int m = 0; m < n_mols; ++m) {
    const Side s = m < g.n_reactants ? Side::Reactant : Side::Product;
    push_edge(g.mol_node_id(m), g.rxn_node_id(s), RelationKind::MolRxn);
  }

  rebuild_relation_index(g);
  return g;
}

// Edges of one relation kind, sorted by (dst, src).
inline const std::vector<std::pair<int, int>>& relation_adjacency(
    const RxnHypergraph& g, RelationKind rel) {
  return g.rel_edges[static_cast<int>(rel)];
}

// Initial node features. Atom slots and hypernode slots are disjoint.
struct FeatureConfig {
  static constexpr int kNumElements = 13;  // 12 supported + shared "other"
  static constexpr int kChargeBuckets = 5;   // <=-2, -1, 0, +1, >=+2
  static constexpr int kHydrogenBuckets = 5; // 0..3, >=4

  int element_slot(const Atom& a) const {
    const int idx = supported_element_index(a.element);
    return idx >= 0 ? idx : kNumElements - 1;
  }
  int charge_slot(const Atom& a) const {
    return std::clamp(a.formal_charge, -2, 2) + 2;
  }
  int hydrogen_slot(const Atom& a) const { return std::min(a.implicit_h, 4); }

  int atom_dim() const { return kNumElements + kChargeBuckets + 1 + kHydrogenBuckets + 1; }
  int hypernode_dim() const { return 4; }
  int dim() const { return atom_dim() + hypernode_dim(); }

  // Row layout: [element one-hot | charge bucket | aromatic | H bucket |
  // radical | mol-r, mol-p, rxn-r, rxn-p one-hot].
  void fill_row(const HyperNode& n, double* row) const {
    if (n.kind == NodeKind::Atom) {
      const Atom& a = n.atom;
      row[element_slot(a)] = 1.0;
      row[kNumElements + charge_slot(a)] = 1.0;
      if (a.aromatic) row[kNumElements + kChargeBuckets] = 1.0;
      row[kNumElements + kChargeBuckets + 1 + hydrogen_slot(a)] = 1.0;
      if (a.radical_electrons > 0) row[atom_dim() - 1] = 1.0;
      return;
    }
    const int base = atom_dim();
    const int side_bit = n.side == Side::Product ? 1 : 0;
    row[base + (n.kind == NodeKind::Mol ? 0 : 2) + side_bit] = 1.0;
  }
};

// |V*| x D_in feature matrix, row-major.
inline std::vector<double> featurize(const RxnHypergraph& g,
                                     const FeatureConfig& cfg = {}) {
  const int d = cfg.dim();
  std::vector<double> rows(static_cast<std::size_t>(g.num_nodes()) * d, 0.0);
  for (int i = 0; i < g.num_nodes(); ++i)
    cfg.fill_row(g.nodes[i], rows.data() + static_cast<std::size_t>(i) * d);
  return rows;
}

inline nlohmann::json hypergraph_to_json(const RxnHypergraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (int i = 0; i < g.num_nodes(); ++i) {
    const HyperNode& n = g.nodes[i];
    nlohmann::json jn{{"id", i},
                      {"kind", node_kind_name(n.kind)},
                      {"side", side_name(n.side)}};
    if (n.kind != NodeKind::Rxn) jn["mol"] = n.mol;
    if (n.kind == NodeKind::Atom) {
      jn["element"] = n.atom.element;
      jn["charge"] = n.atom.formal_charge;
      jn["aromatic"] = n.atom.aromatic;
      jn["hcount"] = n.atom.implicit_h;
      jn["radical"] = n.atom.radical_electrons;
    }
    nodes.push_back(std::move(jn));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const HyperEdge& e : g.edges)
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"relation", relation_name(e.rel)}});
  return nlohmann::json{{"format_version", 1},
                        {"nodes", std::move(nodes)},
                        {"edges", std::move(edges)},
                        {"counts",
                         {{"reactants", g.n_reactants},
                          {"products", g.n_products},
                          {"atoms", g.total_atoms},
                          {"atoms_per_molecule", g.mol_atom_counts}}}};
}

}  // namespace rxngraph

#endif  // RXNGRAPH_HYPERGRAPH_HPP
