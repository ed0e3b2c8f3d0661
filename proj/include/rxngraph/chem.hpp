// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RXNGRAPH_CHEM_HPP
#define RXNGRAPH_CHEM_HPP

#include <algorithm>
#include <array>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "rxngraph/errors.hpp"

namespace rxngraph {

enum class BondOrder { Single, Double, Triple, Aromatic };

inline const char* bond_order_name(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return "single";
    case BondOrder::Double: return "double";
    case BondOrder::Triple: return "triple";
    case BondOrder::Aromatic: return "aromatic";
  }
  return "?";
}

// Integer bond order used for valence bookkeeping. Aromatic counts as 1;
// the delocalised contribution is handled by the aromatic H-count rule in
// the parser, not here.
inline int bond_order_units(BondOrder o) {
  switch (o) {
    case BondOrder::Single: return 1;
    case BondOrder::Double: return 2;
    case BondOrder::Triple: return 3;
    case BondOrder::Aromatic: return 1;
  }
  return 1;
}

// Elements with first-class feature slots. Everything else is kept as its
// original token and mapped to a shared "other" slot.
inline const std::array<const char*, 12>& supported_elements() {
  static const std::array<const char*, 12> kElems = {
      "H", "B", "C", "N", "O", "F", "Si", "P", "S", "Cl", "Br", "I"};
  return kElems;
}

inline int supported_element_index(const std::string& element) {
  const auto& elems = supported_elements();
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (element == elems[i]) return static_cast<int>(i);
  return -1;
}

struct Atom {
  std::string element;  // canonical token, e.g. "C", "Cl", or "Na" (other)
  int formal_charge = 0;
  bool aromatic = false;
  int implicit_h = 0;
  int radical_electrons = 0;

  bool is_other() const { return supported_element_index(element) < 0; }

  bool operator==(const Atom& o) const {
    return element == o.element && formal_charge == o.formal_charge &&
           aromatic == o.aromatic && implicit_h == o.implicit_h &&
           radical_electrons == o.radical_electrons;
  }
};

struct Bond {
  int u = 0;
  int v = 0;
  BondOrder order = BondOrder::Single;

  bool operator==(const Bond& o) const {
    return u == o.u && v == o.v && order == o.order;
  }
};

struct MolecularGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;  // u < v always

  int num_atoms() const { return static_cast<int>(atoms.size()); }
  int num_bonds() const { return static_cast<int>(bonds.size()); }

  int degree(int a) const {
    int d = 0;
    for (const Bond& b : bonds)
      if (b.u == a || b.v == a) ++d;
    return d;
  }

  std::vector<std::pair<int, BondOrder>> neighbors(int a) const {
    std::vector<std::pair<int, BondOrder>> out;
    for (const Bond& b : bonds) {
      if (b.u == a) out.emplace_back(b.v, b.order);
      if (b.v == a) out.emplace_back(b.u, b.order);
    }
    return out;
  }

  std::optional<BondOrder> bond_between(int a, int b) const {
    const int lo = std::min(a, b), hi = std::max(a, b);
    for (const Bond& bd : bonds)
      if (bd.u == lo && bd.v == hi) return bd.order;
    return std::nullopt;
  }

  bool operator==(const MolecularGraph& o) const {
    return atoms == o.atoms && bonds == o.bonds;
  }
};

struct Reaction {
  std::vector<MolecularGraph> reactants;  // agents merged in, flagged below
  std::vector<MolecularGraph> products;
  std::vector<bool> reactant_is_agent;  // parallel to `reactants`
  std::string source_text;

  int num_reactants() const { return static_cast<int>(reactants.size()); }
  int num_products() const { return static_cast<int>(products.size()); }

  int total_atoms() const {
    int t = 0;
    for (const auto& m : reactants) t += m.num_atoms();
    for (const auto& m : products) t += m.num_atoms();
    return t;
  }

  int total_bonds() const {
    int t = 0;
    for (const auto& m : reactants) t += m.num_bonds();
    for (const auto& m : products) t += m.num_bonds();
    return t;
  }

  bool structurally_equal(const Reaction& o) const {
    return reactants == o.reactants && products == o.products &&
           reactant_is_agent == o.reactant_is_agent;
  }
};

namespace detail {

inline bool is_permutation_vec(const std::vector<int>& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (int x : p) {
    if (x < 0 || static_cast<std::size_t>(x) >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

inline MolecularGraph permute_molecule(const MolecularGraph& m,
                                       const std::vector<int>& perm) {
  if (!is_permutation_vec(perm, m.atoms.size()))
    throw InputError("atom permutation length/content mismatch");
  MolecularGraph out;
  out.atoms.resize(m.atoms.size());
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    out.atoms[perm[i]] = m.atoms[i];
  out.bonds.reserve(m.bonds.size());
  for (const Bond& b : m.bonds) {
    Bond nb;
    nb.u = std::min(perm[b.u], perm[b.v]);
    nb.v = std::max(perm[b.u], perm[b.v]);
    nb.order = b.order;
    out.bonds.push_back(nb);
  }
  return out;
}

}  // namespace detail

// Relabels atoms within each molecule and reorders the molecule lists.
// atom_perms is indexed reactants first, then products; perm[i] = new index
// of old item i in every case. The result describes the same chemistry.
inline Reaction permute_reaction(const Reaction& rxn,
                                 const std::vector<std::vector<int>>& atom_perms,
                                 const std::vector<int>& mol_perm_r,
                                 const std::vector<int>& mol_perm_p) {
  const std::size_t n = rxn.reactants.size(), m = rxn.products.size();
  if (atom_perms.size() != n + m)
    throw InputError("permute_reaction: need one atom permutation per molecule");
  if (!detail::is_permutation_vec(mol_perm_r, n))
    throw InputError("permute_reaction: bad reactant permutation");
  if (!detail::is_permutation_vec(mol_perm_p, m))
    throw InputError("permute_reaction: bad product permutation");

  Reaction out;
  out.source_text = rxn.source_text;
  out.reactants.resize(n);
  out.reactant_is_agent.resize(n);
  out.products.resize(m);
  for (std::size_t i = 0; i < n; ++i) {
    out.reactants[mol_perm_r[i]] = detail::permute_molecule(rxn.reactants[i], atom_perms[i]);
    out.reactant_is_agent[mol_perm_r[i]] =
        rxn.reactant_is_agent.empty() ? false : rxn.reactant_is_agent[i];
  }
  for (std::size_t i = 0; i < m; ++i)
    out.products[mol_perm_p[i]] = detail::permute_molecule(rxn.products[i], atom_perms[n + i]);
  return out;
}

inline std::vector<int> identity_permutation(std::size_t n) {
  std::vector<int> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
  return p;
}

}  // namespace rxngraph

#endif  // RXNGRAPH_CHEM_HPP
