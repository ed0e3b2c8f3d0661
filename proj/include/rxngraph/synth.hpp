// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Synthetic reaction generators: random structurally-valid reactions for
// property tests, plus the two bundled benchmark tasks (functional-group
// classification and utility-ranked candidate sets) that need no external
// data.

#ifndef RXNGRAPH_SYNTH_HPP
#define RXNGRAPH_SYNTH_HPP

#include <string>
#include <vector>

#include "rxngraph/chem.hpp"
#include "rxngraph/rng.hpp"
#include "rxngraph/smiles.hpp"

namespace rxngraph {

// Random connected molecule: a spanning tree plus an occasional extra ring
// edge; elements and bond orders drawn from small pools with valence kept
// legal by construction (single bonds everywhere except marked doubles).
inline MolecularGraph random_molecule(Rng& rng, int min_atoms = 1,
                                      int max_atoms = 20) {
  const int n = min_atoms + rng.index(max_atoms - min_atoms + 1);
  MolecularGraph m;
  static const char* kPool[] = {"C", "C", "C", "C", "N", "O", "S", "Cl"};
  for (int i = 0; i < n; ++i) {
    Atom a;
    a.element = kPool[rng.index(8)];
    m.atoms.push_back(a);
  }
  std::vector<int> used_valence(n, 0);
  auto max_valence = [&](int i) {
    const std::string& e = m.atoms[i].element;
    if (e == "C") return 4;
    if (e == "N") return 3;
    if (e == "O" || e == "S") return 2;
    return 1;
  };
  for (int i = 1; i < n; ++i) {
    // attach to a previous atom with spare valence; fall back to a carbon-ified i-1
    int tries = 0;
    int j = rng.index(i);
    while (used_valence[j] >= max_valence(j) && tries++ < 32) j = rng.index(i);
    if (used_valence[j] >= max_valence(j)) {
      m.atoms[j].element = "C";
      if (used_valence[j] >= 4) {  // give up on fancy elements, chain instead
        j = i - 1;
        m.atoms[j].element = "C";
      }
    }
    BondOrder order = BondOrder::Single;
    if (m.atoms[i].element == "C" && m.atoms[j].element == "C" &&
        used_valence[j] <= 2 && rng.uniform() < 0.15)
      order = BondOrder::Double;
    m.bonds.push_back({std::min(i, j), std::max(i, j), order});
    const int units = bond_order_units(order);
    used_valence[i] += units;
    used_valence[j] += units;
  }
  // occasional ring edge between carbons with spare valence
  if (n >= 3 && rng.uniform() < 0.3) {
    const int a = rng.index(n), b = rng.index(n);
    if (a != b && !m.bond_between(a, b) && m.atoms[a].element == "C" &&
        m.atoms[b].element == "C" && used_valence[a] < 4 && used_valence[b] < 4)
      m.bonds.push_back({std::min(a, b), std::max(a, b), BondOrder::Single});
  }
  // fill hydrogen counts the way the parser would
  for (int i = 0; i < n; ++i) {
    int sum = 0;
    for (const auto& [nbr, order] : m.neighbors(i)) {
      (void)nbr;
      sum += bond_order_units(order);
    }
    m.atoms[i].implicit_h = std::max(0, max_valence(i) - sum);
  }
  return m;
}

inline Reaction random_reaction(Rng& rng, int max_molecules_per_side = 5,
                                int min_atoms = 1, int max_atoms = 20) {
  Reaction rxn;
  const int n = 1 + rng.index(max_molecules_per_side);
  const int m = 1 + rng.index(max_molecules_per_side);
  for (int i = 0; i < n; ++i)
    rxn.reactants.push_back(random_molecule(rng, min_atoms, max_atoms));
  for (int i = 0; i < m; ++i)
    rxn.products.push_back(random_molecule(rng, min_atoms, max_atoms));
  rxn.reactant_is_agent.assign(n, false);
  rxn.source_text = "<random>";
  return rxn;
}

inline std::vector<std::vector<int>> random_atom_permutations(const Reaction& rxn,
                                                              Rng& rng) {
  std::vector<std::vector<int>> perms;
  auto add = [&](const MolecularGraph& m) {
    auto p = identity_permutation(m.atoms.size());
    rng.shuffle(p);
    perms.push_back(std::move(p));
  };
  for (const auto& m : rxn.reactants) add(m);
  for (const auto& m : rxn.products) add(m);
  return perms;
}

inline std::vector<int> random_permutation(std::size_t n, Rng& rng) {
  auto p = identity_permutation(n);
  rng.shuffle(p);
  return p;
}

// ---------------------------------------------------------------------------
// Task (a): functional-group 3-class classification.
//
// Each reaction is a random hydrocarbon coupling A.B.marker >> AB.marker.
// The class is decided by the functional group of the marker molecule, which
// appears unchanged on both sides: 0 = carboxylic acid, 1 = amine,
// 2 = alcohol. Fingerprint differences cancel spectators, so this separates
// representations that see whole-reaction structure from ones that only see
// the net change.

namespace detail {

inline std::string random_alkane(Rng& rng, int min_c, int max_c) {
  const int n = min_c + rng.index(max_c - min_c + 1);
  std::string s;
  int open = 0;
  for (int i = 0; i < n; ++i) {
    s += 'C';
    if (i + 2 < n && open == 0 && rng.uniform() < 0.2) {
      s += '(';
      ++open;
    } else if (open > 0 && rng.uniform() < 0.5) {
      s += 'C';
      s += ')';
      --open;
      ++i;
    }
  }
  while (open-- > 0) s += "C)";
  return s;
}

inline const std::vector<std::string>& marker_pool(int cls) {
  static const std::vector<std::string> kAcids = {
      "CC(=O)O", "CCC(=O)O", "CC(C)C(=O)O", "CCCC(=O)O"};
  static const std::vector<std::string> kAmines = {"CN", "CCN", "CC(C)N",
                                                   "CCCN"};
  static const std::vector<std::string> kAlcohols = {"CO", "CCO", "CC(C)O",
                                                     "CCCO"};
  switch (cls) {
    case 0: return kAcids;
    case 1: return kAmines;
    default: return kAlcohols;
  }
}

}  // namespace detail

struct LabeledSmirks {
  std::string smirks;
  int label;
};

inline std::vector<LabeledSmirks> synth_functional_group_task(int count,
                                                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledSmirks> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int cls = i % 3;
    const auto& pool = detail::marker_pool(cls);
    const std::string marker = pool[rng.index(pool.size())];
    const std::string a = detail::random_alkane(rng, 2, 6);
    const std::string b = detail::random_alkane(rng, 2, 6);
    // coupling product: concatenation joins a's last chain atom to b's first
    const std::string smirks = a + "." + b + "." + marker + ">>" + a + b + "." + marker;
    out.push_back({smirks, cls});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Task (b): plausibility-ranked candidate sets.
//
// All candidates of a query share the reactant side; products are chains of
// 12 heavy atoms where `a` positions are chain oxygens and `b` carbon-carbon
// double bonds are inserted. The ground-truth utility is 5a - b, unique for
// every (a, b) in 0..3 x 0..4, so each set of 20 candidates has a strict
// total order and a unique best element (a=3, b=0).

struct CandidateSet {
  std::string query_id;
  std::vector<std::string> smirks;
  std::vector<double> utility;  // ground truth, higher = more plausible
  int true_index = -1;          // argmax of utility
};

namespace detail {

inline std::string ranking_product(int n_oxygen, int n_double, Rng& rng) {
  // 14-position chain. Oxygens take a random subset of slots {1,3,5},
  // double bonds a random subset of pair slots {(6,7),(8,9),(10,11),(12,13)}.
  // Slots are mutually non-adjacent, so every (a, b) in 0..3 x 0..4 yields a
  // valence-legal chain whose O and C=C counts equal the requested ones.
  const int len = 14;
  std::vector<int> kind(len, 0);  // 0 = C, 1 = O
  std::vector<int> o_slots = {1, 3, 5};
  std::vector<int> d_slots = {6, 8, 10, 12};
  rng.shuffle(o_slots);
  rng.shuffle(d_slots);
  for (int i = 0; i < n_oxygen; ++i) kind[o_slots[i]] = 1;
  std::vector<int> dbl(len - 1, 0);
  for (int i = 0; i < n_double; ++i) dbl[d_slots[i]] = 1;
  std::string s;
  for (int i = 0; i < len; ++i) {
    s += kind[i] ? 'O' : 'C';
    if (i < len - 1 && dbl[i]) s += '=';
  }
  return s;
}

}  // namespace detail

inline std::vector<CandidateSet> synth_ranking_task(int n_sets,
                                                    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CandidateSet> sets;
  sets.reserve(n_sets);
  for (int q = 0; q < n_sets; ++q) {
    CandidateSet cs;
    cs.query_id = "q" + std::to_string(q);
    const std::string r1 = detail::random_alkane(rng, 3, 6);
    const std::string r2 = detail::random_alkane(rng, 3, 6);
    std::vector<std::pair<int, int>> combos;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 4; ++b) combos.emplace_back(a, b);
    rng.shuffle(combos);
    double best = -1e9;
    for (std::size_t i = 0; i < combos.size(); ++i) {
      const auto [a, b] = combos[i];
      cs.smirks.push_back(r1 + "." + r2 + ">>" +
                          detail::ranking_product(a, b, rng));
      const double u = 5.0 * a - 1.0 * b;
      cs.utility.push_back(u);
      if (u > best) {
        best = u;
        cs.true_index = static_cast<int>(i);
      }
    }
    sets.push_back(std::move(cs));
  }
  return sets;
}

}  // namespace rxngraph

#endif  // RXNGRAPH_SYNTH_HPP
