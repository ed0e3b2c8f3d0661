// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by tests. Everything here
// is deliberately brute-force and shares no code with the library paths it
// checks.

#ifndef RXNGRAPH_TESTS_ORACLES_HPP
#define RXNGRAPH_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "rxngraph/chem.hpp"
#include "rxngraph/rng.hpp"

namespace oracles {

using rxngraph::Atom;
using rxngraph::Bond;
using rxngraph::BondOrder;
using rxngraph::MolecularGraph;

inline std::string atom_signature(const Atom& a) {
  return a.element + "|" + std::to_string(a.formal_charge) + "|" +
         (a.aromatic ? "1" : "0") + "|" + std::to_string(a.implicit_h) + "|" +
         std::to_string(a.radical_electrons);
}

// Exact graph isomorphism by backtracking; intended for molecules <= 12 atoms.
inline bool molecules_isomorphic(const MolecularGraph& a, const MolecularGraph& b) {
  const int n = a.num_atoms();
  if (n != b.num_atoms() || a.num_bonds() != b.num_bonds()) return false;

  std::vector<std::string> sig_a(n), sig_b(n);
  for (int i = 0; i < n; ++i) {
    sig_a[i] = atom_signature(a.atoms[i]) + "|" + std::to_string(a.degree(i));
    sig_b[i] = atom_signature(b.atoms[i]) + "|" + std::to_string(b.degree(i));
  }
  {
    auto sa = sig_a, sb = sig_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }

  std::vector<int> map_ab(n, -1);
  std::vector<bool> used(n, false);

  auto consistent = [&](int ai, int bi) {
    if (sig_a[ai] != sig_b[bi]) return false;
    for (int aj = 0; aj < n; ++aj) {
      if (map_ab[aj] < 0 || aj == ai) continue;
      auto oa = a.bond_between(ai, aj);
      auto ob = b.bond_between(bi, map_ab[aj]);
      if (oa.has_value() != ob.has_value()) return false;
      if (oa && *oa != *ob) return false;
    }
    return true;
  };

  auto backtrack = [&](auto&& self, int ai) -> bool {
    if (ai == n) return true;
    for (int bi = 0; bi < n; ++bi) {
      if (used[bi] || !consistent(ai, bi)) continue;
      map_ab[ai] = bi;
      used[bi] = true;
      if (self(self, ai + 1)) return true;
      map_ab[ai] = -1;
      used[bi] = false;
    }
    return false;
  };
  return backtrack(backtrack, 0);
}

// Weisfeiler-Lehman style refinement hash: equal for isomorphic molecules.
// Used as a cheap isomorphism check for molecules too big to brute-force.
inline std::uint64_t molecule_invariant_hash(const MolecularGraph& m) {
  const int n = m.num_atoms();
  std::vector<std::uint64_t> color(n);
  for (int i = 0; i < n; ++i)
    color[i] = rxngraph::hash_bytes(atom_signature(m.atoms[i]));
  for (int round = 0; round < n; ++round) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::uint64_t> nb;
      for (const auto& [j, order] : m.neighbors(i))
        nb.push_back(rxngraph::hash_combine(static_cast<std::uint64_t>(order) + 1,
                                            color[j]));
      std::sort(nb.begin(), nb.end());
      std::uint64_t h = rxngraph::mix64(color[i]);
      for (std::uint64_t x : nb) h = rxngraph::hash_combine(h, x);
      next[i] = h;
    }
    color = next;
  }
  std::sort(color.begin(), color.end());
  std::uint64_t h = 0x5eedULL;
  for (std::uint64_t c : color) h = rxngraph::hash_combine(h, c);
  return h;
}

// ---------------------------------------------------------------------------
// Brute-force circular-environment enumeration: the reference for Morgan
// fingerprint identifier counts. An environment is the set of bonds within
// r hops of a root atom; environments that did not grow over the previous
// radius are dropped, and the rest are grouped by rooted-subgraph
// isomorphism (atom invariants include the full-molecule degree).

struct RootedEnvironment {
  int root;
  std::vector<int> bonds;  // sorted bond indices into the molecule
};

namespace detail {

inline std::vector<int> env_bonds(const MolecularGraph& m, int root, int r) {
  // BFS distances from root
  std::vector<int> dist(m.num_atoms(), -1);
  std::vector<int> q{root};
  dist[root] = 0;
  for (std::size_t h = 0; h < q.size(); ++h)
    for (const auto& [v, order] : m.neighbors(q[h])) {
      (void)order;
      if (dist[v] < 0) {
        dist[v] = dist[q[h]] + 1;
        q.push_back(v);
      }
    }
  std::vector<int> out;
  for (int b = 0; b < m.num_bonds(); ++b) {
    const int du = dist[m.bonds[b].u], dv = dist[m.bonds[b].v];
    int best = INT32_MAX;
    if (du >= 0) best = std::min(best, du);
    if (dv >= 0) best = std::min(best, dv);
    if (best <= r - 1) out.push_back(b);
  }
  return out;
}

// Rooted isomorphism between two bond-subgraph environments of (possibly)
// different molecules; roots must map to each other.
inline bool rooted_env_isomorphic(const MolecularGraph& ma, const RootedEnvironment& ea,
                                  const MolecularGraph& mb, const RootedEnvironment& eb) {
  if (ea.bonds.size() != eb.bonds.size()) return false;

  auto atoms_of = [](const MolecularGraph& m, const RootedEnvironment& e) {
    std::set<int> atoms{e.root};
    for (int b : e.bonds) {
      atoms.insert(m.bonds[b].u);
      atoms.insert(m.bonds[b].v);
    }
    return std::vector<int>(atoms.begin(), atoms.end());
  };
  const auto va = atoms_of(ma, ea), vb = atoms_of(mb, eb);
  if (va.size() != vb.size()) return false;

  auto invariant = [](const MolecularGraph& m, int i) {
    return atom_signature(m.atoms[i]) + "|" + std::to_string(m.degree(i));
  };
  auto bond_in = [](const MolecularGraph& m, const RootedEnvironment& e, int x,
                    int y) -> const Bond* {
    for (int b : e.bonds) {
      const Bond& bd = m.bonds[b];
      if ((bd.u == x && bd.v == y) || (bd.u == y && bd.v == x)) return &bd;
    }
    return nullptr;
  };

  const int n = static_cast<int>(va.size());
  std::vector<int> map_ab(n, -1);
  std::vector<bool> used(n, false);
  // force root -> root
  int ra = -1, rb = -1;
  for (int i = 0; i < n; ++i) {
    if (va[i] == ea.root) ra = i;
    if (vb[i] == eb.root) rb = i;
  }

  auto consistent = [&](int ia, int ib) {
    if (invariant(ma, va[ia]) != invariant(mb, vb[ib])) return false;
    if ((ia == ra) != (ib == rb)) return false;
    for (int j = 0; j < n; ++j) {
      if (map_ab[j] < 0 || j == ia) continue;
      const Bond* bond_a = bond_in(ma, ea, va[ia], va[j]);
      const Bond* bond_b = bond_in(mb, eb, vb[ib], vb[map_ab[j]]);
      if ((bond_a == nullptr) != (bond_b == nullptr)) return false;
      if (bond_a && bond_a->order != bond_b->order) return false;
    }
    return true;
  };
  auto backtrack = [&](auto&& self, int ia) -> bool {
    if (ia == n) return true;
    for (int ib = 0; ib < n; ++ib) {
      if (used[ib] || !consistent(ia, ib)) continue;
      map_ab[ia] = ib;
      used[ib] = true;
      if (self(self, ia + 1)) return true;
      map_ab[ia] = -1;
      used[ib] = false;
    }
    return false;
  };
  if (ra < 0 || rb < 0) return false;
  return backtrack(backtrack, 0);
}

}  // namespace detail

// Number of distinct rooted circular environments over radii 0..radius.
inline int morgan_environment_count(const MolecularGraph& m, int radius) {
  std::vector<RootedEnvironment> envs;
  for (int a = 0; a < m.num_atoms(); ++a) {
    std::vector<int> prev;  // radius-0 environment: no bonds
    envs.push_back({a, {}});
    for (int r = 1; r <= radius; ++r) {
      auto bonds = detail::env_bonds(m, a, r);
      if (bonds != prev) {  // grew: a new substructure
        envs.push_back({a, bonds});
        prev = std::move(bonds);
      }
    }
  }
  // group by rooted isomorphism
  std::vector<RootedEnvironment> classes;
  for (const auto& e : envs) {
    bool found = false;
    for (const auto& c : classes)
      if (detail::rooted_env_isomorphic(m, e, m, c)) {
        found = true;
        break;
      }
    if (!found) classes.push_back(e);
  }
  return static_cast<int>(classes.size());
}

// ---------------------------------------------------------------------------
// Dense-matrix reference GNN layers: no tensors, no sparsity, no shared code
// with the library. A_s[i][j] = 1 iff there is a directed edge j -> i.

using DenseMat = std::vector<std::vector<double>>;

inline DenseMat dense_zeros(int r, int c) {
  return DenseMat(r, std::vector<double>(c, 0.0));
}

inline DenseMat dense_matmul(const DenseMat& a, const DenseMat& b) {
  DenseMat out = dense_zeros(static_cast<int>(a.size()), static_cast<int>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

struct DenseRelGraph {
  int n = 0;
  std::vector<DenseMat> adj;  // one n x n matrix per relation

  template <typename Graph>
  static DenseRelGraph from(const Graph& g, int num_relations) {
    DenseRelGraph d;
    d.n = g.num_nodes();
    d.adj.assign(num_relations, dense_zeros(d.n, d.n));
    for (const auto& e : g.edges)
      d.adj[static_cast<int>(e.rel)][e.dst][e.src] = 1.0;
    return d;
  }
};

// H' = H W_o + sum_s D_s^{-1} A_s H W_s   (rows with no s-neighbors get 0)
inline DenseMat dense_rgcn(const DenseRelGraph& g, const DenseMat& h,
                           const DenseMat& w_self,
                           const std::vector<DenseMat>& w_rel) {
  DenseMat out = dense_matmul(h, w_self);
  for (std::size_t s = 0; s < w_rel.size(); ++s) {
    const DenseMat wh = dense_matmul(h, w_rel[s]);
    for (int i = 0; i < g.n; ++i) {
      double deg = 0;
      for (int j = 0; j < g.n; ++j) deg += g.adj[s][i][j];
      if (deg == 0) continue;
      for (std::size_t c = 0; c < wh[0].size(); ++c) {
        double acc = 0;
        for (int j = 0; j < g.n; ++j)
          if (g.adj[s][i][j] != 0.0) acc += wh[j][c];
        out[i][c] += acc / deg;
      }
    }
  }
  return out;
}

// Single-head relational attention; the self entry joins every present
// relation's softmax using the relation-averaged attention vector and the
// self weight, and its message is gated once by the mean of its weights.
inline DenseMat dense_rgat(const DenseRelGraph& g, const DenseMat& h,
                           const DenseMat& w_self,
                           const std::vector<DenseMat>& w_rel,
                           const std::vector<std::vector<double>>& attn,
                           double slope) {
  const int n = g.n;
  const std::size_t dim = w_self[0].size();
  auto lrelu = [slope](double x) { return x >= 0 ? x : slope * x; };

  const DenseMat wh_self = dense_matmul(h, w_self);
  std::vector<DenseMat> wh(w_rel.size());
  for (std::size_t s = 0; s < w_rel.size(); ++s) wh[s] = dense_matmul(h, w_rel[s]);

  std::vector<double> a_avg(2 * dim, 0.0);
  for (const auto& a : attn)
    for (std::size_t i = 0; i < 2 * dim; ++i) a_avg[i] += a[i] / attn.size();

  DenseMat out = dense_zeros(n, static_cast<int>(dim));
  for (int i = 0; i < n; ++i) {
    double self_logit = 0;
    for (std::size_t c = 0; c < dim; ++c)
      self_logit += a_avg[c] * wh_self[i][c] + a_avg[dim + c] * wh_self[i][c];
    self_logit = lrelu(self_logit);

    double gate_sum = 0;
    int present = 0;
    for (std::size_t s = 0; s < w_rel.size(); ++s) {
      std::vector<int> nbrs;
      for (int j = 0; j < n; ++j)
        if (g.adj[s][i][j] != 0.0) nbrs.push_back(j);
      if (nbrs.empty()) continue;
      ++present;
      std::vector<double> logits;
      for (int j : nbrs) {
        double e = 0;
        for (std::size_t c = 0; c < dim; ++c)
          e += attn[s][c] * wh[s][i][c] + attn[s][dim + c] * wh[s][j][c];
        logits.push_back(lrelu(e));
      }
      logits.push_back(self_logit);
      double mx = logits[0];
      for (double x : logits) mx = std::max(mx, x);
      double z = 0;
      for (double x : logits) z += std::exp(x - mx);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const double alpha = std::exp(logits[k] - mx) / z;
        for (std::size_t c = 0; c < dim; ++c) out[i][c] += alpha * wh[s][nbrs[k]][c];
      }
      gate_sum += std::exp(self_logit - mx) / z;
    }
    const double gate = present > 0 ? gate_sum / present : 1.0;
    for (std::size_t c = 0; c < dim; ++c) out[i][c] += gate * wh_self[i][c];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ranked-pairs reference: evaluate every permutation of k candidates against
// the sorted pair list. A permutation's agreement vector marks which sorted
// pairs it respects; greedy locking produces exactly the permutation with the
// lexicographically greatest agreement vector, with the lexicographically
// smallest permutation as the final tie-break.

template <typename RankMatrixT>
std::vector<int> ranked_pairs_bruteforce(const RankMatrixT& mat) {
  const int k = mat.k;
  struct PairEntry {
    double margin;
    int a, b;
  };
  std::vector<PairEntry> entries;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (a != b && mat.at(a, b) > 0) entries.push_back({mat.at(a, b), a, b});
  std::sort(entries.begin(), entries.end(), [](const PairEntry& x, const PairEntry& y) {
    if (x.margin != y.margin) return x.margin > y.margin;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;

  std::vector<int> best;
  std::vector<bool> best_agree;
  do {
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[perm[i]] = i;
    std::vector<bool> agree(entries.size());
    for (std::size_t e = 0; e < entries.size(); ++e)
      agree[e] = pos[entries[e].a] < pos[entries[e].b];
    if (best.empty() || agree > best_agree ||
        (agree == best_agree && perm < best)) {
      best = perm;
      best_agree = agree;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracles

#endif  // RXNGRAPH_TESTS_ORACLES_HPP
