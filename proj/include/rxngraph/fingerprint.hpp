// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Morgan-style circular count fingerprints and the fingerprint-difference
// reaction vector w1 (sum FP(P) - sum FP(R)) + w2 sum FP(A). Hashing is a
// fixed-seed 64-bit mix, identical on every platform.

#ifndef RXNGRAPH_FINGERPRINT_HPP
#define RXNGRAPH_FINGERPRINT_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "rxngraph/chem.hpp"
#include "rxngraph/errors.hpp"
#include "rxngraph/gnn.hpp"
#include "rxngraph/optim.hpp"
#include "rxngraph/rng.hpp"
#include "rxngraph/tensor.hpp"

namespace rxngraph {

struct FingerprintConfig {
  int bits = 2048;
  int radius = 2;  // ECFP4-equivalent diameter
};

struct Fingerprint {
  std::vector<int> counts;  // length = bits

  int total() const {
    int t = 0;
    for (int c : counts) t += c;
    return t;
  }
};

namespace detail {

inline std::uint64_t atom_initial_id(const MolecularGraph& m, int i) {
  const Atom& a = m.atoms[i];
  std::uint64_t h = 0x9d0f5b5c0a1ed0cbULL;  // fixed fingerprint seed
  h = hash_combine(h, hash_bytes(a.element));
  h = hash_combine(h, static_cast<std::uint64_t>(a.formal_charge + 16));
  h = hash_combine(h, a.aromatic ? 1 : 0);
  h = hash_combine(h, static_cast<std::uint64_t>(a.implicit_h));
  h = hash_combine(h, static_cast<std::uint64_t>(a.radical_electrons));
  h = hash_combine(h, static_cast<std::uint64_t>(m.degree(i)));
  return h;
}

// Bond indices within `r` bonds of atom `a` (an endpoint within r-1 hops).
inline std::set<int> environment_bonds(const MolecularGraph& m,
                                       const std::vector<std::vector<int>>& dist,
                                       int a, int r) {
  constexpr int kFar = std::numeric_limits<int>::max();
  std::set<int> env;
  for (int b = 0; b < m.num_bonds(); ++b) {
    const int du = dist[a][m.bonds[b].u], dv = dist[a][m.bonds[b].v];
    const int d = std::min(du < 0 ? kFar : du, dv < 0 ? kFar : dv);
    if (d <= r - 1) env.insert(b);
  }
  return env;
}

inline std::vector<std::vector<int>> all_pairs_bond_distance(const MolecularGraph& m) {
  const int n = m.num_atoms();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::vector<int> q{s};
    dist[s][s] = 0;
    for (std::size_t head = 0; head < q.size(); ++head) {
      const int u = q[head];
      for (const auto& [v, order] : m.neighbors(u)) {
        (void)order;
        if (dist[s][v] < 0) {
          dist[s][v] = dist[s][u] + 1;
          q.push_back(v);
        }
      }
    }
  }
  return dist;
}

}  // namespace detail

// All identifiers the fingerprint would count: one per (atom, radius) whose
// environment grew at that radius, deduplicated by value across the molecule.
inline std::vector<std::uint64_t> morgan_identifiers(const MolecularGraph& mol,
                                                     int radius) {
  const int n = mol.num_atoms();
  const auto dist = detail::all_pairs_bond_distance(mol);

  std::vector<std::uint64_t> id(n);
  for (int i = 0; i < n; ++i) id[i] = detail::atom_initial_id(mol, i);

  std::set<std::uint64_t> emitted(id.begin(), id.end());
  std::vector<std::set<int>> prev_env(n);  // radius-0 environments are empty

  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      auto nbrs = mol.neighbors(i);
      if (nbrs.empty()) {
        next[i] = id[i];  // nothing new to hash
        continue;
      }
      std::vector<std::pair<int, std::uint64_t>> parts;
      for (const auto& [j, order] : nbrs)
        parts.emplace_back(static_cast<int>(order), id[j]);
      std::sort(parts.begin(), parts.end());
      std::uint64_t h = hash_combine(0xec4f00d5eedULL, id[i]);
      for (const auto& [order, nid] : parts) {
        h = hash_combine(h, static_cast<std::uint64_t>(order) + 1);
        h = hash_combine(h, nid);
      }
      next[i] = h;
    }
    for (int i = 0; i < n; ++i) {
      auto env = detail::environment_bonds(mol, dist, i, r);
      if (env != prev_env[i]) emitted.insert(next[i]);  // env grew: new substructure
      prev_env[i] = std::move(env);
    }
    id = std::move(next);
  }
  return {emitted.begin(), emitted.end()};
}

inline Fingerprint morgan_fingerprint(const MolecularGraph& mol, int radius = 2,
                                      int bits = 2048) {
  if (bits <= 0) throw InputError("morgan_fingerprint: bits must be positive");
  Fingerprint fp;
  fp.counts.assign(bits, 0);
  for (std::uint64_t ident : morgan_identifiers(mol, radius))
    ++fp.counts[ident % static_cast<std::uint64_t>(bits)];
  return fp;
}

// Eq-style reaction vector. Agents default to the reactant-side molecules
// flagged at parse time; a caller-supplied mask overrides that.
inline std::vector<double> reaction_fp(const Reaction& rxn, double w1, double w2,
                                       const std::vector<bool>* agent_mask = nullptr,
                                       const FingerprintConfig& cfg = {}) {
  const std::vector<bool>& agents =
      agent_mask ? *agent_mask : rxn.reactant_is_agent;
  if (!agents.empty() && agents.size() != rxn.reactants.size())
    throw InputError("reaction_fp: agent mask length mismatch");

  // Integer count sums per role first (exact and order-independent), then
  // one weighted combination; permuting molecules can never change the result.
  std::vector<long> reactant_sum(cfg.bits, 0), product_sum(cfg.bits, 0),
      agent_sum(cfg.bits, 0);
  auto accumulate = [&](const MolecularGraph& m, std::vector<long>& sum) {
    const Fingerprint fp = morgan_fingerprint(m, cfg.radius, cfg.bits);
    for (int i = 0; i < cfg.bits; ++i) sum[i] += fp.counts[i];
  };
  for (std::size_t i = 0; i < rxn.reactants.size(); ++i) {
    const bool is_agent = !agents.empty() && agents[i];
    accumulate(rxn.reactants[i], is_agent ? agent_sum : reactant_sum);
  }
  for (const auto& m : rxn.products) accumulate(m, product_sum);
  std::vector<double> out(cfg.bits, 0.0);
  for (int i = 0; i < cfg.bits; ++i)
    out[i] = w1 * static_cast<double>(product_sum[i] - reactant_sum[i]) +
             w2 * static_cast<double>(agent_sum[i]);
  return out;
}

// Separate role sums, for the trainable-weight baseline head.
struct ReactionFpParts {
  std::vector<double> diff;    // sum FP(P) - sum FP(R), unweighted
  std::vector<double> agents;  // sum FP(A), unweighted
};

inline ReactionFpParts reaction_fp_parts(const Reaction& rxn,
                                         const FingerprintConfig& cfg = {}) {
  ReactionFpParts parts;
  parts.diff.assign(cfg.bits, 0.0);
  parts.agents.assign(cfg.bits, 0.0);
  for (std::size_t i = 0; i < rxn.reactants.size(); ++i) {
    const Fingerprint fp = morgan_fingerprint(rxn.reactants[i], cfg.radius, cfg.bits);
    const bool is_agent =
        !rxn.reactant_is_agent.empty() && rxn.reactant_is_agent[i];
    for (int b = 0; b < cfg.bits; ++b) {
      if (is_agent) parts.agents[b] += fp.counts[b];
      else parts.diff[b] -= fp.counts[b];
    }
  }
  for (const auto& m : rxn.products) {
    const Fingerprint fp = morgan_fingerprint(m, cfg.radius, cfg.bits);
    for (int b = 0; b < cfg.bits; ++b) parts.diff[b] += fp.counts[b];
  }
  return parts;
}

// Feed-forward classifier on the reaction fingerprint, with trainable w1/w2.
struct FpBaselineModel {
  FingerprintConfig fp_cfg;
  std::vector<int> head_dims;
  int classes = 2;
  ParamStore params;
  Tensor w1, w2;
  std::vector<std::pair<Tensor, Tensor>> head;
};

inline FpBaselineModel init_fp_baseline(int classes, std::vector<int> head_dims,
                                        Rng& rng, FingerprintConfig fp_cfg = {}) {
  FpBaselineModel m;
  m.fp_cfg = fp_cfg;
  m.head_dims = std::move(head_dims);
  m.classes = classes;
  m.w1 = m.params.add("fp.w1", Tensor::param(Mat(1, 1, 1.0)));
  m.w2 = m.params.add("fp.w2", Tensor::param(Mat(1, 1, 1.0)));
  int in = fp_cfg.bits;
  for (std::size_t i = 0; i < m.head_dims.size(); ++i) {
    const std::string prefix = "head" + std::to_string(i) + ".";
    m.head.emplace_back(m.params.add(prefix + "W", glorot_param(in, m.head_dims[i], rng)),
                        m.params.add(prefix + "b", zeros_param(1, m.head_dims[i])));
    in = m.head_dims[i];
  }
  m.head.emplace_back(m.params.add("out.W", glorot_param(in, classes, rng)),
                      m.params.add("out.b", zeros_param(1, classes)));
  return m;
}

inline Tensor fp_baseline_forward(const FpBaselineModel& model,
                                  const ReactionFpParts& parts) {
  Mat diff(1, model.fp_cfg.bits), ag(1, model.fp_cfg.bits);
  diff.v = parts.diff;
  ag.v = parts.agents;
  Tensor x = add(scale_by(Tensor::constant(std::move(diff)), model.w1),
                 scale_by(Tensor::constant(std::move(ag)), model.w2));
  return mlp_forward(model.head, x);
}

}  // namespace rxngraph

#endif  // RXNGRAPH_FINGERPRINT_HPP
