// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Pairwise plausibility ranking: a Siamese embedding model scored through a
// bias-free linear map and tanh (odd and sign-preserving, so score(a,b) =
// -score(b,a) by construction), aggregated into a total order with Tideman
// ranked pairs.

#ifndef RXNGRAPH_RANKER_HPP
#define RXNGRAPH_RANKER_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "rxngraph/errors.hpp"
#include "rxngraph/gnn.hpp"

namespace rxngraph {

struct RankMatrix {
  int k = 0;
  std::vector<double> m;  // row-major k x k, diagonal zero

  explicit RankMatrix(int k_) : k(k_), m(static_cast<std::size_t>(k_) * k_, 0.0) {}
  double& at(int a, int b) { return m[static_cast<std::size_t>(a) * k + b]; }
  double at(int a, int b) const { return m[static_cast<std::size_t>(a) * k + b]; }

  double max_antisymmetry_violation() const {
    double worst = 0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        worst = std::max(worst, std::abs(at(a, b) + at(b, a)));
    return worst;
  }
};

// score = tanh(w . (X_a - X_b)), positive when a ranks above b.
inline Tensor pairwise_score_t(const GnnModel& model, const Tensor& latent_a,
                               const Tensor& latent_b) {
  if (!model.ranker_w.defined())
    throw InputError("pairwise_score: model has no ranking head (task must be embed)");
  return tanh(matmul(sub(latent_a, latent_b), model.ranker_w));
}

inline double pairwise_score(const GnnModel& model, const Reaction& a,
                             const Reaction& b) {
  Tensor xa = gnn_embed(model, build_hypergraph(a));
  Tensor xb = gnn_embed(model, build_hypergraph(b));
  return pairwise_score_t(model, xa, xb).item();
}

// Full score matrix for one candidate set; each candidate is embedded once.
inline RankMatrix rank_matrix(const GnnModel& model,
                              const std::vector<Reaction>& candidates) {
  const int k = static_cast<int>(candidates.size());
  std::vector<Tensor> latents;
  latents.reserve(k);
  for (const auto& rxn : candidates)
    latents.push_back(gnn_embed(model, build_hypergraph(rxn)));
  RankMatrix mat(k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const double s = pairwise_score_t(model, latents[a], latents[b]).item();
      mat.at(a, b) = s;
      mat.at(b, a) = -s;
    }
  return mat;
}

// Tideman ranked pairs: lock positive-margin pairs in decreasing order of
// margin (ties broken by candidate indices), skipping any pair that would
// close a cycle, then read off the topological order (smallest index first
// among available candidates).
inline std::vector<int> ranked_pairs(const RankMatrix& mat) {
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

  std::vector<std::vector<bool>> locked(k, std::vector<bool>(k, false));
  auto reaches = [&](int from, int to) {
    std::vector<int> stack{from};
    std::vector<bool> seen(k, false);
    seen[from] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (int v = 0; v < k; ++v)
        if (locked[u][v] && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    return false;
  };
  for (const auto& e : entries)
    if (!reaches(e.b, e.a)) locked[e.a][e.b] = true;  // locking a>b must not close a cycle

  // Kahn topological order, smallest index first.
  std::vector<int> indeg(k, 0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (locked[a][b]) ++indeg[b];
  std::vector<int> order;
  std::vector<bool> done(k, false);
  for (int step = 0; step < k; ++step) {
    int pick = -1;
    for (int v = 0; v < k; ++v)
      if (!done[v] && indeg[v] == 0) {
        pick = v;
        break;
      }
    if (pick < 0) throw NumericError("ranked_pairs: locked graph has a cycle");
    done[pick] = true;
    order.push_back(pick);
    for (int v = 0; v < k; ++v)
      if (locked[pick][v]) --indeg[v];
  }
  return order;
}

// Fraction of queries whose true candidate lands in the top k, for each k.
inline std::map<int, double> top_k_accuracy(
    const std::vector<std::vector<int>>& orders, const std::vector<int>& truth,
    const std::vector<int>& ks = {1, 2, 5, 10}) {
  if (orders.size() != truth.size())
    throw InputError("top_k_accuracy: order/truth count mismatch");
  if (orders.empty()) throw InputError("top_k_accuracy: no queries");
  std::map<int, double> acc;
  for (int k : ks) acc[k] = 0.0;
  for (std::size_t q = 0; q < orders.size(); ++q) {
    const auto& order = orders[q];
    const auto it = std::find(order.begin(), order.end(), truth[q]);
    if (it == order.end())
      throw InputError("top_k_accuracy: true candidate missing from ranking");
    const int position = static_cast<int>(it - order.begin());  // 0-based
    for (int k : ks)
      if (position < k) acc[k] += 1.0;
  }
  for (int k : ks) acc[k] /= static_cast<double>(orders.size());
  return acc;
}

}  // namespace rxngraph

#endif  // RXNGRAPH_RANKER_HPP
