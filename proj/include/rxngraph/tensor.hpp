// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal reverse-mode autodiff over dense row-major double matrices.
// A Tensor is a shared handle to a graph node; ops build the graph eagerly
// and backward() walks it in reverse topological order. One computation
// graph is single-threaded; independent graphs may live on separate threads.

#ifndef RXNGRAPH_TENSOR_HPP
#define RXNGRAPH_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rxngraph/errors.hpp"

namespace rxngraph {

struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), v(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  double* row(std::size_t r) { return v.data() + r * cols; }
  const double* row(std::size_t r) const { return v.data() + r * cols; }
  std::size_t size() const { return v.size(); }
};

namespace detail {

struct TensorNode {
  Mat val;
  Mat grad;  // allocated lazily; persistent on leaves, scratch elsewhere
  bool requires_grad = false;
  bool is_leaf = true;
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backprop;  // pushes grad to parents

  void ensure_grad() {
    if (grad.rows != val.rows || grad.cols != val.cols) grad = Mat(val.rows, val.cols);
  }
};

inline void check_finite(const Mat& m, const char* op) {
  for (double x : m.v)
    if (!std::isfinite(x))
      throw NumericError(std::string(op) + " produced a non-finite value");
}

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<detail::TensorNode> n) : n_(std::move(n)) {}

  static Tensor constant(Mat m) {
    auto n = std::make_shared<detail::TensorNode>();
    detail::check_finite(m, "constant");
    n->val = std::move(m);
    return Tensor(std::move(n));
  }

  static Tensor param(Mat m) {
    auto n = std::make_shared<detail::TensorNode>();
    detail::check_finite(m, "param");
    n->val = std::move(m);
    n->requires_grad = true;
    n->ensure_grad();
    return Tensor(std::move(n));
  }

  static Tensor scalar(double x) { return constant(Mat(1, 1, x)); }

  bool defined() const { return n_ != nullptr; }
  std::size_t rows() const { return n_->val.rows; }
  std::size_t cols() const { return n_->val.cols; }
  const Mat& val() const { return n_->val; }
  Mat& mutable_val() { return n_->val; }
  const Mat& grad() const { return n_->grad; }
  bool requires_grad() const { return n_ && n_->requires_grad; }
  bool is_leaf() const { return n_->is_leaf; }
  double item() const {
    if (rows() != 1 || cols() != 1) throw NumericError("item() on non-scalar");
    return n_->val.v[0];
  }

  void zero_grad() {
    n_->ensure_grad();
    std::fill(n_->grad.v.begin(), n_->grad.v.end(), 0.0);
  }

  // Reverse pass from a scalar. Leaf gradients accumulate across calls;
  // interior gradients are scratch. Traversal order is fixed by graph
  // construction order, so accumulation is deterministic.
  void backward(double seed = 1.0) const {
    if (rows() != 1 || cols() != 1)
      throw NumericError("backward requires a scalar loss");
    std::vector<detail::TensorNode*> order;
    std::unordered_set<detail::TensorNode*> seen;
    std::vector<std::pair<detail::TensorNode*, std::size_t>> stack;
    stack.emplace_back(n_.get(), 0);
    seen.insert(n_.get());
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < node->parents.size()) {
        detail::TensorNode* p = node->parents[next++].get();
        if (p->requires_grad && !seen.count(p)) {
          seen.insert(p);
          stack.emplace_back(p, 0);
        }
      } else {
        order.push_back(node);
        stack.pop_back();
      }
    }
    // `order` is post-order: parents before the loss node. Zero interior
    // grads, seed the loss, then run backprop from the loss backwards.
    for (detail::TensorNode* t : order) {
      t->ensure_grad();
      if (!t->is_leaf) std::fill(t->grad.v.begin(), t->grad.v.end(), 0.0);
    }
    n_->grad.v[0] += seed;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      if ((*it)->backprop) (*it)->backprop(**it);
  }

  detail::TensorNode* node() const { return n_.get(); }
  const std::shared_ptr<detail::TensorNode>& handle() const { return n_; }

 private:
  std::shared_ptr<detail::TensorNode> n_;
};

namespace detail {

inline Tensor make_op(Mat out, std::vector<Tensor> parents,
                      std::function<void(TensorNode&)> backprop,
                      const char* opname) {
  check_finite(out, opname);
  auto n = std::make_shared<TensorNode>();
  n->val = std::move(out);
  n->is_leaf = false;
  for (const Tensor& p : parents) {
    n->requires_grad = n->requires_grad || p.requires_grad();
    n->parents.push_back(p.handle());
  }
  if (n->requires_grad) n->backprop = std::move(backprop);
  return Tensor(std::move(n));
}

inline void require(bool cond, const char* what) {
  if (!cond) throw NumericError(what);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Forward ops

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  detail::require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  Mat out(n, m);
  const Mat &av = a.val(), &bv = b.val();
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = out.row(i);
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double x = av.at(i, kk);
      if (x == 0.0) continue;
      const double* brow = bv.row(kk);
      for (std::size_t j = 0; j < m; ++j) orow[j] += x * brow[j];
    }
  }
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_op(
      std::move(out), {a, b},
      [an, bn, n, k, m](detail::TensorNode& node) {
        const Mat& g = node.grad;
        if (an->requires_grad) {
          an->ensure_grad();
          // dA += g . B^T
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t kk = 0; kk < k; ++kk) {
              double acc = 0;
              const double* grow = g.row(i);
              const double* brow = bn->val.row(kk);
              for (std::size_t j = 0; j < m; ++j) acc += grow[j] * brow[j];
              an->grad.at(i, kk) += acc;
            }
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          // dB += A^T . g
          for (std::size_t kk = 0; kk < k; ++kk)
            for (std::size_t i = 0; i < n; ++i) {
              const double x = an->val.at(i, kk);
              if (x == 0.0) continue;
              const double* grow = g.row(i);
              double* brow = bn->grad.row(kk);
              for (std::size_t j = 0; j < m; ++j) brow[j] += x * grow[j];
            }
        }
      },
      "matmul");
}

namespace detail {

template <typename Fwd, typename Bwd>
Tensor elementwise_binary(const Tensor& a, const Tensor& b, Fwd fwd, Bwd bwd,
                          const char* name) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "elementwise: shape mismatch");
  Mat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = fwd(a.val().v[i], b.val().v[i]);
  auto* an = a.node();
  auto* bn = b.node();
  return make_op(
      std::move(out), {a, b},
      [an, bn, bwd](TensorNode& node) {
        const bool da_on = an->requires_grad, db_on = bn->requires_grad;
        if (da_on) an->ensure_grad();
        if (db_on) bn->ensure_grad();
        for (std::size_t i = 0; i < node.grad.size(); ++i) {
          const auto [da, db] = bwd(an->val.v[i], bn->val.v[i]);
          if (da_on) an->grad.v[i] += node.grad.v[i] * da;
          if (db_on) bn->grad.v[i] += node.grad.v[i] * db;
        }
      },
      name);
}

template <typename Fwd, typename BwdFromOut>
Tensor elementwise_unary(const Tensor& a, Fwd fwd, BwdFromOut bwd, const char* name) {
  Mat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = fwd(a.val().v[i]);
  auto* an = a.node();
  return make_op(
      std::move(out), {a},
      [an, bwd](TensorNode& node) {
        an->ensure_grad();
        for (std::size_t i = 0; i < node.grad.size(); ++i)
          an->grad.v[i] += node.grad.v[i] * bwd(an->val.v[i], node.val.v[i]);
      },
      name);
}

}  // namespace detail

inline Tensor add(const Tensor& a, const Tensor& b) {
  return detail::elementwise_binary(
      a, b, [](double x, double y) { return x + y; },
      [](double, double) { return std::pair<double, double>{1.0, 1.0}; }, "add");
}

inline Tensor sub(const Tensor& a, const Tensor& b) {
  return detail::elementwise_binary(
      a, b, [](double x, double y) { return x - y; },
      [](double, double) { return std::pair<double, double>{1.0, -1.0}; }, "sub");
}

inline Tensor mul(const Tensor& a, const Tensor& b) {
  return detail::elementwise_binary(
      a, b, [](double x, double y) { return x * y; },
      [](double x, double y) { return std::pair<double, double>{y, x}; }, "mul");
}

inline Tensor scale(const Tensor& a, double c) {
  return detail::elementwise_unary(
      a, [c](double x) { return c * x; },
      [c](double, double) { return c; }, "scale");
}

inline Tensor relu(const Tensor& a) {
  return detail::elementwise_unary(
      a, [](double x) { return x > 0 ? x : 0.0; },
      [](double x, double) { return x > 0 ? 1.0 : 0.0; }, "relu");
}

inline Tensor leaky_relu(const Tensor& a, double slope) {
  return detail::elementwise_unary(
      a, [slope](double x) { return x >= 0 ? x : slope * x; },
      [slope](double x, double) { return x >= 0 ? 1.0 : slope; }, "leaky_relu");
}

inline Tensor tanh(const Tensor& a) {
  return detail::elementwise_unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; }, "tanh");
}

inline Tensor concat_rows(const Tensor& a, const Tensor& b) {
  detail::require(a.cols() == b.cols(), "concat_rows: column mismatch");
  Mat out(a.rows() + b.rows(), a.cols());
  std::copy(a.val().v.begin(), a.val().v.end(), out.v.begin());
  std::copy(b.val().v.begin(), b.val().v.end(), out.v.begin() + a.val().size());
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_op(
      std::move(out), {a, b},
      [an, bn](detail::TensorNode& node) {
        const std::size_t na = an->val.size();
        if (an->requires_grad) {
          an->ensure_grad();
          for (std::size_t i = 0; i < na; ++i) an->grad.v[i] += node.grad.v[i];
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          for (std::size_t i = 0; i < bn->val.size(); ++i)
            bn->grad.v[i] += node.grad.v[na + i];
        }
      },
      "concat_rows");
}

inline Tensor concat_cols(const Tensor& a, const Tensor& b) {
  detail::require(a.rows() == b.rows(), "concat_cols: row mismatch");
  const std::size_t n = a.rows(), ca = a.cols(), cb = b.cols();
  Mat out(n, ca + cb);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(a.val().row(i), a.val().row(i) + ca, out.row(i));
    std::copy(b.val().row(i), b.val().row(i) + cb, out.row(i) + ca);
  }
  auto* an = a.node();
  auto* bn = b.node();
  return detail::make_op(
      std::move(out), {a, b},
      [an, bn, n, ca, cb](detail::TensorNode& node) {
        for (std::size_t i = 0; i < n; ++i) {
          if (an->requires_grad) {
            an->ensure_grad();
            for (std::size_t c = 0; c < ca; ++c)
              an->grad.at(i, c) += node.grad.at(i, c);
          }
          if (bn->requires_grad) {
            bn->ensure_grad();
            for (std::size_t c = 0; c < cb; ++c)
              bn->grad.at(i, c) += node.grad.at(i, ca + c);
          }
        }
      },
      "concat_cols");
}

inline Tensor gather_rows(const Tensor& a, std::vector<int> idx) {
  for (int i : idx)
    detail::require(i >= 0 && static_cast<std::size_t>(i) < a.rows(),
                    "gather_rows: index out of range");
  Mat out(idx.size(), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy(a.val().row(idx[i]), a.val().row(idx[i]) + a.cols(), out.row(i));
  auto* an = a.node();
  return detail::make_op(
      std::move(out), {a},
      [an, idx = std::move(idx)](detail::TensorNode& node) {
        an->ensure_grad();
        for (std::size_t i = 0; i < idx.size(); ++i) {
          const double* g = node.grad.row(i);
          double* dst = an->grad.row(idx[i]);
          for (std::size_t c = 0; c < node.grad.cols; ++c) dst[c] += g[c];
        }
      },
      "gather_rows");
}

// Submatrix copy of rows [r0, r1) x cols [c0, c1).
inline Tensor slice(const Tensor& a, std::size_t r0, std::size_t r1,
                    std::size_t c0, std::size_t c1) {
  detail::require(r0 <= r1 && r1 <= a.rows() && c0 <= c1 && c1 <= a.cols(),
                  "slice: range out of bounds");
  Mat out(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    std::copy(a.val().row(i) + c0, a.val().row(i) + c1, out.row(i - r0));
  auto* an = a.node();
  return detail::make_op(
      std::move(out), {a},
      [an, r0, c0](detail::TensorNode& node) {
        an->ensure_grad();
        for (std::size_t i = 0; i < node.grad.rows; ++i) {
          const double* g = node.grad.row(i);
          double* dst = an->grad.row(r0 + i) + c0;
          for (std::size_t c = 0; c < node.grad.cols; ++c) dst[c] += g[c];
        }
      },
      "slice");
}

inline Tensor slice_cols(const Tensor& a, std::size_t c0, std::size_t len) {
  return slice(a, 0, a.rows(), c0, c0 + len);
}

namespace detail {

inline Tensor segment_reduce(const Tensor& a, std::vector<int> seg, int n_out,
                             bool mean) {
  require(seg.size() == a.rows(), "segment reduce: index list length mismatch");
  for (int s : seg) require(s >= 0 && s < n_out, "segment reduce: segment out of range");
  std::vector<double> count(n_out, 0.0);
  for (int s : seg) count[s] += 1.0;
  Mat out(n_out, a.cols());
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const double* src = a.val().row(i);
    double* dst = out.row(seg[i]);
    for (std::size_t c = 0; c < a.cols(); ++c) dst[c] += src[c];
  }
  if (mean)
    for (int s = 0; s < n_out; ++s) {
      if (count[s] == 0) continue;
      double* r = out.row(s);
      for (std::size_t c = 0; c < a.cols(); ++c) r[c] /= count[s];
    }
  auto* an = a.node();
  return make_op(
      std::move(out), {a},
      [an, seg = std::move(seg), count = std::move(count), mean](TensorNode& node) {
        an->ensure_grad();
        for (std::size_t i = 0; i < seg.size(); ++i) {
          const double scale = mean ? 1.0 / count[seg[i]] : 1.0;
          const double* g = node.grad.row(seg[i]);
          double* dst = an->grad.row(i);
          for (std::size_t c = 0; c < node.grad.cols; ++c) dst[c] += scale * g[c];
        }
      },
      mean ? "segment_mean" : "segment_sum");
}

}  // namespace detail

inline Tensor segment_sum(const Tensor& a, std::vector<int> seg, int n_out) {
  return detail::segment_reduce(a, std::move(seg), n_out, false);
}

inline Tensor segment_mean(const Tensor& a, std::vector<int> seg, int n_out) {
  return detail::segment_reduce(a, std::move(seg), n_out, true);
}

// Scales row i of `a` by w[i] (w is a column vector).
inline Tensor scale_rows(const Tensor& a, const Tensor& w) {
  detail::require(w.cols() == 1 && w.rows() == a.rows(), "scale_rows: weight shape");
  Mat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double s = w.val().v[i];
    const double* src = a.val().row(i);
    double* dst = out.row(i);
    for (std::size_t c = 0; c < a.cols(); ++c) dst[c] = s * src[c];
  }
  auto* an = a.node();
  auto* wn = w.node();
  return detail::make_op(
      std::move(out), {a, w},
      [an, wn](detail::TensorNode& node) {
        for (std::size_t i = 0; i < node.grad.rows; ++i) {
          const double* g = node.grad.row(i);
          if (an->requires_grad) {
            an->ensure_grad();
            double* da = an->grad.row(i);
            const double s = wn->val.v[i];
            for (std::size_t c = 0; c < node.grad.cols; ++c) da[c] += s * g[c];
          }
          if (wn->requires_grad) {
            wn->ensure_grad();
            const double* arow = an->val.row(i);
            double acc = 0;
            for (std::size_t c = 0; c < node.grad.cols; ++c) acc += g[c] * arow[c];
            wn->grad.v[i] += acc;
          }
        }
      },
      "scale_rows");
}

namespace detail {

inline void softmax_groups_backward(const Mat& out, const Mat& grad,
                                    const std::vector<std::vector<int>>& groups,
                                    Mat& dst) {
  for (const auto& g : groups) {
    double dot = 0;
    for (int i : g) dot += out.v[i] * grad.v[i];
    for (int i : g) dst.v[i] += out.v[i] * (grad.v[i] - dot);
  }
}

inline Tensor softmax_over_groups(const Tensor& a,
                                  std::vector<std::vector<int>> groups,
                                  const char* name) {
  Mat out = a.val();
  for (const auto& g : groups) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int i : g) mx = std::max(mx, out.v[i]);
    double total = 0;
    for (int i : g) {
      out.v[i] = std::exp(out.v[i] - mx);
      total += out.v[i];
    }
    for (int i : g) out.v[i] /= total;
  }
  auto* an = a.node();
  return make_op(
      std::move(out), {a},
      [an, groups = std::move(groups)](TensorNode& node) {
        an->ensure_grad();
        softmax_groups_backward(node.val, node.grad, groups, an->grad);
      },
      name);
}

}  // namespace detail

inline Tensor row_softmax(const Tensor& a) {
  std::vector<std::vector<int>> groups(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    groups[i].resize(a.cols());
    for (std::size_t c = 0; c < a.cols(); ++c)
      groups[i][c] = static_cast<int>(i * a.cols() + c);
  }
  return detail::softmax_over_groups(a, std::move(groups), "row_softmax");
}

// Softmax over the entries of a column vector within each segment.
// Entries whose segment id is negative are left untouched (probability 1
// groups of their own never arise in practice; callers pass full coverage).
inline Tensor segment_softmax(const Tensor& a, const std::vector<int>& seg,
                              int n_segments) {
  detail::require(a.cols() == 1, "segment_softmax: expects a column vector");
  detail::require(seg.size() == a.rows(), "segment_softmax: index length mismatch");
  std::vector<std::vector<int>> groups(n_segments);
  for (std::size_t i = 0; i < seg.size(); ++i) {
    detail::require(seg[i] >= 0 && seg[i] < n_segments, "segment_softmax: bad segment");
    groups[seg[i]].push_back(static_cast<int>(i));
  }
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const auto& g) { return g.empty(); }),
               groups.end());
  return detail::softmax_over_groups(a, std::move(groups), "segment_softmax");
}

// Multiply every entry of `a` by the 1x1 tensor `s` (trainable scalar gain).
inline Tensor scale_by(const Tensor& a, const Tensor& s) {
  detail::require(s.rows() == 1 && s.cols() == 1, "scale_by: scalar expected");
  const double sv = s.val().v[0];
  Mat out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = sv * a.val().v[i];
  auto* an = a.node();
  auto* sn = s.node();
  return detail::make_op(
      std::move(out), {a, s},
      [an, sn](detail::TensorNode& node) {
        const double sv = sn->val.v[0];
        if (an->requires_grad) {
          an->ensure_grad();
          for (std::size_t i = 0; i < node.grad.size(); ++i)
            an->grad.v[i] += sv * node.grad.v[i];
        }
        if (sn->requires_grad) {
          sn->ensure_grad();
          double acc = 0;
          for (std::size_t i = 0; i < node.grad.size(); ++i)
            acc += node.grad.v[i] * an->val.v[i];
          sn->grad.v[0] += acc;
        }
      },
      "scale_by");
}

inline Tensor sum_all(const Tensor& a) {
  double total = 0;
  for (double x : a.val().v) total += x;
  auto* an = a.node();
  return detail::make_op(
      Mat(1, 1, total), {a},
      [an](detail::TensorNode& node) {
        an->ensure_grad();
        const double g = node.grad.v[0];
        for (std::size_t i = 0; i < an->grad.size(); ++i) an->grad.v[i] += g;
      },
      "sum_all");
}

inline Tensor l2_norm(const Tensor& a) {
  double total = 0;
  for (double x : a.val().v) total += x * x;
  const double norm = std::sqrt(total);
  auto* an = a.node();
  return detail::make_op(
      Mat(1, 1, norm), {a},
      [an, norm](detail::TensorNode& node) {
        an->ensure_grad();
        if (norm == 0) return;  // subgradient 0 at the origin
        const double g = node.grad.v[0] / norm;
        for (std::size_t i = 0; i < an->grad.size(); ++i)
          an->grad.v[i] += g * an->val.v[i];
      },
      "l2_norm");
}

// Mean softmax cross-entropy over rows of `logits` against integer labels.
inline Tensor softmax_cross_entropy(const Tensor& logits,
                                    const std::vector<int>& labels) {
  detail::require(labels.size() == logits.rows(), "cross_entropy: label count");
  const std::size_t n = logits.rows(), k = logits.cols();
  for (int label : labels)
    if (label < 0 || static_cast<std::size_t>(label) >= k)
      throw InputError("cross_entropy: class index out of range");
  double total = 0;
  Mat probs(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = logits.val().row(i);
    double mx = row[0];
    for (std::size_t c = 1; c < k; ++c) mx = std::max(mx, row[c]);
    double z = 0;
    for (std::size_t c = 0; c < k; ++c) z += std::exp(row[c] - mx);
    const double lse = mx + std::log(z);
    total += lse - row[labels[i]];
    for (std::size_t c = 0; c < k; ++c) probs.at(i, c) = std::exp(row[c] - lse);
  }
  auto* ln = logits.node();
  return detail::make_op(
      Mat(1, 1, total / static_cast<double>(n)), {logits},
      [ln, labels, probs = std::move(probs), n](detail::TensorNode& node) {
        ln->ensure_grad();
        const double g = node.grad.v[0] / static_cast<double>(n);
        for (std::size_t i = 0; i < probs.rows; ++i)
          for (std::size_t c = 0; c < probs.cols; ++c)
            ln->grad.at(i, c) +=
                g * (probs.at(i, c) - (labels[i] == static_cast<int>(c) ? 1.0 : 0.0));
      },
      "softmax_cross_entropy");
}

// Mean squared error against a constant target.
inline Tensor mse(const Tensor& pred, const Mat& target) {
  detail::require(pred.rows() == target.rows && pred.cols() == target.cols,
                  "mse: shape mismatch");
  const double n = static_cast<double>(pred.val().size());
  double total = 0;
  for (std::size_t i = 0; i < pred.val().size(); ++i) {
    const double d = pred.val().v[i] - target.v[i];
    total += d * d;
  }
  auto* pn = pred.node();
  return detail::make_op(
      Mat(1, 1, total / n), {pred},
      [pn, target, n](detail::TensorNode& node) {
        pn->ensure_grad();
        const double g = 2.0 * node.grad.v[0] / n;
        for (std::size_t i = 0; i < pn->grad.size(); ++i)
          pn->grad.v[i] += g * (pn->val.v[i] - target.v[i]);
      },
      "mse");
}

}  // namespace rxngraph

#endif  // RXNGRAPH_TENSOR_HPP
