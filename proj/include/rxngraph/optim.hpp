// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#ifndef RXNGRAPH_OPTIM_HPP
#define RXNGRAPH_OPTIM_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rxngraph/errors.hpp"
#include "rxngraph/rng.hpp"
#include "rxngraph/tensor.hpp"

namespace rxngraph {

// Named parameter tensors in fixed creation order. The order defines both
// RNG consumption at init and checkpoint layout.
struct ParamStore {
  std::vector<std::pair<std::string, Tensor>> items;

  // Returns a copy of the handle (it aliases the same node); references into
  // `items` would dangle on the next add.
  Tensor add(const std::string& name, Tensor t) {
    items.emplace_back(name, std::move(t));
    return items.back().second;
  }

  Tensor* find(const std::string& name) {
    for (auto& [n, t] : items)
      if (n == name) return &t;
    return nullptr;
  }
  const Tensor* find(const std::string& name) const {
    for (const auto& [n, t] : items)
      if (n == name) return &t;
    return nullptr;
  }

  void zero_grad() {
    for (auto& [n, t] : items) t.zero_grad();
  }

  std::size_t scalar_count() const {
    std::size_t c = 0;
    for (const auto& [n, t] : items) c += t.val().size();
    return c;
  }
};

// Glorot-style uniform init in +-sqrt(6 / (fan_in + fan_out)).
inline Tensor glorot_param(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Mat m(rows, cols);
  for (double& x : m.v) x = rng.uniform(-bound, bound);
  return Tensor::param(std::move(m));
}

inline Tensor zeros_param(std::size_t rows, std::size_t cols) {
  return Tensor::param(Mat(rows, cols, 0.0));
}

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  std::vector<Mat> m, v;  // aligned with the ParamStore
  long t = 0;

  static AdamState init(const ParamStore& params, AdamConfig cfg = {}) {
    AdamState s;
    s.cfg = cfg;
    for (const auto& [name, p] : params.items) {
      s.m.emplace_back(p.val().rows, p.val().cols);
      s.v.emplace_back(p.val().rows, p.val().cols);
    }
    return s;
  }
};

// One ADAM update with bias correction. The L2 term is added to the raw
// gradient (coupled weight decay), matching an L2 loss term.
inline void adam_step(ParamStore& params, AdamState& state, double lr,
                      double l2 = 0.0) {
  if (state.m.size() != params.items.size())
    throw NumericError("adam_step: state/parameter mismatch");
  ++state.t;
  const double b1 = state.cfg.beta1, b2 = state.cfg.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
  for (std::size_t p = 0; p < params.items.size(); ++p) {
    Tensor& theta = params.items[p].second;
    Mat& val = theta.mutable_val();
    const Mat& grad = theta.grad();
    if (grad.size() != val.size())
      throw NumericError("adam_step: missing gradient for " + params.items[p].first);
    Mat& m = state.m[p];
    Mat& v = state.v[p];
    for (std::size_t i = 0; i < val.size(); ++i) {
      const double g = grad.v[i] + l2 * val.v[i];
      m.v[i] = b1 * m.v[i] + (1.0 - b1) * g;
      v.v[i] = b2 * v.v[i] + (1.0 - b2) * g * g;
      const double mhat = m.v[i] / bc1;
      const double vhat = v.v[i] / bc2;
      val.v[i] -= lr * mhat / (std::sqrt(vhat) + state.cfg.eps);
      if (!std::isfinite(val.v[i]))
        throw NumericError("adam_step: non-finite parameter update");
    }
  }
}

// lr(t) = lr0 * decay^t, advanced by one multiply per optimizer step so that
// lr_{t+1} == lr_t * decay holds bit-exactly.
struct ExponentialSchedule {
  double lr0 = 1e-3;
  double decay = 1.0;  // in (0, 1]
  double current = lr0;

  ExponentialSchedule() = default;
  ExponentialSchedule(double lr0_, double decay_) : lr0(lr0_), decay(decay_), current(lr0_) {
    if (lr0 <= 0) throw InputError("schedule: lr must be positive");
    if (decay <= 0 || decay > 1) throw InputError("schedule: decay must be in (0,1]");
  }

  double lr() const { return current; }
  void advance() { current *= decay; }
};

// Max relative error between analytic and central-difference gradients over
// up to `max_coords` randomly sampled parameter coordinates. `f` rebuilds the
// loss graph from the current parameter values on every call.
template <typename F>
double grad_check(F&& f, ParamStore& params, double eps = 1e-5,
                  int max_coords = 50, std::uint64_t seed = 1234) {
  if (eps < 1e-7 || eps > 1e-3) throw InputError("grad_check: eps out of range");
  params.zero_grad();
  Tensor loss = f();
  loss.backward();

  std::vector<std::pair<std::size_t, std::size_t>> coords;  // (param, flat index)
  for (std::size_t p = 0; p < params.items.size(); ++p)
    for (std::size_t i = 0; i < params.items[p].second.val().size(); ++i)
      coords.emplace_back(p, i);
  Rng rng(seed);
  rng.shuffle(coords);
  if (static_cast<int>(coords.size()) > max_coords) coords.resize(max_coords);

  double worst = 0;
  for (const auto& [p, i] : coords) {
    Tensor& theta = params.items[p].second;
    const double analytic = theta.grad().v[i];
    const double saved = theta.val().v[i];
    theta.mutable_val().v[i] = saved + eps;
    const double up = f().item();
    theta.mutable_val().v[i] = saved - eps;
    const double down = f().item();
    theta.mutable_val().v[i] = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double rel = std::abs(analytic - numeric) /
                       std::max(1.0, std::abs(analytic));
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace rxngraph

#endif  // RXNGRAPH_OPTIM_HPP
