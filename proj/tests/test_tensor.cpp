// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rxngraph/optim.hpp"
#include "rxngraph/rng.hpp"
#include "rxngraph/tensor.hpp"

using namespace rxngraph;

namespace {

Mat mat(std::size_t r, std::size_t c, std::initializer_list<double> vals) {
  Mat m(r, c);
  std::size_t i = 0;
  for (double v : vals) m.v[i++] = v;
  return m;
}

Tensor random_param(std::size_t r, std::size_t c, Rng& rng) {
  Mat m(r, c);
  for (double& x : m.v) x = rng.uniform(-1, 1);
  return Tensor::param(std::move(m));
}

}  // namespace

TEST_CASE("forward op semantics") {
  SECTION("row_softmax of equal logits") {
    auto t = row_softmax(Tensor::constant(mat(1, 3, {2.0, 2.0, 2.0})));
    for (int c = 0; c < 3; ++c) CHECK(t.val().at(0, c) == Catch::Approx(1.0 / 3).epsilon(1e-12));
  }
  SECTION("segment_mean over a singleton segment is the identity") {
    auto x = Tensor::constant(mat(1, 3, {4.0, 5.0, 6.0}));
    auto t = segment_mean(x, {0}, 1);
    for (int c = 0; c < 3; ++c) CHECK(t.val().at(0, c) == x.val().at(0, c));
  }
  SECTION("tanh is odd") {
    auto x = Tensor::constant(mat(1, 4, {-2.0, -0.5, 0.3, 1.7}));
    auto y = tanh(x);
    auto ny = tanh(scale(x, -1.0));
    for (int c = 0; c < 4; ++c)
      CHECK(y.val().at(0, c) == Catch::Approx(-ny.val().at(0, c)).margin(1e-15));
  }
  SECTION("matmul") {
    auto a = Tensor::constant(mat(2, 2, {1, 2, 3, 4}));
    auto b = Tensor::constant(mat(2, 2, {5, 6, 7, 8}));
    auto c = matmul(a, b);
    CHECK(c.val().at(0, 0) == 19);
    CHECK(c.val().at(0, 1) == 22);
    CHECK(c.val().at(1, 0) == 43);
    CHECK(c.val().at(1, 1) == 50);
  }
  SECTION("segment softmax normalizes within segments and is shift invariant") {
    auto x = Tensor::constant(mat(5, 1, {1.0, 2.0, 0.5, 3.0, 1.5}));
    std::vector<int> seg = {0, 0, 1, 1, 1};
    auto s = segment_softmax(x, seg, 2);
    CHECK(s.val().v[0] + s.val().v[1] == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(s.val().v[2] + s.val().v[3] + s.val().v[4] == Catch::Approx(1.0).epsilon(1e-12));
    // shift one segment's logits by a constant
    auto x2 = Tensor::constant(mat(5, 1, {1.0, 2.0, 10.5, 13.0, 11.5}));
    auto s2 = segment_softmax(x2, seg, 2);
    for (int i = 2; i < 5; ++i)
      CHECK(s.val().v[i] == Catch::Approx(s2.val().v[i]).epsilon(1e-12));
  }
  SECTION("shape errors") {
    auto a = Tensor::constant(Mat(2, 3, 1.0));
    auto b = Tensor::constant(Mat(2, 3, 1.0));
    CHECK_THROWS_AS(matmul(a, b), NumericError);
    CHECK_THROWS_AS(add(a, Tensor::constant(Mat(3, 2, 1.0))), NumericError);
  }
  SECTION("non-finite output is an error") {
    auto big = Tensor::constant(Mat(1, 1, 1e308));
    CHECK_THROWS_AS(mul(big, big), NumericError);
  }
}

TEST_CASE("backward basics") {
  SECTION("sum(W x) has gradient x broadcast") {
    auto w = Tensor::param(mat(2, 2, {1, 2, 3, 4}));
    auto x = Tensor::constant(mat(2, 1, {5, 7}));
    auto loss = sum_all(matmul(w, x));
    loss.backward();
    CHECK(w.grad().at(0, 0) == 5);
    CHECK(w.grad().at(0, 1) == 7);
    CHECK(w.grad().at(1, 0) == 5);
    CHECK(w.grad().at(1, 1) == 7);
  }
  SECTION("constant loss gives zero gradients") {
    auto w = Tensor::param(mat(1, 2, {1, 2}));
    auto loss = Tensor::scalar(3.0);
    loss.backward();
    CHECK(w.grad().at(0, 0) == 0);
    CHECK(w.grad().at(0, 1) == 0);
  }
  SECTION("gradients accumulate across backward calls until zero_grad") {
    auto w = Tensor::param(mat(1, 1, {2.0}));
    sum_all(mul(w, w)).backward();
    CHECK(w.grad().v[0] == Catch::Approx(4.0));
    sum_all(mul(w, w)).backward();
    CHECK(w.grad().v[0] == Catch::Approx(8.0));
    w.zero_grad();
    CHECK(w.grad().v[0] == 0.0);
  }
  SECTION("non-scalar loss rejected") {
    auto w = Tensor::param(Mat(2, 2, 1.0));
    CHECK_THROWS_AS(w.backward(), NumericError);
  }
  SECTION("diamond-shaped graph accumulates both paths") {
    auto x = Tensor::param(mat(1, 1, {3.0}));
    auto y = add(mul(x, x), x);  // x^2 + x, dy/dx = 2x + 1 = 7
    sum_all(y).backward();
    CHECK(x.grad().v[0] == Catch::Approx(7.0));
  }
}

TEST_CASE("grad_check on composed ops") {
  Rng rng(99);
  SECTION("linear function is exact") {
    ParamStore ps;
    auto w = ps.add("w", random_param(3, 4, rng));
    auto x = Tensor::constant(random_param(4, 2, rng).val());
    auto f = [&] { return sum_all(matmul(w, x)); };
    CHECK(grad_check(f, ps, 1e-5, 50, 7) < 1e-9);
  }
  SECTION("softmax cross-entropy toy") {
    ParamStore ps;
    auto w = ps.add("w", random_param(4, 3, rng));
    auto x = Tensor::constant(random_param(2, 4, rng).val());
    std::vector<int> labels = {0, 2};
    auto f = [&] { return softmax_cross_entropy(matmul(x, w), labels); };
    CHECK(grad_check(f, ps, 1e-5, 50, 8) < 1e-6);
  }
  SECTION("every op type composed") {
    ParamStore ps;
    auto w1 = ps.add("w1", random_param(5, 4, rng));
    auto w2 = ps.add("w2", random_param(4, 4, rng));
    auto col = ps.add("col", random_param(5, 1, rng));
    auto x = Tensor::constant(random_param(5, 4, rng).val());
    std::vector<int> seg = {0, 1, 0, 2, 1};
    std::vector<int> gather = {2, 0, 4, 4};
    auto f = [&] {
      auto h = mul(x, w1);
      h = matmul(h, w2);
      h = leaky_relu(h, 0.2);
      h = scale_rows(h, col);
      auto pooled = segment_mean(h, seg, 3);
      auto picked = gather_rows(h, gather);
      auto joined = concat_rows(pooled, picked);
      auto smax = row_softmax(joined);
      auto c2 = concat_cols(tanh(pooled), scale(pooled, 0.5));
      auto seg_logits = segment_softmax(sub(col, scale(col, 2.0)), {0, 0, 1, 1, 1}, 2);
      return add(add(sum_all(smax), sum_all(c2)),
                 add(l2_norm(joined), sum_all(seg_logits)));
    };
    CHECK(grad_check(f, ps, 1e-5, 80, 9) < 1e-6);
  }
  SECTION("segment_sum and relu and mse") {
    ParamStore ps;
    auto w = ps.add("w", random_param(4, 3, rng));
    auto x = Tensor::constant(random_param(4, 3, rng).val());
    Mat target(2, 3, 0.25);
    auto f = [&] {
      auto h = relu(add(x, w));
      return mse(segment_sum(h, {0, 1, 1, 0}, 2), target);
    };
    CHECK(grad_check(f, ps, 1e-5, 50, 10) < 1e-6);
  }
}

TEST_CASE("adam optimizer") {
  SECTION("zero gradient leaves parameters unchanged") {
    ParamStore ps;
    ps.add("w", Tensor::param(mat(1, 2, {1.5, -2.5})));
    auto st = AdamState::init(ps);
    ps.zero_grad();
    adam_step(ps, st, 0.1, 0.0);
    CHECK(ps.items[0].second.val().at(0, 0) == 1.5);
    CHECK(ps.items[0].second.val().at(0, 1) == -2.5);
  }
  SECTION("first step moves by about -sign(g) * lr") {
    ParamStore ps;
    auto w = ps.add("w", Tensor::param(mat(1, 2, {1.0, 1.0})));
    auto st = AdamState::init(ps);
    ps.zero_grad();
    sum_all(mul(w, Tensor::constant(mat(1, 2, {3.0, -0.2})))).backward();
    adam_step(ps, st, 0.1, 0.0);
    CHECK(w.val().at(0, 0) == Catch::Approx(1.0 - 0.1).epsilon(1e-4));
    CHECK(w.val().at(0, 1) == Catch::Approx(1.0 + 0.1).epsilon(1e-4));
  }
  SECTION("100 steps on theta^2 from 1.0 converges below 0.1") {
    // independent scalar oracle
    double theta = 1.0, m = 0, v = 0;
    const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    for (int t = 1; t <= 100; ++t) {
      const double g = 2.0 * theta;
      m = b1 * m + (1 - b1) * g;
      v = b2 * v + (1 - b2) * g * g;
      theta -= lr * (m / (1 - std::pow(b1, t))) / (std::sqrt(v / (1 - std::pow(b2, t))) + eps);
    }
    REQUIRE(std::abs(theta) < 0.1);

    // implementation follows the oracle trajectory
    ParamStore ps;
    auto w = ps.add("theta", Tensor::param(Mat(1, 1, 1.0)));
    auto st = AdamState::init(ps);
    for (int t = 0; t < 100; ++t) {
      ps.zero_grad();
      sum_all(mul(w, w)).backward();
      adam_step(ps, st, lr, 0.0);
    }
    CHECK(w.val().v[0] == Catch::Approx(theta).margin(1e-12));
    CHECK(std::abs(w.val().v[0]) < 0.1);
  }
  SECTION("l2 term pulls weights toward zero") {
    ParamStore ps;
    auto w = ps.add("w", Tensor::param(Mat(1, 1, 5.0)));
    auto st = AdamState::init(ps);
    for (int t = 0; t < 50; ++t) {
      ps.zero_grad();  // no loss gradient at all
      adam_step(ps, st, 0.05, 1e-2);
    }
    CHECK(std::abs(w.val().v[0]) < 5.0);
  }
}

TEST_CASE("exponential schedule") {
  ExponentialSchedule s(0.5, 0.9);
  double prev = s.lr();
  CHECK(prev == 0.5);
  for (int t = 0; t < 20; ++t) {
    const double expected = prev * 0.9;  // one multiply per step, bit-exact
    s.advance();
    CHECK(s.lr() == expected);
    CHECK(s.lr() <= prev);
    prev = s.lr();
  }
  CHECK_THROWS_AS(ExponentialSchedule(0.1, 1.5), InputError);
  CHECK_THROWS_AS(ExponentialSchedule(-0.1, 0.5), InputError);
}

TEST_CASE("determinism of graph evaluation") {
  auto run = [] {
    Rng rng(424242);
    ParamStore ps;
    auto w = ps.add("w", glorot_param(6, 6, rng));
    auto x = Tensor::constant([&] {
      Mat m(4, 6);
      for (double& v : m.v) v = rng.uniform(-1, 1);
      return m;
    }());
    auto loss = sum_all(row_softmax(matmul(x, w)));
    loss.backward();
    return std::pair{loss.item(), w.grad().v[7]};
  };
  auto [l1, g1] = run();
  auto [l2, g2] = run();
  CHECK(l1 == l2);
  CHECK(g1 == g2);
}
