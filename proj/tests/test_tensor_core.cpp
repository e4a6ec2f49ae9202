// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#include <cmath>
#include <random>

#include "doctest.h"
#include "gcnsum/autodiff.hpp"
#include "gcnsum/error.hpp"
#include "gcnsum/optim.hpp"
#include "gcnsum/tensor.hpp"
#include "support/oracles.hpp"

using namespace gcnsum;

namespace {

Tensor random_tensor(Shape s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Tensor t(std::move(s));
  for (auto& v : t.values()) v = u(rng);
  return t;
}

// Finite-difference check of d(sum(w * f(x)))/dx for a unary op builder.
void check_gradient(const std::function<Var(Tape&, Var)>& op, Tensor x0, double tol = 1e-7) {
  std::mt19937_64 rng(3);
  Param p("x", x0);
  Tensor probe;
  {
    Tape t;
    probe = random_tensor(op(t, t.constant(x0)).shape(), rng);
  }
  auto f = [&]() {
    Tape t;
    return sum(mul(op(t, t.constant(p.value)), t.constant(probe))).value().item();
  };
  Tape t;
  const Var out = sum(mul(op(t, t.param(p)), t.constant(probe)));
  t.backward(out);
  for (std::size_t i = 0; i < p.value.numel(); ++i) {
    const double fd = oracle::central_difference(f, p.value[i], 1e-6);
    CHECK(p.grad[i] == doctest::Approx(fd).epsilon(tol).scale(1.0));
  }
}

}  // namespace

TEST_CASE("tensor shapes and accessors") {
  const Tensor m = Tensor::matrix({{1, 2, 3}, {4, 5, 6}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.at(1, 2) == 6);
  CHECK(m.row(1)[0] == 4);
  CHECK(Tensor::scalar(3).item() == 3);
  CHECK_THROWS_AS(Tensor(Shape{2, 0}), DimensionError);
  CHECK_THROWS_AS(Tensor(Shape{1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(Tensor(Shape{2}, std::vector<double>{1, 2, 3}), DimensionError);
  CHECK_THROWS(m.item());
  CHECK(shape_str(m.shape()) == "[2x3]");
}

TEST_CASE("matmul examples") {
  Tape t;
  SUBCASE("identity leaves M unchanged") {
    std::mt19937_64 rng(1);
    const Tensor m = random_tensor({3, 3}, rng);
    CHECK(matmul(t.constant(Tensor::identity(3)), t.constant(m)).value() == m);
  }
  SUBCASE("hand evaluation") {
    const Var r = matmul(t.constant(Tensor::matrix({{1, 2}, {3, 4}})),
                         t.constant(Tensor::matrix({{0}, {1}})));
    CHECK(r.value() == Tensor::matrix({{2}, {4}}));
  }
  SUBCASE("shape mismatch names both shapes") {
    try {
      matmul(t.constant(Tensor({2, 3})), t.constant(Tensor({2, 3})));
      FAIL("expected a dimension error");
    } catch (const DimensionError& e) {
      const std::string w = e.what();
      CHECK(w.find("[2x3]") != std::string::npos);
    }
  }
  SUBCASE("matrix-vector") {
    const Var r = matmul(t.constant(Tensor::matrix({{1, 2}, {3, 4}})), t.constant(Tensor::vector({1, 1})));
    CHECK(r.value() == Tensor::vector({3, 7}));
  }
}

TEST_CASE("elementwise activations") {
  Tape t;
  CHECK(relu(t.constant(Tensor::vector({-1, 0, 2}))).value() == Tensor::vector({0, 0, 2}));
  CHECK(tanh(t.constant(Tensor::vector({0}))).value() == Tensor::vector({0}));
  CHECK(sigmoid(t.constant(Tensor::vector({0}))).value() == Tensor::vector({0.5}));
  CHECK_THROWS_AS(add(t.constant(Tensor({2})), t.constant(Tensor({3}))), DimensionError);
  CHECK_THROWS_AS(log(t.constant(Tensor::vector({1, 0}))), NumericError);
}

TEST_CASE("softmax examples and properties") {
  Tape t;
  for (double c : {-50.0, 0.0, 3.0, 700.0}) {
    const Tensor s = softmax(t.constant(Tensor::vector({c, c, c}))).value();
    for (double v : s.values()) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
  const Tensor s = softmax(t.constant(Tensor::vector({0, std::log(3.0)}))).value();
  CHECK(s[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(softmax(t.constant(Tensor::vector({-4.2}))).value()[0] == 1.0);

  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    const Tensor x = random_tensor({7}, rng);
    const Tensor p = softmax(t.constant(x)).value();
    double total = 0;
    for (double v : p.values()) {
      CHECK(v > 0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("backward examples") {
  SUBCASE("sum gives ones") {
    Param p("p", Tensor::vector({3, -1, 2}));
    Tape t;
    t.backward(sum(t.param(p)));
    CHECK(p.grad == Tensor::vector({1, 1, 1}));
  }
  SUBCASE("quadratic") {
    Param p("p", Tensor::vector({1, 2}));
    Tape t;
    const Var v = t.param(p);
    t.backward(sum(mul(v, v)));
    CHECK(p.grad == Tensor::vector({2, 4}));
  }
  SUBCASE("second backward accumulates") {
    Param p("p", Tensor::vector({1, 2}));
    Tape t;
    const Var v = t.param(p);
    const Var l = sum(mul(v, v));
    t.backward(l);
    t.backward(l);
    CHECK(p.grad == Tensor::vector({4, 8}));
  }
  SUBCASE("non-scalar loss rejected") {
    Param p("p", Tensor::vector({1, 2}));
    Tape t;
    CHECK_THROWS_AS(t.backward(t.param(p)), DimensionError);
  }
}

TEST_CASE("op gradients match finite differences") {
  std::mt19937_64 rng(5);
  const Tensor m = random_tensor({3, 4}, rng);
  const Tensor v = random_tensor({4}, rng);
  const Tensor w = random_tensor({4, 2}, rng);
  check_gradient([](Tape&, Var x) { return tanh(x); }, m);
  check_gradient([](Tape&, Var x) { return sigmoid(x); }, m);
  check_gradient([](Tape&, Var x) { return relu(x); }, m);
  check_gradient([](Tape&, Var x) { return softmax(x); }, v);
  check_gradient([](Tape&, Var x) { return log(add(mul(x, x), x.tape()->constant(Tensor::scalar(1)))); }, v);
  check_gradient([&](Tape& t, Var x) { return matmul(x, t.constant(w)); }, m);
  check_gradient([&](Tape& t, Var x) { return matmul(t.constant(m), x); }, w);
  check_gradient([&](Tape& t, Var x) { return matmul(t.constant(m), x); }, v);
  check_gradient([](Tape&, Var x) { return transpose(x); }, m);
  check_gradient([](Tape&, Var x) { return scale(row(x, 1), -2.5); }, m);
  check_gradient([](Tape&, Var x) { return stack_rows({row(x, 2), row(x, 0), row(x, 2)}); }, m);
  check_gradient([&](Tape& t, Var x) { return add_rowwise(t.constant(m), x); }, v);
  check_gradient([](Tape&, Var x) { return gather_rows(x, {2, 0, 2, 2}); }, m);
  check_gradient([](Tape&, Var x) { return mean({row(x, 0), row(x, 1), row(x, 0)}); }, m);
  check_gradient([](Tape&, Var x) { return sub(x, mul(x, x)); }, m);
  check_gradient([&](Tape& t, Var x) { return mul(t.constant(Tensor::scalar(1.7)), x); }, m);
}

TEST_CASE("clip_global_norm") {
  auto make = [](std::vector<double> a, std::vector<double> b) {
    std::vector<Param> ps{Param("a", Tensor({a.size()}, a)), Param("b", Tensor({b.size()}, b))};
    ps[0].grad = ps[0].value;
    ps[1].grad = ps[1].value;
    return ps;
  };
  SUBCASE("norm 2 halves") {
    auto ps = make({1.2, 0}, {1.6});  // norm 2
    std::vector<Param*> ptr{&ps[0], &ps[1]};
    CHECK(clip_global_norm(ptr, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ps[0].grad[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(ps[1].grad[0] == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("below max is a no-op") {
    auto ps = make({0.3}, {0.4});
    std::vector<Param*> ptr{&ps[0], &ps[1]};
    CHECK(clip_global_norm(ptr, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ps[0].grad[0] == 0.3);
    CHECK(ps[1].grad[0] == 0.4);
  }
  SUBCASE("zero gradients") {
    auto ps = make({0, 0}, {0});
    std::vector<Param*> ptr{&ps[0], &ps[1]};
    CHECK(clip_global_norm(ptr, 1.0) == 0.0);
    CHECK(ps[0].grad[0] == 0.0);
  }
  SUBCASE("idempotent") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
      std::vector<Param> ps{Param("a", random_tensor({5}, rng))};
      ps[0].grad = random_tensor({5}, rng);
      for (auto& g : ps[0].grad.values()) g *= 10;
      std::vector<Param*> ptr{&ps[0]};
      clip_global_norm(ptr, 1.0);
      const Tensor once = ps[0].grad;
      const double n2 = clip_global_norm(ptr, 1.0);
      CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t i = 0; i < 5; ++i) CHECK(ps[0].grad[i] == doctest::Approx(once[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("adam matches the scalar oracle") {
  std::mt19937_64 rng(11);
  Param p("p", random_tensor({2, 3}, rng));
  std::vector<Param*> ptr{&p};
  AdamState adam(ptr, 0.01);
  std::vector<oracle::AdamScalar> ref(p.value.numel());
  Tensor expect = p.value;
  for (int step = 0; step < 25; ++step) {
    p.grad = random_tensor({2, 3}, rng);
    for (std::size_t i = 0; i < expect.numel(); ++i) expect[i] = ref[i].step(expect[i], p.grad[i], 0.01);
    adam.step(ptr);
    for (std::size_t i = 0; i < expect.numel(); ++i)
      CHECK(p.value[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    CHECK(p.grad == Tensor::zeros_like(p.value));
  }
  CHECK(adam.step_count() == 25);
}

TEST_CASE("adam first step closed form and zero gradient") {
  Param p("p", Tensor::vector({1.0, -2.0}));
  std::vector<Param*> ptr{&p};
  SUBCASE("first step moves by lr * g / (|g| + eps)") {
    AdamState adam(ptr, 0.1);
    p.grad = Tensor::vector({0.5, -3.0});
    adam.step(ptr);
    CHECK(p.value[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-15));
    CHECK(p.value[1] == doctest::Approx(-2.0 + 0.1 * 3.0 / (3.0 + 1e-8)).epsilon(1e-15));
  }
  SUBCASE("zero gradients leave values unchanged") {
    AdamState adam(ptr, 0.1);
    adam.step(ptr);
    adam.step(ptr);
    CHECK(p.value == Tensor::vector({1.0, -2.0}));
    CHECK(adam.step_count() == 2);
  }
}

TEST_CASE("tape determinism") {
  std::mt19937_64 r1(4), r2(4);
  const Tensor a = random_tensor({4, 4}, r1), b = random_tensor({4, 4}, r2);
  Tape t1, t2;
  const Tensor x = softmax(row(tanh(matmul(t1.constant(a), t1.constant(a))), 1)).value();
  const Tensor y = softmax(row(tanh(matmul(t2.constant(b), t2.constant(b))), 1)).value();
  CHECK(x == y);
}
