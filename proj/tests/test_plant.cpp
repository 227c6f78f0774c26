#include <doctest.h>

#include <cmath>
#include <random>

#include "claeo/benchmark.hpp"

using namespace claeo;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("plant derivative on the benchmark") {
  const Benchmark b = make_benchmark("benchmark-sin");

  CHECK(b.plant.derivative(v2(0, 0), 0.0).isZero());

  const double s1 = std::sin(1.0) + 2.0;
  const Vec d1 = b.plant.derivative(v2(1, 1), 0.0);
  CHECK(d1(0) == doctest::Approx(1.0));
  CHECK(d1(1) == doctest::Approx(-1.0 - 1.5 + 0.5 * 2.0 * s1 * s1));

  const Vec d2 = b.plant.derivative(v2(1, 0), 1.0);
  CHECK(d2(0) == doctest::Approx(0.0));
  CHECK(d2(1) == doctest::Approx(-1.0 + 0.5 * s1 * s1 + s1));
}

TEST_CASE("plant derivative rejects non-finite input") {
  const Benchmark b = make_benchmark("benchmark-sin");
  CHECK_THROWS_AS(b.plant.derivative(v2(std::nan(""), 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(b.plant.derivative(v2(0, 0), INFINITY), std::invalid_argument);
}

TEST_CASE("first n-1 derivative components ignore control and weights") {
  Benchmark b = make_benchmark("benchmark-sin");
  const Vec x = v2(0.3, -2.0);
  const Vec base = b.plant.derivative(x, 0.0);
  const Vec with_u = b.plant.derivative(x, 7.5);
  CHECK(base(0) == with_u(0));
  b.plant.true_weights = v2(9.0, -4.0);
  CHECK(b.plant.derivative(x, 7.5)(0) == base(0));
}

TEST_CASE("HJB residual of the analytic solution vanishes on both variants") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (const char* id : {"benchmark-sin", "benchmark-cos"}) {
    const Benchmark b = make_benchmark(id);
    for (int i = 0; i < 100; ++i) {
      const Vec x = v2(dist(rng), dist(rng));
      const double res = hjb_residual(b.plant, b.cost, b.analytic.value_gradient(x),
                                      b.analytic.policy(x), x);
      CHECK(std::abs(res) <= 1e-9);
    }
  }
}

TEST_CASE("HJB residual special points") {
  const Benchmark b = make_benchmark("benchmark-sin");
  CHECK(hjb_residual(b.plant, b.cost, v2(0, 0), 0.0, v2(0, 0)) == doctest::Approx(0.0));
  // Zero gradient, zero control: residual is the state cost.
  CHECK(hjb_residual(b.plant, b.cost, v2(0, 0), 0.0, v2(1, 1)) == doctest::Approx(5.0));
}

TEST_CASE("policy from value gradient") {
  const Benchmark b = make_benchmark("benchmark-sin");
  CHECK(optimal_policy_from_gradient(b.plant, b.cost, v2(0, 0), v2(3, -1)) == 0.0);

  const Vec x = v2(1, 1);
  const double g = b.plant.control_gain(x);
  CHECK(optimal_policy_from_gradient(b.plant, b.cost, b.analytic.value_gradient(x), x) ==
        doctest::Approx(-2.0 * g));

  // On x1 + x2 = 0 the analytic gradient's last entry vanishes.
  for (double a : {-3.0, 0.5, 2.0}) {
    const Vec y = v2(a, -a);
    CHECK(optimal_policy_from_gradient(b.plant, b.cost, b.analytic.value_gradient(y), y) ==
          doctest::Approx(0.0));
  }

  // Linearity in the gradient.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const Vec y = v2(dist(rng), dist(rng));
    const Vec vx = v2(dist(rng), dist(rng));
    const double u1 = optimal_policy_from_gradient(b.plant, b.cost, vx, y);
    const double u3 = optimal_policy_from_gradient(b.plant, b.cost, Vec(3.0 * vx), y);
    CHECK(u3 == doctest::Approx(3.0 * u1));
  }
}

TEST_CASE("trapezoidal cost accumulation") {
  const Benchmark b = make_benchmark("benchmark-sin");
  const Vec zero = v2(0, 0);
  const Vec ones = v2(1, 1);

  CHECK(accumulate_cost(b.cost, {0.0, 1.0, 2.0}, {zero, zero, zero}, {0, 0, 0}) ==
        doctest::Approx(0.0));
  CHECK(accumulate_cost(b.cost, {0.0, 1.0}, {ones, ones}, {0, 0}) == doctest::Approx(5.0));
  CHECK(accumulate_cost(b.cost, {0.0, 1.0}, {ones, ones}, {2, 2}) == doctest::Approx(9.0));
  CHECK_THROWS_AS(accumulate_cost(b.cost, {}, {}, {}), ContractError);
}

TEST_CASE("unknown preset is rejected") {
  CHECK_THROWS_AS(make_benchmark("benchmark-tan"), ConfigError);
}
