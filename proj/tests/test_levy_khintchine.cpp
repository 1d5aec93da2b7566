#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "glevy/gpoisson.hpp"
#include "glevy/levy_khintchine.hpp"
#include "oracles.hpp"

using namespace glevy;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

TestFunction zero_fn(Eigen::Index d) {
  return TestFunction{[](const Vector&) { return 0.0; }, Vector::Zero(d), Matrix::Zero(d, d), 0.0};
}

TestFunction one_minus_cos() {
  return TestFunction{[](const Vector& z) { return 1.0 - std::cos(z[0]); }, Vector::Zero(1),
                      Matrix::Identity(1, 1), 2.0};
}

// height * clamp(z, 0, 1): f(0) = 0, f(1) = height, flat beyond. The kink at 0 is
// harmless on jump-only sets, where the derivatives at 0 never enter.
TestFunction step_up(double height) {
  return TestFunction{[height](const Vector& z) { return height * std::clamp(z[0], 0.0, 1.0); }, Vector::Zero(1),
                      Matrix::Zero(1, 1), std::abs(height)};
}

// Smooth family with exact derivatives at 0: a (1 - cos z) + b sin z + c z^2 / (1 + z^2).
TestFunction family(double a, double b, double c) {
  Matrix h(1, 1);
  h << a + 2.0 * c;
  return TestFunction{[a, b, c](const Vector& z) {
                        const double x = z[0];
                        return a * (1.0 - std::cos(x)) + b * std::sin(x) + c * x * x / (1.0 + x * x);
                      },
                      Vector::Constant(1, b), h, 2.0 * std::abs(a) + std::abs(b) + std::abs(c)};
}

UncertaintySet random_set(oracle::Rng& rng, std::size_t scenarios) {
  std::vector<Scenario> raw;
  for (std::size_t i = 0; i < scenarios; ++i) {
    JumpMeasure atoms;
    for (int k = 0; k < 2; ++k) atoms.push_back({scalar(rng.uniform(0.2, 2.0) * (k ? -1 : 1)), rng.uniform(0, 1.5)});
    Matrix q(1, 1);
    q << rng.uniform(0.0, 1.0);
    raw.push_back(make_scenario(atoms, scalar(rng.uniform(-1, 1)), q));
  }
  return validate_uncertainty_set(raw);
}

}  // namespace

TEST_CASE("g_operator of the zero function vanishes") {
  oracle::Rng rng(1);
  CHECK(g_operator(zero_fn(1), random_set(rng, 3)) == 0.0);
  CHECK(g_operator(zero_fn(1), GPoissonSpec{0.2}.uncertainty_set()) == 0.0);
}

TEST_CASE("g_operator of 1 - cos with a jump at pi and diffusion sigma") {
  for (double sigma : {0.0, 0.5, 1.3}) {
    Matrix q(1, 1);
    q << sigma;
    const auto set = validate_uncertainty_set({make_scenario({{scalar(M_PI), 1.0}}, scalar(0.0), q)});
    // one jump of rate 1 to f(pi) = 2, plus half the curvature 1 times sigma^2
    const double expected = 1.0 * (1.0 - std::cos(M_PI)) + 0.5 * 1.0 * sigma * sigma;
    CHECK(g_operator(one_minus_cos(), set) == doctest::Approx(2.0 + sigma * sigma / 2).epsilon(1e-15));
    CHECK(g_operator(one_minus_cos(), set) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("g_operator on the G-Poisson set is G_lambda of f(1)") {
  const auto set = GPoissonSpec{0.5}.uncertainty_set();
  const auto down = g_operator_argmax(step_up(-1.0), set);
  CHECK(down.value == doctest::Approx(-0.5));
  CHECK(down.scenario == 0);
  const auto up = g_operator_argmax(step_up(1.0), set);
  CHECK(up.value == doctest::Approx(1.0));
  CHECK(up.scenario == 1);
  for (double a : {-2.0, -0.3, 0.0, 0.7})
    CHECK(g_operator(step_up(a), set) == doctest::Approx(g_lambda(a, 0.5)));
}

TEST_CASE("ties resolve to the lowest scenario index") {
  const auto s = make_scenario({{scalar(1.0), 1.0}}, scalar(0.0));
  const auto set = validate_uncertainty_set({s, s, s});
  CHECK(g_operator_argmax(step_up(1.0), set).scenario == 0);
}

TEST_CASE("test function validation") {
  auto shifted = one_minus_cos();
  shifted.eval = [](const Vector& z) { return 2.0 - std::cos(z[0]); };
  const auto set = GPoissonSpec{0.5}.uncertainty_set();
  CHECK_THROWS_AS(g_operator(shifted, set), Error);
  auto wrong_shape = one_minus_cos();
  wrong_shape.grad0 = Vector::Zero(2);
  CHECK_THROWS_AS(g_operator(wrong_shape, set), Error);
}

TEST_CASE("g_operator is monotone, sub-additive and positively homogeneous") {
  oracle::Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto set = random_set(rng, 3);
    const auto f = family(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const auto g = family(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    // f + c z^2/(1+z^2) with c >= 0 dominates f and touches it at 0
    const auto above = f + family(0.0, 0.0, rng.uniform(0, 1));
    const double lam = rng.uniform(0, 3);

    CHECK(g_operator(above, set) >= g_operator(f, set) - 1e-12);
    CHECK(g_operator(f + g, set) <= g_operator(f, set) + g_operator(g, set) + 1e-12);
    CHECK(g_operator(lam * f, set) == doctest::Approx(lam * g_operator(f, set)).epsilon(1e-12));
  }
}

TEST_CASE("small-time quotient of the zero function is zero") {
  const auto set = GPoissonSpec{0.5}.uncertainty_set();
  const GridSpec grid(scalar(-3.0), scalar(5.0), {401});
  for (double delta : {0.1, 0.05, 0.025}) CHECK(small_time_quotient(zero_fn(1), set, delta, grid, {}) == 0.0);
}

TEST_CASE("small-time quotient approaches g_operator on the G-Poisson set") {
  const auto set = GPoissonSpec{0.5}.uncertainty_set();
  const GridSpec grid(scalar(-4.0), scalar(6.0), {501});
  for (double height : {1.0, -1.0}) {
    const auto f = step_up(height);
    const double target = g_operator(f, set);
    double previous = INFINITY;
    for (double delta : {0.1, 0.05, 0.025}) {
      const double err = std::abs(small_time_quotient(f, set, delta, grid, {}) - target);
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 5e-2);
  }
}

TEST_CASE("small-time quotient requires the jumps inside the box") {
  const auto set = GPoissonSpec{0.5}.uncertainty_set();
  const GridSpec grid(scalar(-1.0), scalar(0.5), {31});
  CHECK_THROWS_AS(small_time_quotient(step_up(1.0), set, 0.1, grid, {}), Error);
  CHECK_THROWS_AS(small_time_quotient(step_up(1.0), set, 0.0, GridSpec(scalar(-2), scalar(2), {81}), {}), Error);
}
