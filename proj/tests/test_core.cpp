#include <doctest.h>

#include <cmath>
#include <limits>

#include "glevy/core.hpp"
#include "glevy/gpoisson.hpp"
#include "glevy/grid.hpp"
#include "glevy/payoffs.hpp"
#include "oracles.hpp"

using namespace glevy;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

Scenario unit_jump(double rate) { return make_scenario({{vec({1.0}), rate}}, vec({0.0})); }

}  // namespace

TEST_CASE("mass bound of a single unit jump is 1") {
  const auto set = validate_uncertainty_set({unit_jump(1.0)});
  CHECK(set.size() == 1);
  CHECK(set.mass_bound() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mass bound of the G-Poisson pair with lambda 0.5 is 1") {
  const auto set = validate_uncertainty_set({unit_jump(0.5), unit_jump(1.0)});
  CHECK(set.mass_bound() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(GPoissonSpec{0.5}.uncertainty_set().mass_bound() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mass bound sums jump moment, drift norm and diffusion trace") {
  Matrix q(2, 2);
  q << 1.0, 0.0, 0.5, 2.0;
  const auto s = make_scenario({{vec({3.0, 4.0}), 0.5}}, vec({0.0, -2.0}), q);
  const auto set = validate_uncertainty_set({s});
  // 0.5*5 + 2 + (1 + 0.25 + 4)
  CHECK(set.mass_bound() == doctest::Approx(9.75).epsilon(1e-14));
  CHECK(set.max_jump_norm() == doctest::Approx(5.0));
  CHECK(set.max_total_rate() == doctest::Approx(0.5));
}

TEST_CASE("validation rejects each malformed input with its own code") {
  CHECK(code_of([] { validate_uncertainty_set({}); }) == ErrorCode::EmptySet);
  CHECK(code_of([] { validate_uncertainty_set({unit_jump(-1.0)}); }) == ErrorCode::NegativeRate);
  CHECK(code_of([] { validate_uncertainty_set({make_scenario({{vec({0.0}), 1.0}}, vec({0.0}))}); }) ==
        ErrorCode::ZeroJump);
  CHECK(code_of([] {
          validate_uncertainty_set({make_scenario({{vec({1.0}), std::numeric_limits<double>::quiet_NaN()}},
                                                  vec({0.0}))});
        }) == ErrorCode::NonFinite);
  CHECK(code_of([] {
          validate_uncertainty_set({make_scenario({}, vec({std::numeric_limits<double>::infinity()}))});
        }) == ErrorCode::NonFinite);
  CHECK(code_of([] {
          validate_uncertainty_set({unit_jump(1.0), make_scenario({}, vec({0.0, 0.0}))});
        }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { validate_uncertainty_set({make_scenario({{vec({1.0, 0.0}), 1.0}}, vec({0.0}))}); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(to_string(ErrorCode::NegativeRate) == std::string("NEGATIVE_RATE"));
}

TEST_CASE("zero rate atoms are accepted") {
  const auto set = validate_uncertainty_set({unit_jump(0.0)});
  CHECK(set.mass_bound() == 0.0);
}

TEST_CASE("validation is idempotent") {
  Matrix q(1, 1);
  q << 0.7;
  std::vector<Scenario> raw{unit_jump(0.3), make_scenario({{vec({-2.0}), 0.25}}, vec({0.1}), q)};
  const auto once = validate_uncertainty_set(raw);
  const auto twice = validate_uncertainty_set(once.scenarios());
  REQUIRE(twice.size() == once.size());
  CHECK(twice.mass_bound() == once.mass_bound());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(twice[i].drift == once[i].drift);
    CHECK(twice[i].diffusion == once[i].diffusion);
    REQUIRE(twice[i].atoms.size() == once[i].atoms.size());
    for (std::size_t k = 0; k < once[i].atoms.size(); ++k) {
      CHECK(twice[i].atoms[k].size == once[i].atoms[k].size);
      CHECK(twice[i].atoms[k].rate == once[i].atoms[k].rate);
    }
  }
}

TEST_CASE("scheme config validation") {
  SchemeConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.cfl_safety = 1.5;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
  cfg = {};
  cfg.tolerance = 0.0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidTolerance);
  cfg = {};
  cfg.final_time = -1.0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("grid construction and indexing") {
  const GridSpec g(vec({-1.0, 0.0}), vec({1.0, 3.0}), {5, 4});
  CHECK(g.node_count() == 20);
  CHECK(g.spacing(0) == doctest::Approx(0.5));
  CHECK(g.spacing(1) == doctest::Approx(1.0));
  for (std::size_t n = 0; n < g.node_count(); ++n) CHECK(g.flat_index(g.multi_index(n)) == n);
  CHECK(g.node(1)[0] == doctest::Approx(-0.5));  // axis 0 runs fastest
  CHECK(g.node(5)[1] == doctest::Approx(1.0));
  CHECK(g.nearest_node(vec({0.1, 2.2})) == g.flat_index({2, 2}));
  CHECK(code_of([] { GridSpec(vec({0.0}), vec({0.0}), {5}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { GridSpec(vec({0.0}), vec({1.0}), {2}); }) == ErrorCode::InvalidArgument);

  const auto o = GridSpec::through_origin(vec({0.93}), vec({2.01}), 0.1);
  CHECK(o.lower()[0] == doctest::Approx(-1.0));
  CHECK(o.upper()[0] == doctest::Approx(2.1));
  CHECK(o.coordinate(0, 10) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("interpolate returns stored values at nodes") {
  const GridSpec g(vec({-1.0, -2.0}), vec({1.0, 2.0}), {9, 11});
  oracle::Rng rng(7);
  const Vector values = rng.vector(static_cast<Eigen::Index>(g.node_count()), -3.0, 3.0);
  const GridFunction f(g, values);
  for (std::size_t n = 0; n < g.node_count(); ++n) CHECK(interpolate(f, g.node(n)) == values[n]);
}

TEST_CASE("interpolate is exact on linear data") {
  const GridSpec g(vec({-1.0, -2.0, 0.0}), vec({1.0, 2.0, 1.0}), {9, 11, 5});
  const Vector a = vec({0.3, -1.7, 2.5});
  const double b = 0.4;
  Vector values(static_cast<Eigen::Index>(g.node_count()));
  for (std::size_t n = 0; n < g.node_count(); ++n) values[n] = a.dot(g.node(n)) + b;
  const GridFunction f(g, values);
  oracle::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    Vector x(3);
    x << rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(0, 1);
    CHECK(std::abs(interpolate(f, x) - (a.dot(x) + b)) <= 1e-12);
  }
}

TEST_CASE("interpolate clamps points outside the box") {
  const GridSpec g(vec({0.0}), vec({2.0}), {5});
  const GridFunction f(g, vec({1.0, 2.0, 4.0, 8.0, 16.0}));
  CHECK(interpolate(f, vec({5.0})) == 16.0);
  CHECK(interpolate(f, vec({-3.0})) == 1.0);
  CHECK(interpolate(f, vec({0.75})) == doctest::Approx(3.0));

  const GridSpec g2(vec({0.0, 0.0}), vec({1.0, 1.0}), {3, 3});
  Vector v(9);
  v << 0, 1, 2, 3, 4, 5, 6, 7, 8;
  const GridFunction f2(g2, v);
  CHECK(interpolate(f2, vec({9.0, 0.5})) == doctest::Approx(5.0));
  CHECK(interpolate(f2, vec({0.25, -9.0})) == doctest::Approx(0.5));
}

TEST_CASE("interpolation is monotone, additive and positively homogeneous") {
  const GridSpec g(vec({-1.0, -1.0}), vec({1.0, 1.0}), {7, 6});
  oracle::Rng rng(3);
  const auto n = static_cast<Eigen::Index>(g.node_count());
  for (int trial = 0; trial < 20; ++trial) {
    const Vector u = rng.vector(n, -1.0, 1.0);
    const Vector w = rng.vector(n, -1.0, 1.0);
    const Vector above = u + rng.vector(n, 0.0, 0.5);
    const double c = rng.uniform(0.0, 3.0);
    const GridFunction fu(g, u), fw(g, w), fa(g, above), fsum(g, u + w), fscaled(g, c * u);
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.vector(2, -1.5, 1.5);
      CHECK(interpolate(fa, x) >= interpolate(fu, x));
      CHECK(std::abs(interpolate(fsum, x) - interpolate(fu, x) - interpolate(fw, x)) <= 1e-12);
      CHECK(std::abs(interpolate(fscaled, x) - c * interpolate(fu, x)) <= 1e-12);
    }
  }
}

TEST_CASE("grid function rejects bad data") {
  const GridSpec g(vec({0.0}), vec({1.0}), {3});
  CHECK(code_of([&] { GridFunction(g, vec({0.0, 1.0})); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { GridFunction(g, vec({0.0, std::nan(""), 1.0})); }) == ErrorCode::NonFinite);
  CHECK(code_of([&] { interpolate(GridFunction(g, vec({0.0, 1.0, 2.0})), vec({0.0, 0.0})); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("payoff spot checks catch wrong declarations") {
  const GridSpec g(vec({-5.0}), vec({5.0}), {101});
  const auto good = payoffs::clip_linear(vec({1.0}), -2.0, 3.0);
  CHECK(good.bound == doctest::Approx(3.0));
  CHECK(check_payoff(good, g, 1).ok());

  Payoff lying = good;
  lying.bound = 1.0;
  CHECK(check_payoff(lying, g, 1).max_bound_excess == doctest::Approx(2.0));
  lying = good;
  lying.lipschitz = 0.5;
  CHECK(check_payoff(lying, g, 1).max_lipschitz_excess > 0.0);
}

TEST_CASE("named payoffs") {
  const auto ramp = payoffs::ramp(vec({1.0}), 0.5, 1.0, 2.0);
  CHECK(ramp(vec({0.0})) == 0.0);
  CHECK(ramp(vec({1.0})) == doctest::Approx(1.0));
  CHECK(ramp(vec({9.0})) == doctest::Approx(2.0));
  const auto quad = payoffs::quadratic_clip(-2.0, 4.0);
  CHECK(quad(vec({1.0})) == doctest::Approx(-2.0));
  CHECK(quad(vec({5.0})) == doctest::Approx(-8.0));
  const auto tab = payoffs::table(vec({1.0}), {{0.0, 1.0}, {1.0, 3.0}, {2.0, 0.0}});
  CHECK(tab(vec({-4.0})) == 1.0);
  CHECK(tab(vec({0.5})) == doctest::Approx(2.0));
  CHECK(tab(vec({1.5})) == doctest::Approx(1.5));
  CHECK(tab(vec({7.0})) == 0.0);
  CHECK(tab.bound == doctest::Approx(3.0));
  CHECK(tab.lipschitz == doctest::Approx(3.0));
  const auto tent = payoffs::bump(vec({1.0, 0.0}), 2.0, 4.0);
  CHECK(tent(vec({1.0, 0.0})) == doctest::Approx(4.0));
  CHECK(tent(vec({1.0, 1.0})) == doctest::Approx(2.0));
  CHECK(tent(vec({4.0, 0.0})) == 0.0);
  CHECK(payoffs::constant(2.5)(vec({3.0})) == 2.5);
}
