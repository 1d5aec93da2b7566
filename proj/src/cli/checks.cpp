#include "glevy/cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "glevy/cli/run.hpp"
#include "glevy/expectation_engine.hpp"
#include "glevy/gpoisson.hpp"
#include "glevy/levy_khintchine.hpp"
#include "glevy/matrix_support.hpp"
#include "glevy/payoffs.hpp"
#include "glevy/pide_solver.hpp"

namespace glevy::cli {

namespace {

class Report {
 public:
  explicit Report(std::vector<CheckRow>& rows) : rows_(rows) {}
  // measured is a deviation; passes when measured <= threshold
  void at_most(const std::string& suite, const std::string& name, double measured, double threshold) {
    rows_.push_back({suite, name, measured, threshold, measured <= threshold});
  }

 private:
  std::vector<CheckRow>& rows_;
};

double max_excess(const Vector& a, const Vector& b) { return (a - b).maxCoeff(); }  // max(a - b)
double max_gap(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

void core_suite(Report& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GridSpec grid(Vector::Constant(2, -2.0), Vector::Constant(2, 3.0), {11, 7});
  const auto n = static_cast<Eigen::Index>(grid.node_count());
  Vector lo(n), hi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lo[i] = u(rng);
    hi[i] = lo[i] + 0.5 * (u(rng) + 1.0);
  }
  const GridFunction g1(grid, lo), g2(grid, hi), combo(grid, 2.5 * lo + hi);

  double monotone = 0.0, linear = 0.0;
  for (int k = 0; k < 500; ++k) {
    const Vector x = Vector::NullaryExpr(2, [&](Eigen::Index) { return 4.0 * u(rng) + 0.5; });
    monotone = std::max(monotone, interpolate(g1, x) - interpolate(g2, x));
    linear = std::max(linear, std::abs(interpolate(combo, x) - 2.5 * interpolate(g1, x) - interpolate(g2, x)));
  }
  r.at_most("core", "interpolate_monotone", monotone, 1e-12);
  r.at_most("core", "interpolate_linear", linear, 1e-12);

  const auto set = GPoissonSpec{0.5}.uncertainty_set();
  const auto again = validate_uncertainty_set(set.scenarios());
  r.at_most("core", "validate_idempotent", std::abs(again.mass_bound() - set.mass_bound()), 0.0);
}

TestFunction random_test_function(std::mt19937_64& rng, double c_min = -1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vector a = Vector::NullaryExpr(2, [&](Eigen::Index) { return u(rng); });
  const Vector b = Vector::NullaryExpr(2, [&](Eigen::Index) { return u(rng); });
  const double c = c_min + (1.0 - c_min) * 0.5 * (u(rng) + 1.0);
  const double s = u(rng);
  // c (1 - cos<a,z>) + s sin<b,z>
  return TestFunction{[a, b, c, s](const Vector& z) { return c * (1.0 - std::cos(a.dot(z))) + s * std::sin(b.dot(z)); },
                      s * b, c * a * a.transpose(), std::abs(2.0 * c) + std::abs(s)};
}

UncertaintySet random_set(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Scenario> raw;
  for (int k = 0; k < 3; ++k) {
    JumpMeasure atoms;
    for (int j = 0; j < 2; ++j)
      atoms.push_back({Vector::NullaryExpr(2, [&](Eigen::Index) { return 2.0 * u(rng); }), 0.5 * (u(rng) + 1.0)});
    Matrix q = Matrix::NullaryExpr(2, 2, [&](Eigen::Index, Eigen::Index) { return 0.5 * u(rng); });
    raw.push_back(make_scenario(atoms, Vector::NullaryExpr(2, [&](Eigen::Index) { return u(rng); }), q));
  }
  return validate_uncertainty_set(raw);
}

void generator_suite(Report& r, std::mt19937_64& rng) {
  double sub = -1.0, hom = 0.0, mono = -1.0;
  for (int k = 0; k < 200; ++k) {
    const auto set = random_set(rng);
    const auto f = random_test_function(rng);
    const auto g = random_test_function(rng);
    const auto h = random_test_function(rng);
    const TestFunction nonneg{[e = h.eval](const Vector& z) { return std::max(0.0, e(z)); }, Vector::Zero(2),
                              Matrix::Zero(2, 2), h.bound};
    sub = std::max(sub, g_operator(f + g, set) - g_operator(f, set) - g_operator(g, set));
    hom = std::max(hom, std::abs(g_operator(2.5 * f, set) - 2.5 * g_operator(f, set)));
    // f + nonneg dominates f at every atom with identical derivatives at 0
    const TestFunction bigger{[e = f.eval, p = nonneg.eval](const Vector& z) { return e(z) + p(z); }, f.grad0,
                              f.hess0, f.bound + nonneg.bound};
    mono = std::max(mono, g_operator(f, set) - g_operator(bigger, set));
  }
  r.at_most("levy_khintchine", "subadditive", sub, 1e-12);
  r.at_most("levy_khintchine", "positively_homogeneous", hom, 1e-12);
  r.at_most("levy_khintchine", "monotone", mono, 1e-12);

  // G-Poisson quotient against the Levy-Khintchine value
  const auto gp = GPoissonSpec{0.5}.uncertainty_set();
  const TestFunction bump{[](const Vector& z) {
                            const double r2 = (z[0] - 1.0) * (z[0] - 1.0) / 0.25;
                            return r2 < 1.0 ? std::pow(1.0 - r2, 4) : 0.0;
                          },
                          Vector::Zero(1), Matrix::Zero(1, 1), 1.0};
  const GridSpec grid(Vector::Constant(1, -4.0), Vector::Constant(1, 8.0), {601});
  SchemeConfig cfg;
  const double quotient = small_time_quotient(bump, gp, 0.025, grid, cfg);
  r.at_most("levy_khintchine", "quotient_vs_g_operator", std::abs(quotient - g_operator(bump, gp)), 5e-2);
}

void gpoisson_suite(Report& r) {
  double identity = 0.0;
  for (double a = -3.0; a <= 3.0; a += 0.25)
    for (double lambda = 0.0; lambda <= 1.0; lambda += 0.125)
      identity = std::max(identity, std::abs(g_lambda(a, lambda) - std::max(a, lambda * a)));
  r.at_most("gpoisson", "g_lambda_is_max", identity, 0.0);

  const Payoff id = payoffs::clip_linear(Vector::Ones(1), -1e6, 1e6);
  const Payoff neg = payoffs::clip_linear(-Vector::Ones(1), -1e6, 1e6);
  r.at_most("gpoisson", "mean_upper",
            std::abs(gpoisson_closed_form(id, Monotonicity::Increasing, 0.5, 1.0, 0.0, 1e-12) - 1.0), 1e-9);
  r.at_most("gpoisson", "mean_lower",
            std::abs(-gpoisson_closed_form(neg, Monotonicity::Decreasing, 0.5, 1.0, 0.0, 1e-12) - 0.5), 1e-9);
  const Payoff ramp = payoffs::ramp(Vector::Ones(1), 0.5, 2.0, 1.0);
  r.at_most("gpoisson", "lambda_one_directions_agree",
            std::abs(gpoisson_closed_form(ramp, Monotonicity::Increasing, 1.0, 1.3, 0.2, 1e-13) -
                     gpoisson_closed_form(ramp, Monotonicity::Decreasing, 1.0, 1.3, 0.2, 1e-13)),
            1e-10);

  const GridSpec grid(Vector::Constant(1, -10.0), Vector::Constant(1, 50.0), {1201});
  const auto set = GPoissonSpec{0.5}.uncertainty_set();
  const Payoff clipped = payoffs::clip_linear(Vector::Ones(1), -40.0, 40.0);
  const GridFunction phi0 = sample(clipped, grid);
  const auto series = series_solution(phi0, {{{Vector::Ones(1), 0.5}}, {{Vector::Ones(1), 1.0}}}, 1.0, 1e-10);
  SchemeConfig cfg;
  const auto pde = solve(phi0, set, cfg, {1.0});
  const Vector origin = Vector::Zero(1);
  r.at_most("gpoisson", "series_vs_solver",
            std::abs(interpolate(series, origin) - interpolate(pde.snapshots.back(), origin)), 5 * 0.05 + 1e-10);
}

void solver_suite(Report& r, int threads) {
  // G-Poisson jumps with diffusion uncertainty
  const auto set = validate_uncertainty_set(
      {make_scenario({{Vector::Ones(1), 0.5}}, Vector::Constant(1, 0.1), Matrix::Constant(1, 1, 0.5)),
       make_scenario({{Vector::Ones(1), 1.0}}, Vector::Zero(1), Matrix::Constant(1, 1, 0.8))});
  const GridSpec grid(Vector::Constant(1, -8.0), Vector::Constant(1, 12.0), {401});
  SchemeConfig cfg;
  cfg.final_time = 0.5;
  cfg.threads = threads;
  const std::vector<double> times{0.25, 0.5};

  const Payoff phi = payoffs::ramp(Vector::Ones(1), 0.0, 2.0, 1.0);
  const Payoff psi = payoffs::bump(Vector::Constant(1, 1.0), 1.5, -0.7);
  const GridFunction gphi = sample(phi, grid), gpsi = sample(psi, grid);
  auto run = [&](const Vector& v) { return solve(GridFunction(grid, v), set, cfg, times).snapshots.back().values(); };

  const Vector uphi = run(gphi.values()), upsi = run(gpsi.values());
  const Vector ones = Vector::Ones(gphi.values().size());

  r.at_most("pide_solver", "monotone", max_excess(upsi, run(gpsi.values().cwiseMax(gphi.values()))), 1e-12);
  r.at_most("pide_solver", "constant", max_gap(run(1.7 * ones), 1.7 * ones), 1e-12);
  r.at_most("pide_solver", "homogeneous", max_gap(run(2.5 * gphi.values()), 2.5 * uphi), 1e-12);
  r.at_most("pide_solver", "subadditive", max_excess(run(gphi.values() + gpsi.values()), uphi + upsi), 1e-12);
  r.at_most("pide_solver", "cash_translation", max_gap(run(gphi.values() + 1.5 * ones), uphi + 1.5 * ones), 1e-12);
  double convex = -1.0;
  for (double lambda : {0.25, 0.5, 0.75})
    convex = std::max(convex, max_excess(run(lambda * gphi.values() + (1 - lambda) * gpsi.values()),
                                         lambda * uphi + (1 - lambda) * upsi));
  r.at_most("pide_solver", "convex", convex, 1e-12);
  const double lo = gphi.values().minCoeff(), hi = gphi.values().maxCoeff();
  r.at_most("pide_solver", "maximum_principle", std::max(lo - uphi.minCoeff(), uphi.maxCoeff() - hi), 1e-12);

  // u(t+s, x) against the solve restarted from u(t, x + .)
  const auto full = solve(gphi, set, cfg, times);
  SchemeConfig half = cfg;
  half.final_time = 0.25;
  double semigroup = 0.0;
  for (double x : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    const GridFunction& mid = full.snapshots.front();
    const Payoff shifted{[&mid, x](const Vector& y) { return interpolate(mid, y + Vector::Constant(1, x)); },
                         phi.bound, phi.lipschitz};
    const double restarted = evaluate(solve(shifted, grid, set, half, {0.25}), 0.25, Vector::Zero(1));
    semigroup = std::max(semigroup, std::abs(evaluate(full, 0.5, Vector::Constant(1, x)) - restarted));
  }
  r.at_most("pide_solver", "semigroup", semigroup, 5 * grid.spacing(0));
}

void engine_suite(Report& r, int threads) {
  const auto set = validate_uncertainty_set({make_scenario({{Vector::Ones(1), 1.0}}, Vector::Zero(1))});
  SchemeConfig cfg;
  cfg.threads = threads;
  const GridSpec grid = increment_grid(set, 0.7, 0.05);
  const Payoff phi = payoffs::ramp(Vector::Ones(1), 0.5, 2.0, 1.0);

  EngineOptions opts;
  opts.grids = {grid};
  const double engine = expectation(CylinderFunctional{{0.7}, phi.eval, phi.bound, phi.lipschitz, 1}, set, cfg, opts);
  cfg.final_time = 0.7;
  const double direct = evaluate(solve(phi, grid, set, cfg, {0.7}), 0.7, Vector::Zero(1));
  r.at_most("expectation_engine", "step1_consistency", std::abs(engine - direct), 1e-12);

  const double c = expectation(CylinderFunctional{{0.4, 1.0}, [](const Vector&) { return -0.3; }, 0.3, 0.0, 1}, set,
                               cfg);
  r.at_most("expectation_engine", "constant", std::abs(c + 0.3), 1e-12);
}

Matrix random_symmetric(std::mt19937_64& rng, int n, double lo, double hi) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> eig(lo, hi);
  const Matrix a = Matrix::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
  const Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ();
  const Vector mu = Vector::NullaryExpr(n, [&](Eigen::Index) { return eig(rng); });
  return q * mu.asDiagonal() * q.transpose();
}

void matrix_suite(Report& r, std::mt19937_64& rng) {
  double worst = -1.0;
  std::normal_distribution<double> normal;
  for (int n : {2, 4, 8}) {
    for (double gamma : {0.05, 0.1, 0.2}) {
      for (int k = 0; k < 100; ++k) {
        const Matrix y = random_symmetric(rng, n, -3.0 / gamma, 0.95 / gamma);
        const Matrix b = Matrix::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
        const Matrix x = y - b * b.transpose();
        const Matrix xg = gamma_transform(x, gamma), yg = gamma_transform(y, gamma);
        const Matrix floor = -Matrix::Identity(n, n) / gamma;
        const double scale = std::max({1.0, xg.norm(), yg.norm()});
        worst = std::max({worst, -min_eigenvalue(yg - xg) / scale, -min_eigenvalue(xg - x) / scale,
                          -min_eigenvalue(xg - floor) / scale});
      }
    }
  }
  r.at_most("matrix_support", "gamma_ordering", worst, 1e-9);

  double square = 0.0, scaling = 0.0;
  for (int n = 1; n <= 5; ++n) {
    for (int d = 1; d <= 3; ++d) {
      const Matrix j = j_matrix(n, d);
      square = std::max(square, (j * j - n * j).cwiseAbs().maxCoeff());
      const double gamma = 0.5 / n;
      scaling = std::max(scaling, (gamma_transform(j, gamma) - j / (1.0 - n * gamma)).cwiseAbs().maxCoeff());
    }
  }
  r.at_most("matrix_support", "j_square", square, 1e-12);
  r.at_most("matrix_support", "j_gamma_scaling", scaling, 1e-10);
}

}  // namespace

std::vector<CheckRow> run_checks(std::uint64_t seed, int threads) {
  std::vector<CheckRow> rows;
  Report report(rows);
  std::mt19937_64 rng(seed);
  core_suite(report, rng);
  generator_suite(report, rng);
  gpoisson_suite(report);
  solver_suite(report, threads);
  engine_suite(report, threads);
  matrix_suite(report, rng);
  return rows;
}

void write_check_report(const std::vector<CheckRow>& rows, std::ostream& out) {
  out << "suite,name,measured,threshold,result\n";
  for (const auto& row : rows)
    out << row.suite << ',' << row.name << ',' << format_double(row.measured) << ',' << format_double(row.threshold)
        << ',' << (row.pass ? "PASS" : "FAIL") << '\n';
}

}  // namespace glevy::cli
