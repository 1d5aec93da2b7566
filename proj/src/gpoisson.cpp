#include "glevy/gpoisson.hpp"

#include <cmath>
#include <string>

#include "glevy/parallel.hpp"
#include "stencil.hpp"

namespace glevy {

void GPoissonSpec::validate() const {
  if (!(lambda_low >= 0.0 && lambda_low <= 1.0))
    throw Error(ErrorCode::LambdaOutOfRange, "lambda must lie in [0, 1], got " + std::to_string(lambda_low));
}

UncertaintySet GPoissonSpec::uncertainty_set() const {
  validate();
  const Vector unit = Vector::Ones(1);
  return validate_uncertainty_set({make_scenario({{unit, lambda_low}}, Vector::Zero(1)),
                                   make_scenario({{unit, 1.0}}, Vector::Zero(1))});
}

double gpoisson_closed_form(const Payoff& phi, Monotonicity direction, double lambda, double t, double x,
                            double tol) {
  GPoissonSpec{lambda}.validate();
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidTolerance, "tol must be positive");
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be nonnegative");

  const double mean = (direction == Monotonicity::Increasing ? 1.0 : lambda) * t;
  if (mean > 700.0) throw Error(ErrorCode::InvalidArgument, "Poisson mean too large for the direct series");

  Vector point(1);
  double prob = std::exp(-mean);
  double sum = 0.0;
  for (int i = 0;; ++i) {
    point[0] = x + i;
    sum += prob * phi(point);
    const double next = prob * mean / (i + 1);
    // Remaining mass after term i is at most next / (1 - mean / (i + 2)).
    if (i + 2 > mean) {
      const double tail = next / (1.0 - mean / (i + 2));
      if (tail * phi.bound < tol) break;
    }
    prob = next;
  }
  return sum;
}

int series_truncation_level(double growth, double bound, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidTolerance, "tol must be positive");
  if (growth <= 0.0 || bound <= 0.0) return 0;
  double term = 1.0;  // growth^N / N!
  for (int n = 0;; ++n) {
    const double next = term * growth / (n + 1);
    if (n + 2 > growth && next / (1.0 - growth / (n + 2)) * bound < tol) return n;
    term = next;
  }
}

GridFunction series_solution(const GridFunction& phi0, const std::vector<JumpMeasure>& measures, double t,
                             double tol, int threads) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "t must be nonnegative");
  const auto& grid = phi0.spec();
  const auto d = grid.dim();

  std::vector<Scenario> raw;
  for (const auto& m : measures) raw.push_back(make_scenario(m, Vector::Zero(d)));
  const auto set = validate_uncertainty_set(std::move(raw));

  std::vector<detail::ScenarioStencil> stencils;
  for (const auto& s : set.scenarios()) stencils.emplace_back(grid, s);

  const int levels = series_truncation_level(2.0 * set.max_total_rate() * t, phi0.sup_norm(), tol);

  const auto n = grid.node_count();
  Vector level = phi0.values();
  Vector next(level.size());
  Vector total = level;
  std::vector<Vector> scratch(stencils.size(), Vector(level.size()));
  double weight = 1.0;  // t^i / i!

  for (int i = 1; i <= levels; ++i) {
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t s = 0; s < stencils.size(); ++s)
        stencils[s].apply(std::span<const double>(level.data(), n), std::span<double>(scratch[s].data(), n), begin,
                          end);
      for (std::size_t k = begin; k < end; ++k) {
        const auto j = static_cast<Eigen::Index>(k);
        double best = scratch[0][j];
        for (std::size_t s = 1; s < stencils.size(); ++s) best = std::max(best, scratch[s][j]);
        next[j] = best;
      }
    });
    level.swap(next);
    weight *= t / i;
    total += weight * level;
  }
  return GridFunction(grid, std::move(total), t);
}

}  // namespace glevy
