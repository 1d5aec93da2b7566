#pragma once

#include <algorithm>
#include <vector>

#include "glevy/grid.hpp"

namespace glevy {

/// Unit jumps with intensity ranging over [lambda_low, 1].
struct GPoissonSpec {
  double lambda_low = 0.0;

  /// Throws LambdaOutOfRange unless 0 <= lambda_low <= 1.
  void validate() const;

  /// Two rate-scaled unit-jump scenarios, rates {lambda_low, 1}. The sup of
  /// a linear functional over l in [lambda_low, 1] is attained at an endpoint,
  /// so the two extremes realize the whole intensity interval.
  UncertaintySet uncertainty_set() const;
};

/// G_lambda(a) = a^+ - lambda a^-
template <typename Scalar>
Scalar g_lambda(Scalar a, Scalar lambda) {
  if (!(lambda >= Scalar(0) && lambda <= Scalar(1)))
    throw Error(ErrorCode::LambdaOutOfRange, "lambda must lie in [0, 1]");
  return std::max(a, Scalar(0)) - lambda * std::max(-a, Scalar(0));
}

enum class Monotonicity { Increasing, Decreasing };

/// E[phi(x + B_t)] for a monotone one-dimensional phi: the Poisson series at
/// intensity 1 (increasing) or lambda (decreasing). Terms are summed until the
/// remaining Poisson mass times bound(phi) is below tol.
/// Throws LambdaOutOfRange, InvalidTolerance, InvalidArgument (t < 0 or t * rate > 700).
double gpoisson_closed_form(const Payoff& phi, Monotonicity direction, double lambda, double t, double x,
                            double tol);

/// First N whose geometric bound on sum_{i>N} growth^i / i! * bound drops below tol.
int series_truncation_level(double growth, double bound, double tol);

/// sum_{i<=N} t^i / i! phi_i on the grid of phi0, where
///   phi_{i+1}(y) = max_v sum_k w_k (phi_i(y + z_k) - phi_i(y)).
/// N is the first level whose tail bound sum_{i>N} (2 Lambda t)^i / i! * bound(phi0)
/// drops below tol, Lambda the largest total rate in `measures`.
GridFunction series_solution(const GridFunction& phi0, const std::vector<JumpMeasure>& measures, double t,
                             double tol, int threads = 1);

}  // namespace glevy
