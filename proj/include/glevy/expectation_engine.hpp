#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "glevy/grid.hpp"

namespace glevy {

/// xi = payoff(B_{t1}, B_{t2} - B_{t1}, ..., B_{tm} - B_{t(m-1)}).
/// The payoff takes the m increments concatenated into one vector of length m * dim.
struct CylinderFunctional {
  std::vector<double> times;
  std::function<double(const Vector&)> payoff;
  double bound = 0.0;
  double lipschitz = 0.0;
  Eigen::Index dim = 1;

  std::size_t increments() const { return times.size(); }

  /// Throws InvalidArgument unless the times are positive and strictly increasing,
  /// m >= 1 and the bounds are finite.
  void validate() const;
};

struct EngineOptions {
  /// Spacing of the automatically sized increment grids.
  double dx = 0.05;
  /// Explicit grid per increment; when empty, increment_grid() sizes them.
  std::vector<GridSpec> grids;
  /// Largest tensor product of all increment grids.
  std::size_t node_budget = 10'000'000;
  /// Largest m * dim.
  int max_axes = 3;
};

/// Box through the origin that holds the increment over `horizon` with
/// negligible mass outside: per axis, n_max jumps of the largest atom in each
/// direction (n_max the 1e-10 Poisson quantile at the largest total rate),
/// |q| horizon of drift, 6 standard deviations of diffusion, plus one jump and
/// four cells of margin against the clamped boundary.
GridSpec increment_grid(const UncertaintySet& set, double horizon, double dx);

/// The grids expectation() would use for xi.
std::vector<GridSpec> increment_grids(const CylinderFunctional& xi, const UncertaintySet& set,
                                      const EngineOptions& opts = {});

/// Sublinear expectation of xi by backward recursion: the last increment is
/// integrated out by solving the integro-PDE over t_k - t_(k-1) with the
/// earlier increments frozen at the nodes of their grids.
/// Throws DimensionOverflow when the tensor grid exceeds the options' limits.
double expectation(const CylinderFunctional& xi, const UncertaintySet& set, const SchemeConfig& cfg,
                   const EngineOptions& opts = {});

/// E[xi | F_{t_j}] as a function of the first j increments, tabulated on the
/// tensor product of their grids (axes of increment 1 first). 1 <= j < m.
GridFunction conditional_expectation(const CylinderFunctional& xi, std::size_t j, const UncertaintySet& set,
                                     const SchemeConfig& cfg, const EngineOptions& opts = {});

}  // namespace glevy
