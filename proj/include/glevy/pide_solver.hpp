#pragma once

#include <vector>

#include "glevy/grid.hpp"

namespace glevy {

struct SolveResult {
  std::vector<GridFunction> snapshots;  // ordered by time_label
  double dt_used = 0.0;                 // full (unshortened) step
  long steps = 0;
};

/// Discrete generator of one scenario applied to g at every node:
///   sum_k w_k (g(x + z_k) - g(x)) + <q, Dg> + 1/2 tr(Q Q^T D^2 g)
/// with clamped interpolation for the jump targets, upwind drift and the
/// monotone 7-point stencil for cross derivatives.
/// Throws GridTooCoarse if an atom moves less than half a cell and
/// NonmonotoneDiffusion if Q Q^T is not diagonally dominant for the grid.
Vector apply_generator(const GridFunction& g, const Scenario& s);

/// Full explicit step: min(cfl_safety / max_scenario rate, max_dt).
/// Throws CflUnsatisfiable when the step underflows.
double stable_time_step(const GridSpec& grid, const UncertaintySet& set, const SchemeConfig& cfg);

/// Forward Euler for du/dt = sup_U L u with u(0) = initial, snapshots at
/// every entry of `output_times` (each in [0, cfg.final_time]; empty means
/// {final_time}). Steps that would overshoot a snapshot time are shortened.
SolveResult solve(const GridFunction& initial, const UncertaintySet& set, const SchemeConfig& cfg,
                  std::vector<double> output_times = {});

/// Samples `phi` on `grid` and solves.
SolveResult solve(const Payoff& phi, const GridSpec& grid, const UncertaintySet& set, const SchemeConfig& cfg,
                  std::vector<double> output_times = {});

/// Interpolated value of the snapshot whose time label equals t.
/// Throws NoSnapshot when no snapshot was taken at t.
double evaluate(const SolveResult& result, double t, const Vector& x);

}  // namespace glevy
