#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "glevy/error.hpp"

namespace glevy {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One point mass of a finite jump measure: `rate` jumps of size `size` per unit time.
struct JumpAtom {
  Vector size;
  double rate = 0.0;
};

using JumpMeasure = std::vector<JumpAtom>;

/// One element (nu, q, Q) of the uncertainty set. The jump measure is the
/// finite sum of rate-weighted Dirac masses in `atoms`.
struct Scenario {
  JumpMeasure atoms;
  Vector drift;
  Matrix diffusion;

  Eigen::Index dim() const { return drift.size(); }

  /// Total jump intensity, sum of rates.
  double total_rate() const;

  /// First absolute moment of the jump measure, sum of rate * |size|.
  double first_moment() const;

  /// Q Q^T.
  Matrix covariance() const { return diffusion * diffusion.transpose(); }

  /// sum_k w_k |z_k| + |q| + tr[Q Q^T]
  double mass() const;
};

/// Validated, nonempty, dimension-consistent finite family of scenarios.
/// Only obtainable through validate_uncertainty_set.
class UncertaintySet {
 public:
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  std::size_t size() const { return scenarios_.size(); }
  const Scenario& operator[](std::size_t i) const { return scenarios_[i]; }
  Eigen::Index dim() const { return scenarios_.front().dim(); }

  /// max over scenarios of sum_k w_k |z_k| + |q| + tr[Q Q^T]
  double mass_bound() const { return mass_bound_; }

  /// Largest total jump rate over the scenarios.
  double max_total_rate() const;

  /// Largest |z_k| over every atom of every scenario (0 when there are no atoms).
  double max_jump_norm() const;

 private:
  friend UncertaintySet validate_uncertainty_set(std::vector<Scenario> raw);
  UncertaintySet(std::vector<Scenario> scenarios, double mass_bound)
      : scenarios_(std::move(scenarios)), mass_bound_(mass_bound) {}

  std::vector<Scenario> scenarios_;
  double mass_bound_;
};

/// Checks the raw scenario list and computes its mass bound.
/// Throws Error with EmptySet, NegativeRate, ZeroJump, NonFinite or DimensionMismatch.
UncertaintySet validate_uncertainty_set(std::vector<Scenario> raw);

/// Builds a scenario from its three parts; `diffusion` defaults to zero.
Scenario make_scenario(JumpMeasure atoms, Vector drift, std::optional<Matrix> diffusion = std::nullopt);

/// Bounded Lipschitz initial datum. `bound` and `lipschitz` are caller-declared;
/// check_payoff spot-checks them.
struct Payoff {
  std::function<double(const Vector&)> eval;
  double bound = 0.0;
  double lipschitz = std::numeric_limits<double>::infinity();

  double operator()(const Vector& x) const { return eval(x); }
};

enum class BoundaryMode { Clamp };

struct SchemeConfig {
  double cfl_safety = 0.9;
  double final_time = 1.0;
  double tolerance = 1e-10;
  BoundaryMode boundary_mode = BoundaryMode::Clamp;
  /// Upper cap on the time step. When unset the solver uses
  /// default_max_dt_factor * (smallest grid spacing).
  std::optional<double> max_dt;
  /// Worker threads for per-node loops; 1 runs inline.
  int threads = 1;

  static constexpr double default_max_dt_factor = 0.2;

  /// Throws InvalidArgument / InvalidTolerance on out-of-range fields.
  void validate() const;
};

}  // namespace glevy
