#pragma once

#include <cstddef>
#include <functional>

#include "glevy/grid.hpp"

namespace glevy {

/// Smooth bounded f with f(0) = 0. Derivatives at the origin are supplied
/// analytically; nothing here differentiates numerically.
struct TestFunction {
  std::function<double(const Vector&)> eval;
  Vector grad0;
  Matrix hess0;
  double bound = 0.0;

  /// Throws InvalidArgument unless eval(0) == 0 exactly and the derivative
  /// shapes match `dim`.
  void validate(Eigen::Index dim) const;

  /// Componentwise sum (values, gradients and Hessians add).
  friend TestFunction operator+(const TestFunction& a, const TestFunction& b);
  /// Scaling by a real factor.
  friend TestFunction operator*(double factor, const TestFunction& f);
};

/// Value of one scenario's bracket:
///   sum_k w_k f(z_k) + <Df(0), q> + 1/2 tr(D^2 f(0) Q Q^T)
double scenario_generator(const TestFunction& f, const Scenario& s);

struct GeneratorValue {
  double value;
  std::size_t scenario;  // maximizer, lowest index on ties
};

/// Levy-Khintchine form of the nonlocal generator: max of scenario_generator over the set.
GeneratorValue g_operator_argmax(const TestFunction& f, const UncertaintySet& set);

inline double g_operator(const TestFunction& f, const UncertaintySet& set) {
  return g_operator_argmax(f, set).value;
}

/// u(delta, 0) / delta where u solves the integro-PDE on `grid` from u(0) = f.
/// Propagates solver errors.
double small_time_quotient(const TestFunction& f, const UncertaintySet& set, double delta, const GridSpec& grid,
                           SchemeConfig cfg);

}  // namespace glevy
