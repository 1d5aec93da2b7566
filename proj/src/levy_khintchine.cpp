#include "glevy/levy_khintchine.hpp"

#include <cmath>
#include <limits>

#include "glevy/pide_solver.hpp"

namespace glevy {

void TestFunction::validate(Eigen::Index dim) const {
  if (!eval) throw Error(ErrorCode::InvalidArgument, "test function has no evaluator");
  if (grad0.size() != dim || hess0.rows() != dim || hess0.cols() != dim)
    throw Error(ErrorCode::DimensionMismatch, "test function derivatives have the wrong shape");
  if (eval(Vector::Zero(dim)) != 0.0) throw Error(ErrorCode::InvalidArgument, "test function must vanish at 0");
  if (!((hess0 - hess0.transpose()).cwiseAbs().maxCoeff() <= 1e-12))
    throw Error(ErrorCode::InvalidArgument, "test function Hessian must be symmetric");
}

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
  return TestFunction{[fa = a.eval, fb = b.eval](const Vector& x) { return fa(x) + fb(x); }, a.grad0 + b.grad0,
                      a.hess0 + b.hess0, a.bound + b.bound};
}

TestFunction operator*(double factor, const TestFunction& f) {
  return TestFunction{[factor, fe = f.eval](const Vector& x) { return factor * fe(x); }, factor * f.grad0,
                      factor * f.hess0, std::abs(factor) * f.bound};
}

double scenario_generator(const TestFunction& f, const Scenario& s) {
  double jumps = 0.0;
  for (const auto& atom : s.atoms) jumps += atom.rate * f.eval(atom.size);
  return jumps + f.grad0.dot(s.drift) + 0.5 * (f.hess0 * s.covariance()).trace();
}

GeneratorValue g_operator_argmax(const TestFunction& f, const UncertaintySet& set) {
  f.validate(set.dim());
  GeneratorValue best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double v = scenario_generator(f, set[i]);
    if (v > best.value) best = {v, i};
  }
  return best;
}

double small_time_quotient(const TestFunction& f, const UncertaintySet& set, double delta, const GridSpec& grid,
                           SchemeConfig cfg) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  f.validate(set.dim());
  for (const auto& s : set.scenarios())
    for (const auto& atom : s.atoms)
      if (!grid.contains(atom.size))
        throw Error(ErrorCode::GridTooCoarse, "grid box does not contain every jump size");

  cfg.final_time = delta;
  const Payoff lifted{f.eval, f.bound};
  const auto result = solve(lifted, grid, set, cfg, {delta});
  return evaluate(result, delta, Vector::Zero(grid.dim())) / delta;
}

}  // namespace glevy
