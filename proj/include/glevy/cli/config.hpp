#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glevy/expectation_engine.hpp"
#include "glevy/gpoisson.hpp"
#include "glevy/grid.hpp"
#include "glevy/levy_khintchine.hpp"

namespace glevy::cli {

enum class Command { Solve, GPoisson, Expect, Generator, Check };

/// Error raised while reading a job file. `key` names the offending key for
/// ValidationError, `line` is 1-based for ParseError (0 when not applicable).
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::string key, int line, const std::string& what)
      : Error(code, what), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct PayoffDescriptor {
  std::string kind = "clip-linear";  // clip-linear | indicator-ramp | quadratic-clip | constant | table
  std::optional<Vector> weights;     // defaults to all ones
  double low = -40.0;
  double high = 40.0;
  double start = 0.5;
  double width = 1.0;
  double height = 1.0;
  double scale = 1.0;
  double cap = 36.0;
  double value = 0.0;
  std::vector<std::pair<double, double>> knots;
};

struct TestFunctionDescriptor {
  std::string kind = "one-minus-cos";  // one-minus-cos | bump
  double height = 1.0;
  double center = 1.0;
  double width = 0.5;
};

struct JobConfig {
  Command command = Command::Check;
  Eigen::Index dim = 1;

  std::vector<Scenario> scenarios;  // raw; validated when the job runs
  std::optional<double> lambda;     // G-Poisson intensity interval [lambda, 1]

  PayoffDescriptor payoff;
  std::optional<GridSpec> grid;
  Vector roi_lower;
  Vector roi_upper;
  SchemeConfig scheme;
  std::vector<double> times;

  // gpoisson
  double t = 1.0;
  double x = 0.0;
  Monotonicity direction = Monotonicity::Increasing;
  double tol = 1e-12;

  // expect
  EngineOptions engine;

  // generator
  TestFunctionDescriptor test_function;
  std::vector<double> deltas;

  std::string output;

  /// Scenarios from `scenario.*` keys, or the G-Poisson pair when only `lambda` is given.
  UncertaintySet uncertainty_set() const;
};

/// Reads the flat `key = value` job format (one pair per line, `#` starts a
/// comment). Unknown keys and keys that the chosen command does not use are
/// rejected with ValidationError naming the key.
JobConfig parse_config(std::string_view text);

/// Builds the named payoff on `inputs` coordinates.
Payoff make_payoff(const PayoffDescriptor& desc, Eigen::Index inputs);

TestFunction make_test_function(const TestFunctionDescriptor& desc, Eigen::Index dim);

std::string_view to_string(Command command);

}  // namespace glevy::cli
