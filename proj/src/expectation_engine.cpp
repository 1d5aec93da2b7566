#include "glevy/expectation_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glevy/parallel.hpp"
#include "glevy/pide_solver.hpp"

namespace glevy {

namespace {

// Smallest n with P(N > n) < 1e-10 for N ~ Poisson(mean).
int poisson_quantile(double mean) {
  if (mean <= 0.0) return 0;
  double prob = std::exp(-mean);
  double cdf = prob;
  int n = 0;
  while (1.0 - cdf >= 1e-10 && n < 100000) {
    ++n;
    prob *= mean / n;
    cdf += prob;
  }
  return n;
}

void check_limits(const CylinderFunctional& xi, const std::vector<GridSpec>& grids, const EngineOptions& opts) {
  const auto axes = static_cast<long>(xi.increments()) * xi.dim;
  if (axes > opts.max_axes)
    throw Error(ErrorCode::DimensionOverflow,
                std::to_string(axes) + " tensor axes exceed the limit of " + std::to_string(opts.max_axes));
  double nodes = 1.0;
  for (const auto& g : grids) nodes *= static_cast<double>(g.node_count());
  if (nodes > static_cast<double>(opts.node_budget))
    throw Error(ErrorCode::DimensionOverflow, "tensor grid of " + std::to_string(nodes) +
                                                  " nodes exceeds the budget of " + std::to_string(opts.node_budget));
}

// Integrates out increments m, m-1, ..., stop+1. Returns the tabulated
// function of the first `stop` increments; for stop == 0 a one-node table
// holding the scalar.
Vector backward_recursion(const CylinderFunctional& xi, const UncertaintySet& set, const SchemeConfig& cfg,
                          const std::vector<GridSpec>& grids, std::size_t stop) {
  const std::size_t m = xi.increments();

  GridSpec tensor = grids.front();
  for (std::size_t k = 1; k < m; ++k) tensor = GridSpec::concat(tensor, grids[k]);

  Vector table(static_cast<Eigen::Index>(tensor.node_count()));
  parallel_for(tensor.node_count(), cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) table[static_cast<Eigen::Index>(n)] = xi.payoff(tensor.node(n));
  });
  if (!table.allFinite()) throw Error(ErrorCode::NonFinite, "payoff returned a non-finite value");

  std::size_t prefix_count = tensor.node_count();
  for (std::size_t k = m; k > stop; --k) {
    const GridSpec& last = grids[k - 1];
    const std::size_t slice = last.node_count();
    prefix_count /= slice;
    const double horizon = xi.times[k - 1] - (k >= 2 ? xi.times[k - 2] : 0.0);

    SchemeConfig level_cfg = cfg;
    level_cfg.final_time = horizon;
    level_cfg.threads = 1;
    const Vector origin = Vector::Zero(last.dim());

    Vector reduced(static_cast<Eigen::Index>(prefix_count));
    parallel_for(prefix_count, cfg.threads, [&](std::size_t begin, std::size_t end) {
      Vector values(static_cast<Eigen::Index>(slice));
      for (std::size_t p = begin; p < end; ++p) {
        for (std::size_t l = 0; l < slice; ++l)
          values[static_cast<Eigen::Index>(l)] = table[static_cast<Eigen::Index>(p + prefix_count * l)];
        // Constants pass through the scheme unchanged.
        if (values.maxCoeff() == values.minCoeff()) {
          reduced[static_cast<Eigen::Index>(p)] = values[0];
          continue;
        }
        const auto result = solve(GridFunction(last, values), set, level_cfg, {horizon});
        reduced[static_cast<Eigen::Index>(p)] = interpolate(result.snapshots.back(), origin);
      }
    });
    table.swap(reduced);
  }
  return table;
}

}  // namespace

void CylinderFunctional::validate() const {
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "cylinder functional needs at least one time");
  if (!(times.front() > 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be positive");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::InvalidArgument, "times must be strictly increasing");
  if (!payoff) throw Error(ErrorCode::InvalidArgument, "cylinder functional has no payoff");
  if (!std::isfinite(bound) || !std::isfinite(lipschitz))
    throw Error(ErrorCode::NonFinite, "payoff bound and Lipschitz constant must be finite");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
}

GridSpec increment_grid(const UncertaintySet& set, double horizon, double dx) {
  const auto d = set.dim();
  const int jumps = poisson_quantile(set.max_total_rate() * horizon);

  Vector below = Vector::Zero(d), above = Vector::Zero(d);
  for (const auto& s : set.scenarios()) {
    for (const auto& atom : s.atoms) {
      if (atom.rate == 0.0) continue;
      for (Eigen::Index i = 0; i < d; ++i) {
        above[i] = std::max(above[i], jumps * std::max(atom.size[i], 0.0));
        below[i] = std::max(below[i], jumps * std::max(-atom.size[i], 0.0));
      }
    }
    const Matrix cov = s.covariance();
    for (Eigen::Index i = 0; i < d; ++i) {
      const double spread = std::abs(s.drift[i]) * horizon + 6.0 * std::sqrt(cov(i, i) * horizon);
      above[i] = std::max(above[i], spread);
      below[i] = std::max(below[i], spread);
    }
  }
  const double margin = set.max_jump_norm() + 4.0 * dx;
  below.array() += margin;
  above.array() += margin;
  return GridSpec::through_origin(below, above, dx);
}

std::vector<GridSpec> increment_grids(const CylinderFunctional& xi, const UncertaintySet& set,
                                      const EngineOptions& opts) {
  xi.validate();
  if (xi.dim != set.dim()) throw Error(ErrorCode::DimensionMismatch, "functional and set dimension differ");
  if (!opts.grids.empty()) {
    if (opts.grids.size() != xi.increments())
      throw Error(ErrorCode::DimensionMismatch, "need exactly one grid per increment");
    for (const auto& g : opts.grids)
      if (g.dim() != xi.dim) throw Error(ErrorCode::DimensionMismatch, "increment grid dimension");
    return opts.grids;
  }
  std::vector<GridSpec> grids;
  for (std::size_t k = 0; k < xi.increments(); ++k) {
    const double horizon = xi.times[k] - (k > 0 ? xi.times[k - 1] : 0.0);
    grids.push_back(increment_grid(set, horizon, opts.dx));
  }
  return grids;
}

double expectation(const CylinderFunctional& xi, const UncertaintySet& set, const SchemeConfig& cfg,
                   const EngineOptions& opts) {
  cfg.validate();
  const auto grids = increment_grids(xi, set, opts);
  check_limits(xi, grids, opts);
  return backward_recursion(xi, set, cfg, grids, 0)[0];
}

GridFunction conditional_expectation(const CylinderFunctional& xi, std::size_t j, const UncertaintySet& set,
                                     const SchemeConfig& cfg, const EngineOptions& opts) {
  cfg.validate();
  if (j < 1 || j >= xi.increments())
    throw Error(ErrorCode::IndexOutOfRange, "conditioning index must satisfy 1 <= j < m");
  const auto grids = increment_grids(xi, set, opts);
  check_limits(xi, grids, opts);

  GridSpec prefix = grids.front();
  for (std::size_t k = 1; k < j; ++k) prefix = GridSpec::concat(prefix, grids[k]);
  return GridFunction(prefix, backward_recursion(xi, set, cfg, grids, j), xi.times[j - 1]);
}

}  // namespace glevy
