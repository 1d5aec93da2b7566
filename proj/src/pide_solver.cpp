#include "glevy/pide_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glevy/parallel.hpp"
#include "stencil.hpp"

namespace glevy {

namespace {

constexpr double kMaxSteps = 1e9;

std::vector<detail::ScenarioStencil> build_stencils(const GridSpec& grid, const UncertaintySet& set) {
  if (set.dim() != grid.dim()) throw Error(ErrorCode::DimensionMismatch, "uncertainty set and grid dimension differ");
  std::vector<detail::ScenarioStencil> stencils;
  stencils.reserve(set.size());
  for (const auto& s : set.scenarios()) stencils.emplace_back(grid, s);
  return stencils;
}

double step_from_rates(const GridSpec& grid, const std::vector<detail::ScenarioStencil>& stencils,
                       const SchemeConfig& cfg) {
  double rate = 0.0;
  for (const auto& st : stencils) rate = std::max(rate, st.rate());
  const double cap = cfg.max_dt.value_or(SchemeConfig::default_max_dt_factor * grid.spacing().minCoeff());
  const double dt = rate > 0.0 ? std::min(cfg.cfl_safety / rate, cap) : cap;
  if (!(dt > 0.0) || !std::isfinite(dt) || cfg.final_time / dt > kMaxSteps)
    throw Error(ErrorCode::CflUnsatisfiable, "time step " + std::to_string(dt) + " underflows");
  return dt;
}

// One explicit step u <- u + h * max_s L_s u. `scratch` holds one generator
// array per scenario.
void euler_step(Vector& u, Vector& next, std::vector<Vector>& scratch,
                const std::vector<detail::ScenarioStencil>& stencils, double h, int threads) {
  const auto n = static_cast<std::size_t>(u.size());
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::span<const double> in(u.data(), n);
    for (std::size_t s = 0; s < stencils.size(); ++s)
      stencils[s].apply(in, std::span<double>(scratch[s].data(), n), begin, end);
    for (std::size_t k = begin; k < end; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      double best = scratch[0][i];
      // strict comparison keeps the lowest scenario index on ties
      for (std::size_t s = 1; s < stencils.size(); ++s)
        if (scratch[s][i] > best) best = scratch[s][i];
      next[i] = u[i] + h * best;
    }
  });
  u.swap(next);
}

}  // namespace

Vector apply_generator(const GridFunction& g, const Scenario& s) {
  if (s.dim() != g.spec().dim()) throw Error(ErrorCode::DimensionMismatch, "scenario and grid dimension differ");
  const detail::ScenarioStencil stencil(g.spec(), s);
  const auto n = g.spec().node_count();
  Vector out(static_cast<Eigen::Index>(n));
  stencil.apply(std::span<const double>(g.values().data(), n), std::span<double>(out.data(), n), 0, n);
  return out;
}

double stable_time_step(const GridSpec& grid, const UncertaintySet& set, const SchemeConfig& cfg) {
  cfg.validate();
  return step_from_rates(grid, build_stencils(grid, set), cfg);
}

SolveResult solve(const GridFunction& initial, const UncertaintySet& set, const SchemeConfig& cfg,
                  std::vector<double> output_times) {
  cfg.validate();
  const auto& grid = initial.spec();
  const auto stencils = build_stencils(grid, set);

  if (output_times.empty()) output_times.push_back(cfg.final_time);
  std::sort(output_times.begin(), output_times.end());
  output_times.erase(std::unique(output_times.begin(), output_times.end()), output_times.end());
  if (!(output_times.front() >= 0.0) || !(output_times.back() <= cfg.final_time))
    throw Error(ErrorCode::InvalidArgument, "output times must lie in [0, final_time]");

  SolveResult result;
  result.dt_used = step_from_rates(grid, stencils, cfg);
  const double dt = result.dt_used;

  Vector u = initial.values();
  Vector next(u.size());
  std::vector<Vector> scratch(stencils.size(), Vector(u.size()));

  double t = 0.0;
  for (const double target : output_times) {
    const double span = target - t;
    if (span > 0.0) {
      auto full = static_cast<long>(std::floor(span / dt));
      double remainder = span - static_cast<double>(full) * dt;
      // A remainder of rounding size is absorbed into the last full step.
      if (remainder <= 1e-12 * dt) remainder = 0.0;
      if (full > 0 && remainder == 0.0) {
        --full;
        remainder = span - static_cast<double>(full) * dt;
      }
      for (long k = 0; k < full; ++k) euler_step(u, next, scratch, stencils, dt, cfg.threads);
      if (remainder > 0.0) euler_step(u, next, scratch, stencils, remainder, cfg.threads);
      result.steps += full + (remainder > 0.0 ? 1 : 0);
      t = target;
    }
    result.snapshots.emplace_back(grid, u, target);
  }
  return result;
}

SolveResult solve(const Payoff& phi, const GridSpec& grid, const UncertaintySet& set, const SchemeConfig& cfg,
                  std::vector<double> output_times) {
  return solve(sample(phi, grid), set, cfg, std::move(output_times));
}

double evaluate(const SolveResult& result, double t, const Vector& x) {
  for (const auto& snap : result.snapshots)
    if (std::abs(snap.time_label() - t) <= 1e-12 * std::max(1.0, std::abs(t))) return interpolate(snap, x);
  throw Error(ErrorCode::NoSnapshot, "no snapshot at t = " + std::to_string(t));
}

}  // namespace glevy
