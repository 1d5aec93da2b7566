#include "glevy/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "glevy/cli/checks.hpp"
#include "glevy/pide_solver.hpp"

namespace glevy::cli {

namespace {

void write_value(std::ostream& out, const std::string& quantity, double value) {
  out << quantity << ',' << format_double(value) << '\n';
}

int run_solve(const JobConfig& job, const RunOptions& opts, std::ostream& out) {
  const auto set = job.uncertainty_set();
  const GridSpec& grid = *job.grid;
  SchemeConfig cfg = job.scheme;
  cfg.threads = opts.threads;

  const double pad = required_padding(set, cfg.final_time);
  for (Eigen::Index i = 0; i < grid.dim(); ++i) {
    const double slack = 1e-9 * std::max(1.0, pad);
    if (grid.lower()[i] > job.roi_lower[i] - pad + slack)
      throw ConfigError(ErrorCode::ValidationError, "grid.lower", 0,
                        "grid.lower: box must extend " + format_double(pad) + " below the region of interest");
    if (grid.upper()[i] < job.roi_upper[i] + pad - slack)
      throw ConfigError(ErrorCode::ValidationError, "grid.upper", 0,
                        "grid.upper: box must extend " + format_double(pad) + " above the region of interest");
  }

  const Payoff phi = make_payoff(job.payoff, grid.dim());
  const auto result = solve(phi, grid, set, cfg, job.times);

  out << 't';
  for (Eigen::Index i = 0; i < grid.dim(); ++i) out << ",x" << (i + 1);
  out << ",u\n";

  const bool single_point = job.roi_lower == job.roi_upper;
  for (const auto& snap : result.snapshots) {
    auto row = [&](const Vector& x, double u) {
      out << format_double(snap.time_label());
      for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << format_double(x[i]);
      out << ',' << format_double(u) << '\n';
    };
    if (single_point) {
      row(job.roi_lower, interpolate(snap, job.roi_lower));
      continue;
    }
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      const Vector x = grid.node(n);
      const double eps = 1e-9 * grid.spacing().minCoeff();
      if (((x - job.roi_lower).array() >= -eps).all() && ((job.roi_upper - x).array() >= -eps).all())
        row(x, snap[n]);
    }
  }
  return 0;
}

int run_gpoisson(const JobConfig& job, std::ostream& out) {
  const Payoff phi = make_payoff(job.payoff, 1);
  const double value = gpoisson_closed_form(phi, job.direction, *job.lambda, job.t, job.x, job.tol);
  out << "quantity,value\n";
  write_value(out, "gpoisson", value);
  return 0;
}

int run_expect(const JobConfig& job, const RunOptions& opts, std::ostream& out) {
  const auto set = job.uncertainty_set();
  const auto m = static_cast<Eigen::Index>(job.times.size());
  const Payoff phi = make_payoff(job.payoff, m * job.dim);
  const CylinderFunctional xi{job.times, phi.eval, phi.bound,
                              std::isfinite(phi.lipschitz) ? phi.lipschitz : 0.0, job.dim};

  EngineOptions engine = job.engine;
  if (job.grid) engine.grids.assign(job.times.size(), *job.grid);
  SchemeConfig cfg = job.scheme;
  cfg.threads = opts.threads;

  const auto grids = increment_grids(xi, set, engine);
  const double value = expectation(xi, set, cfg, engine);

  out << "quantity,value\n";
  write_value(out, "expectation", value);
  for (std::size_t k = 0; k < grids.size(); ++k) {
    for (Eigen::Index i = 0; i < grids[k].dim(); ++i) {
      const std::string tag = "increment" + std::to_string(k + 1) + ".axis" + std::to_string(i + 1);
      write_value(out, tag + ".lower", grids[k].lower()[i]);
      write_value(out, tag + ".upper", grids[k].upper()[i]);
    }
  }
  return 0;
}

int run_generator(const JobConfig& job, const RunOptions& opts, std::ostream& out) {
  const auto set = job.uncertainty_set();
  const TestFunction f = make_test_function(job.test_function, set.dim());
  const auto g = g_operator_argmax(f, set);

  out << "quantity,value\n";
  write_value(out, "g_operator", g.value);
  write_value(out, "argmax_scenario", static_cast<double>(g.scenario));
  SchemeConfig cfg = job.scheme;
  cfg.threads = opts.threads;
  for (double delta : job.deltas)
    write_value(out, "quotient@" + format_double(delta), small_time_quotient(f, set, delta, *job.grid, cfg));
  return 0;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double required_padding(const UncertaintySet& set, double horizon) {
  double drift = 0.0, sigma = 0.0;
  for (const auto& s : set.scenarios()) {
    drift = std::max(drift, s.drift.cwiseAbs().maxCoeff());
    sigma = std::max(sigma, std::sqrt(s.covariance().diagonal().maxCoeff()));
  }
  return set.max_jump_norm() + drift * horizon + 4.0 * sigma * std::sqrt(horizon);
}

int run(const JobConfig& job, const RunOptions& opts, std::ostream& out) {
  const std::string path = !opts.out.empty() ? opts.out : job.output;
  std::ofstream file;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + path);
  }
  std::ostream& sink = path.empty() ? out : file;

  switch (job.command) {
    case Command::Solve: return run_solve(job, opts, sink);
    case Command::GPoisson: return run_gpoisson(job, sink);
    case Command::Expect: return run_expect(job, opts, sink);
    case Command::Generator: return run_generator(job, opts, sink);
    case Command::Check: {
      const auto rows = run_checks(opts.seed, opts.threads);
      write_check_report(rows, sink);
      return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; }) ? 0 : 1;
    }
  }
  return 2;
}

}  // namespace glevy::cli
