#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "glevy/cli/config.hpp"

namespace glevy::cli {

struct RunOptions {
  std::uint64_t seed = 20240607;
  int threads = 1;
  std::string out;  // overrides JobConfig::output; empty and no output key means the stream
};

/// Executes the job and writes its artifact (CSV, value report, or check
/// table) to the output file or `out`. Returns the process exit status:
/// 0 on success, 1 when a check row fails. Library errors propagate.
int run(const JobConfig& job, const RunOptions& opts, std::ostream& out);

/// Half-width of the margin the solve command demands around the region of
/// interest: max |z_k| + max |q| T + 4 max sigma sqrt(T).
double required_padding(const UncertaintySet& set, double horizon);

/// Writes `value` with 17 significant digits.
std::string format_double(double value);

}  // namespace glevy::cli
