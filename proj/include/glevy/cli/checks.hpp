#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace glevy::cli {

struct CheckRow {
  std::string suite;
  std::string name;
  double measured;
  double threshold;
  bool pass;
};

/// Invariant suites over every module on fixed benchmark data; random
/// inputs are drawn from `seed`.
std::vector<CheckRow> run_checks(std::uint64_t seed, int threads = 1);

/// `suite,name,measured,threshold,PASS|FAIL` lines with a header row.
void write_check_report(const std::vector<CheckRow>& rows, std::ostream& out);

}  // namespace glevy::cli
