#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "glevy/cli/checks.hpp"
#include "glevy/cli/config.hpp"
#include "glevy/cli/run.hpp"
#include "glevy/pide_solver.hpp"

using namespace glevy;
using namespace glevy::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config(const std::string& name) { return read_file(std::string(GLEVY_CONFIG_DIR) + "/" + name); }

std::string run_text(const std::string& text, RunOptions opts = {}, int* status = nullptr) {
  std::ostringstream out;
  const int rc = run(parse_config(text), opts, out);
  if (status) *status = rc;
  return out.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

double report_value(const std::string& text, const std::string& quantity) {
  for (const auto& row : csv(text))
    if (row.size() == 2 && row[0] == quantity) return std::stod(row[1]);
  FAIL("quantity not in report: " << quantity);
  return 0.0;
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a config error");
  return ConfigError(ErrorCode::ParseError, "", 0, "");
}

}  // namespace

TEST_CASE("minimal gpoisson job parses") {
  const auto job = parse_config("command = gpoisson\nlambda = 0.5\nt = 1\npayoff = clip-linear\n");
  CHECK(job.command == Command::GPoisson);
  CHECK(*job.lambda == 0.5);
  CHECK(job.t == 1.0);
  CHECK(job.payoff.kind == "clip-linear");
}

TEST_CASE("validation errors name the key") {
  auto e = config_error("command = gpoisson\nlambda = 1.5\nt = 1\npayoff = clip-linear\n");
  CHECK(e.code() == ErrorCode::ValidationError);
  CHECK(e.key() == "lambda");

  e = config_error("command = gpoisson\nlambda = 0.5\nfoo = 1\n");
  CHECK(e.code() == ErrorCode::ValidationError);
  CHECK(e.key() == "foo");

  e = config_error("command = gpoisson\nlambda = 0.5\ngrid.dx = 0.1\n");
  CHECK(e.key() == "grid.dx");

  e = config_error("lambda = 0.5\n");
  CHECK(e.key() == "command");

  e = config_error("command = solve\nlambda = 0.5\ngrid.lower = -1\ngrid.upper = 1\ngrid.dx = 0.3\n");
  CHECK(e.key() == "grid.dx");

  e = config_error("command = solve\nscenario.0.atoms = 1:-1\ngrid.lower = -1\ngrid.upper = 1\ngrid.points = 5\n");
  CHECK(e.key() == "scenario");
  CHECK(std::string(e.what()).find("NEGATIVE_RATE") != std::string::npos);
}

TEST_CASE("parse errors carry the line") {
  auto e = config_error("command = gpoisson\n# comment\n\nlambda 0.5\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(e.line() == 4);
  e = config_error("command = gpoisson\nlambda = 0.5\nlambda = 0.6\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(e.line() == 3);
}

TEST_CASE("scenario keys build the uncertainty set") {
  const auto job = parse_config(
      "command = solve\ndim = 2\n"
      "scenario.0.atoms = 1,0:0.5; 0,-1:2\nscenario.0.drift = 0.1, -0.2\nscenario.0.diffusion = 1,0,0.5,1\n"
      "scenario.1.atoms = 0.5, 0.5:1\n"
      "grid.lower = -5\ngrid.upper = 5\ngrid.points = 41, 21\n");
  const auto set = job.uncertainty_set();
  REQUIRE(set.size() == 2);
  CHECK(set[0].atoms.size() == 2);
  CHECK(set[0].atoms[1].size[1] == -1.0);
  CHECK(set[0].atoms[1].rate == 2.0);
  CHECK(set[0].drift[1] == -0.2);
  CHECK(set[0].diffusion(1, 0) == 0.5);
  CHECK(set[1].atoms[0].size == Vector::Constant(2, 0.5));
  CHECK(job.grid->points(1) == 21);
}

TEST_CASE("solve job on the G-Poisson benchmark") {
  const auto rows = csv(run_text(config("solve_gpoisson.conf")));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"t", "x1", "u"});
  CHECK(std::stod(rows[2][0]) == 1.0);
  CHECK(std::stod(rows[2][1]) == 0.0);
  CHECK(std::stod(rows[2][2]) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("solve job refuses a box without padding") {
  const std::string text = "command = solve\nlambda = 0.5\ngrid.lower = -0.5\ngrid.upper = 10\ngrid.dx = 0.05\n";
  try {
    run_text(text);
    FAIL("expected padding error");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "grid.lower");
  }
}

TEST_CASE("solve job writes every node of a region") {
  const auto rows = csv(run_text(
      "command = solve\nlambda = 0.5\ngrid.lower = -10\ngrid.upper = 20\ngrid.dx = 0.5\n"
      "roi.lower = -1\nroi.upper = 1\ntimes = 0, 1\n"));
  CHECK(rows.size() == 1 + 2 * 5);
}

TEST_CASE("expect job with one increment equals the solve value") {
  const std::string grid = "grid.lower = -10\ngrid.upper = 30\ngrid.dx = 0.05\n";
  const std::string set = "lambda = 0.5\npayoff = indicator-ramp\npayoff.start = 0.5\npayoff.width = 2\n";
  const double expect = report_value(run_text("command = expect\ntimes = 1\n" + set + grid), "expectation");
  const auto rows = csv(run_text("command = solve\ntimes = 1\n" + set + grid));
  CHECK(std::abs(expect - std::stod(rows.back()[2])) <= 1e-12);
}

TEST_CASE("shipped expect job matches the Poisson value") {
  // E[min(N_1, 3)] = 3 - e^{-1} (3 + 2 + 1/2)
  const double expected = 3.0 - std::exp(-1.0) * 5.5;
  CHECK(std::abs(report_value(run_text(config("expect.conf")), "expectation") - expected) < 2e-2);
}

TEST_CASE("gpoisson and generator jobs") {
  CHECK(report_value(run_text(config("gpoisson.conf")), "gpoisson") == doctest::Approx(1.0).epsilon(1e-12));
  const auto report = run_text(config("generator.conf"));
  CHECK(report_value(report, "g_operator") == doctest::Approx(2.125));
  CHECK(report_value(report, "argmax_scenario") == 0.0);
}

TEST_CASE("check job passes every suite") {
  int status = -1;
  const auto rows = csv(run_text(config("check.conf"), {}, &status));
  CHECK(status == 0);
  REQUIRE(rows.size() > 10);
  CHECK(rows[0] == std::vector<std::string>{"suite", "name", "measured", "threshold", "result"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    INFO(rows[i][0] << "," << rows[i][1]);
    CHECK(rows[i].back() == "PASS");
  }
}

TEST_CASE("output is deterministic across runs and thread counts") {
  const auto a = run_text(config("gheat.conf"));
  const auto b = run_text(config("gheat.conf"));
  RunOptions threaded;
  threaded.threads = 3;
  const auto c = run_text(config("gheat.conf"), threaded);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(run_text(config("check.conf")) == run_text(config("check.conf")));
}

TEST_CASE("printed values round-trip") {
  for (double v : {1.0 / 3.0, 0.1, -2.718281828459045, 1e-300, 6.02214076e23, 0.99999999999999745})
    CHECK(std::stod(format_double(v)) == v);
  const auto rows = csv(run_text(config("gheat.conf")));
  const double u = std::stod(rows.back()[2]);
  CHECK(format_double(u) == rows.back()[2]);
}

TEST_CASE("command line tool") {
  const std::string tool = GLEVY_TOOL;
  const std::string out = "test_cli_tool_out.csv";
  std::remove(out.c_str());
  const std::string cmd = tool + " --config " + std::string(GLEVY_CONFIG_DIR) + "/solve_gpoisson.conf --out " + out;
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(read_file(out) == run_text(config("solve_gpoisson.conf")));
  std::remove(out.c_str());

  std::ofstream bad("test_cli_bad.conf");
  bad << "command = gpoisson\nlambda = 2\n";
  bad.close();
  const int status = std::system((tool + " --config test_cli_bad.conf 2> test_cli_bad.err").c_str());
  CHECK(status != 0);
  CHECK(read_file("test_cli_bad.err").find("VALIDATION_ERROR") != std::string::npos);
  std::remove("test_cli_bad.conf");
  std::remove("test_cli_bad.err");
}
