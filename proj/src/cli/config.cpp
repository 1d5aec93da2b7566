#include "glevy/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "glevy/payoffs.hpp"

namespace glevy::cli {

namespace {

struct Entry {
  std::string value;
  int line;
};

using Entries = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw ConfigError(ErrorCode::ValidationError, key, 0, key + ": " + why);
}

double to_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) invalid(key, "expected a number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    invalid(key, "'" + s + "' is not a finite number");
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(to_number(key, part));
  if (values.empty()) invalid(key, "expected a comma-separated list of numbers");
  return values;
}

Vector to_vector(const std::string& key, const std::string& text, Eigen::Index dim) {
  const auto list = to_list(key, text);
  if (list.size() == 1) return Vector::Constant(dim, list[0]);
  if (static_cast<Eigen::Index>(list.size()) != dim)
    invalid(key, "expected 1 or " + std::to_string(dim) + " values");
  return Eigen::Map<const Vector>(list.data(), dim);
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_number(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) invalid(key, "expected an integer");
  return static_cast<int>(v);
}

// Which key families each command accepts.
enum Family : unsigned {
  kSet = 1u << 0,
  kPayoff = 1u << 1,
  kGrid = 1u << 2,
  kRoi = 1u << 3,
  kScheme = 1u << 4,
  kTimes = 1u << 5,
  kGPoisson = 1u << 6,
  kEngine = 1u << 7,
  kGenerator = 1u << 8,
};

unsigned families(Command c) {
  switch (c) {
    case Command::Solve: return kSet | kPayoff | kGrid | kRoi | kScheme | kTimes;
    case Command::GPoisson: return kPayoff | kGPoisson;
    case Command::Expect: return kSet | kPayoff | kGrid | kScheme | kTimes | kEngine;
    case Command::Generator: return kSet | kGrid | kScheme | kGenerator;
    case Command::Check: return 0;
  }
  return 0;
}

std::optional<unsigned> family_of(const std::string& key) {
  static const std::map<std::string, unsigned> exact = {
      {"command", 0},        {"dim", 0},           {"output", 0},          {"lambda", kSet | kGPoisson},
      {"payoff", kPayoff},   {"times", kTimes},    {"t", kGPoisson},       {"x", kGPoisson},
      {"direction", kGPoisson}, {"tol", kGPoisson}, {"delta", kGenerator}, {"testfn", kGenerator},
  };
  static const std::map<std::string, std::set<std::string>> dotted = {
      {"payoff", {"weights", "low", "high", "clip", "start", "width", "height", "scale", "cap", "value", "table"}},
      {"grid", {"lower", "upper", "points", "dx"}},
      {"roi", {"lower", "upper"}},
      {"scheme", {"cfl", "tol", "T", "max_dt"}},
      {"engine", {"dx", "node_budget", "max_axes"}},
      {"testfn", {"height", "center", "width"}},
  };
  static const std::map<std::string, unsigned> dotted_family = {
      {"payoff", kPayoff}, {"grid", kGrid},     {"roi", kRoi},
      {"scheme", kScheme}, {"engine", kEngine}, {"testfn", kGenerator},
  };

  if (auto it = exact.find(key); it != exact.end()) return it->second;
  const auto dot = key.find('.');
  if (dot == std::string::npos) return std::nullopt;
  const std::string head = key.substr(0, dot);
  const std::string tail = key.substr(dot + 1);
  if (head == "scenario") {
    const auto dot2 = tail.find('.');
    if (dot2 == std::string::npos || dot2 == 0) return std::nullopt;
    const std::string index = tail.substr(0, dot2);
    const std::string field = tail.substr(dot2 + 1);
    if (!std::all_of(index.begin(), index.end(), ::isdigit)) return std::nullopt;
    if (field != "atoms" && field != "drift" && field != "diffusion") return std::nullopt;
    return kSet;
  }
  if (auto it = dotted.find(head); it != dotted.end() && it->second.count(tail)) return dotted_family.at(head);
  return std::nullopt;
}

Entries read_entries(std::string_view text) {
  Entries entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ErrorCode::ParseError, "", line, "line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(content.substr(0, eq));
    if (key.empty())
      throw ConfigError(ErrorCode::ParseError, "", line, "line " + std::to_string(line) + ": empty key");
    if (!entries.emplace(key, Entry{trim(content.substr(eq + 1)), line}).second)
      throw ConfigError(ErrorCode::ParseError, key, line,
                        "line " + std::to_string(line) + ": duplicate key '" + key + "'");
  }
  return entries;
}

Command parse_command(const std::string& value) {
  if (value == "solve") return Command::Solve;
  if (value == "gpoisson") return Command::GPoisson;
  if (value == "expect") return Command::Expect;
  if (value == "generator") return Command::Generator;
  if (value == "check") return Command::Check;
  invalid("command", "unknown command '" + value + "'");
}

JumpMeasure parse_atoms(const std::string& key, const std::string& text, Eigen::Index dim) {
  JumpMeasure atoms;
  if (trim(text).empty()) return atoms;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) invalid(key, "atoms are written size:rate");
    const auto size = to_list(key, item.substr(0, colon));
    if (static_cast<Eigen::Index>(size.size()) != dim) invalid(key, "jump size must have dim components");
    atoms.push_back({Eigen::Map<const Vector>(size.data(), dim), to_number(key, item.substr(colon + 1))});
  }
  return atoms;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Solve: return "solve";
    case Command::GPoisson: return "gpoisson";
    case Command::Expect: return "expect";
    case Command::Generator: return "generator";
    case Command::Check: return "check";
  }
  return "unknown";
}

UncertaintySet JobConfig::uncertainty_set() const {
  if (!scenarios.empty()) return validate_uncertainty_set(scenarios);
  if (lambda) return GPoissonSpec{*lambda}.uncertainty_set();
  throw Error(ErrorCode::EmptySet, "no scenarios configured");
}

JobConfig parse_config(std::string_view text) {
  const Entries entries = read_entries(text);
  auto has = [&](const std::string& k) { return entries.count(k) > 0; };
  auto get = [&](const std::string& k) -> const std::string& { return entries.at(k).value; };

  if (!has("command")) invalid("command", "missing");
  JobConfig job;
  job.command = parse_command(get("command"));

  const unsigned allowed = families(job.command);
  for (const auto& [key, entry] : entries) {
    const auto family = family_of(key);
    if (!family) invalid(key, "unknown key");
    if (*family != 0 && (*family & allowed) == 0)
      invalid(key, "not used by command '" + std::string(to_string(job.command)) + "'");
  }

  if (has("dim")) {
    const int d = to_int("dim", get("dim"));
    if (d < 1 || d > 3) invalid("dim", "must be 1, 2 or 3");
    job.dim = d;
  }
  const auto d = job.dim;
  if (has("output")) job.output = get("output");

  // Uncertainty set.
  if (has("lambda")) {
    const double lambda = to_number("lambda", get("lambda"));
    if (!(lambda >= 0.0 && lambda <= 1.0)) invalid("lambda", "must lie in [0, 1]");
    job.lambda = lambda;
  }
  {
    std::map<int, Scenario> by_index;
    for (const auto& [key, entry] : entries) {
      if (key.rfind("scenario.", 0) != 0) continue;
      const auto dot = key.find('.', 9);
      const int index = std::stoi(key.substr(9, dot - 9));
      const std::string field = key.substr(dot + 1);
      auto [it, fresh] = by_index.try_emplace(index, make_scenario({}, Vector::Zero(d)));
      if (field == "atoms") it->second.atoms = parse_atoms(key, entry.value, d);
      if (field == "drift") it->second.drift = to_vector(key, entry.value, d);
      if (field == "diffusion") {
        const auto list = to_list(key, entry.value);
        if (list.size() == 1 && d == 1) {
          it->second.diffusion = Matrix::Constant(1, 1, list[0]);
        } else if (static_cast<Eigen::Index>(list.size()) == d * d) {
          it->second.diffusion = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                                 Eigen::RowMajor>>(list.data(), d, d);
        } else {
          invalid(key, "diffusion needs dim*dim values (row-major)");
        }
      }
    }
    int expected = 0;
    for (auto& [index, scenario] : by_index) {
      if (index != expected) invalid("scenario." + std::to_string(expected), "scenario indices must be 0, 1, 2, ...");
      job.scenarios.push_back(std::move(scenario));
      ++expected;
    }
    if (!job.scenarios.empty() && job.lambda && job.command != Command::GPoisson)
      invalid("lambda", "give either lambda or scenario.* keys, not both");
    if (!job.scenarios.empty()) {
      try {
        (void)validate_uncertainty_set(job.scenarios);
      } catch (const Error& e) {
        invalid("scenario", e.what());
      }
    }
  }
  const bool needs_set = (families(job.command) & kSet) != 0;
  if (needs_set && job.scenarios.empty() && !job.lambda) invalid("scenario", "no uncertainty set configured");
  if (job.command == Command::GPoisson && !job.lambda) invalid("lambda", "missing");

  // Payoff.
  auto& p = job.payoff;
  if (has("payoff")) {
    p.kind = get("payoff");
    static const std::set<std::string> kinds = {"clip-linear", "indicator-ramp", "quadratic-clip", "constant",
                                                "table"};
    if (!kinds.count(p.kind)) invalid("payoff", "unknown payoff '" + p.kind + "'");
  }
  if (has("payoff.clip")) {
    const double c = to_number("payoff.clip", get("payoff.clip"));
    if (!(c > 0.0)) invalid("payoff.clip", "must be positive");
    p.low = -c;
    p.high = c;
  }
  if (has("payoff.low")) p.low = to_number("payoff.low", get("payoff.low"));
  if (has("payoff.high")) p.high = to_number("payoff.high", get("payoff.high"));
  if (!(p.high >= p.low)) invalid("payoff.high", "must be >= payoff.low");
  if (has("payoff.weights")) {
    const auto w = to_list("payoff.weights", get("payoff.weights"));
    p.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
  if (has("payoff.start")) p.start = to_number("payoff.start", get("payoff.start"));
  if (has("payoff.width")) p.width = to_number("payoff.width", get("payoff.width"));
  if (!(p.width > 0.0)) invalid("payoff.width", "must be positive");
  if (has("payoff.height")) p.height = to_number("payoff.height", get("payoff.height"));
  if (has("payoff.scale")) p.scale = to_number("payoff.scale", get("payoff.scale"));
  if (has("payoff.cap")) p.cap = to_number("payoff.cap", get("payoff.cap"));
  if (!(p.cap > 0.0)) invalid("payoff.cap", "must be positive");
  if (has("payoff.value")) p.value = to_number("payoff.value", get("payoff.value"));
  if (has("payoff.table")) {
    for (const auto& item : split(get("payoff.table"), ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) invalid("payoff.table", "knots are written x:y");
      p.knots.emplace_back(to_number("payoff.table", item.substr(0, colon)),
                           to_number("payoff.table", item.substr(colon + 1)));
    }
  }
  if (p.kind == "table" && p.knots.empty()) invalid("payoff.table", "missing");

  // Grid.
  const bool any_grid = has("grid.lower") || has("grid.upper") || has("grid.points") || has("grid.dx");
  if (any_grid) {
    if (!has("grid.lower")) invalid("grid.lower", "missing");
    if (!has("grid.upper")) invalid("grid.upper", "missing");
    const Vector lower = to_vector("grid.lower", get("grid.lower"), d);
    const Vector upper = to_vector("grid.upper", get("grid.upper"), d);
    if (!((upper - lower).array() > 0.0).all()) invalid("grid.upper", "must exceed grid.lower");
    std::vector<int> points(static_cast<std::size_t>(d));
    if (has("grid.points") == has("grid.dx")) invalid("grid.points", "give exactly one of grid.points, grid.dx");
    if (has("grid.points")) {
      const Vector n = to_vector("grid.points", get("grid.points"), d);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (n[i] != std::floor(n[i]) || n[i] < 3 || n[i] > 1e8) invalid("grid.points", "need integers >= 3");
        points[static_cast<std::size_t>(i)] = static_cast<int>(n[i]);
      }
    } else {
      const double dx = to_number("grid.dx", get("grid.dx"));
      if (!(dx > 0.0)) invalid("grid.dx", "must be positive");
      for (Eigen::Index i = 0; i < d; ++i) {
        const double cells = (upper[i] - lower[i]) / dx;
        if (std::abs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells))
          invalid("grid.dx", "must divide grid.upper - grid.lower");
        if (std::round(cells) < 2 || cells > 1e8) invalid("grid.dx", "gives fewer than 3 points");
        points[static_cast<std::size_t>(i)] = static_cast<int>(std::round(cells)) + 1;
      }
    }
    job.grid = GridSpec(lower, upper, points);
  }
  if ((job.command == Command::Solve) && !job.grid) invalid("grid.lower", "missing");

  job.roi_lower = has("roi.lower") ? to_vector("roi.lower", get("roi.lower"), d) : Vector::Zero(d);
  job.roi_upper = has("roi.upper") ? to_vector("roi.upper", get("roi.upper"), d) : job.roi_lower;
  if (!((job.roi_upper - job.roi_lower).array() >= 0.0).all()) invalid("roi.upper", "must be >= roi.lower");

  // Times.
  if (has("times")) {
    job.times = to_list("times", get("times"));
    for (double t : job.times)
      if (!(t >= 0.0)) invalid("times", "must be nonnegative");
  }
  if (job.command == Command::Expect) {
    if (job.times.empty()) invalid("times", "missing");
    if (!(job.times.front() > 0.0)) invalid("times", "must be positive");
    for (std::size_t i = 1; i < job.times.size(); ++i)
      if (!(job.times[i] > job.times[i - 1])) invalid("times", "must be strictly increasing");
  }

  // Scheme.
  auto& s = job.scheme;
  if (has("scheme.cfl")) {
    s.cfl_safety = to_number("scheme.cfl", get("scheme.cfl"));
    if (!(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0)) invalid("scheme.cfl", "must lie in (0, 1]");
  }
  if (has("scheme.tol")) {
    s.tolerance = to_number("scheme.tol", get("scheme.tol"));
    if (!(s.tolerance > 0.0)) invalid("scheme.tol", "must be positive");
  }
  if (has("scheme.max_dt")) {
    s.max_dt = to_number("scheme.max_dt", get("scheme.max_dt"));
    if (!(*s.max_dt > 0.0)) invalid("scheme.max_dt", "must be positive");
  }
  if (has("scheme.T")) {
    s.final_time = to_number("scheme.T", get("scheme.T"));
    if (!(s.final_time >= 0.0)) invalid("scheme.T", "must be nonnegative");
  } else if (job.command == Command::Solve && !job.times.empty()) {
    s.final_time = *std::max_element(job.times.begin(), job.times.end());
  }
  if (job.command == Command::Solve) {
    for (double t : job.times)
      if (t > s.final_time) invalid("times", "must not exceed scheme.T");
  }

  // G-Poisson closed form.
  if (has("t")) {
    job.t = to_number("t", get("t"));
    if (!(job.t >= 0.0)) invalid("t", "must be nonnegative");
  }
  if (has("x")) job.x = to_number("x", get("x"));
  if (has("tol")) {
    job.tol = to_number("tol", get("tol"));
    if (!(job.tol > 0.0)) invalid("tol", "must be positive");
  }
  if (has("direction")) {
    const auto& v = get("direction");
    if (v == "increasing") job.direction = Monotonicity::Increasing;
    else if (v == "decreasing") job.direction = Monotonicity::Decreasing;
    else invalid("direction", "must be increasing or decreasing");
  }

  // Engine.
  if (has("engine.dx")) {
    job.engine.dx = to_number("engine.dx", get("engine.dx"));
    if (!(job.engine.dx > 0.0)) invalid("engine.dx", "must be positive");
  }
  if (has("engine.node_budget")) {
    const double b = to_number("engine.node_budget", get("engine.node_budget"));
    if (!(b >= 1.0) || b != std::floor(b)) invalid("engine.node_budget", "must be a positive integer");
    job.engine.node_budget = static_cast<std::size_t>(b);
  }
  if (has("engine.max_axes")) {
    job.engine.max_axes = to_int("engine.max_axes", get("engine.max_axes"));
    if (job.engine.max_axes < 1) invalid("engine.max_axes", "must be positive");
  }

  // Generator.
  auto& f = job.test_function;
  if (has("testfn")) {
    f.kind = get("testfn");
    if (f.kind != "one-minus-cos" && f.kind != "bump") invalid("testfn", "unknown test function '" + f.kind + "'");
  }
  if (has("testfn.height")) f.height = to_number("testfn.height", get("testfn.height"));
  if (has("testfn.center")) f.center = to_number("testfn.center", get("testfn.center"));
  if (has("testfn.width")) {
    f.width = to_number("testfn.width", get("testfn.width"));
    if (!(f.width > 0.0)) invalid("testfn.width", "must be positive");
  }
  if (f.kind == "bump" && !(std::abs(f.center) * std::sqrt(static_cast<double>(d)) > f.width))
    invalid("testfn.center", "bump support must exclude the origin");
  if (has("delta")) {
    job.deltas = to_list("delta", get("delta"));
    for (double v : job.deltas)
      if (!(v > 0.0)) invalid("delta", "must be positive");
    if (!job.grid) invalid("grid.lower", "small-time quotients need a grid");
  }

  return job;
}

Payoff make_payoff(const PayoffDescriptor& desc, Eigen::Index inputs) {
  Vector weights = desc.weights.value_or(Vector::Ones(inputs));
  if (weights.size() == 1 && inputs > 1) weights = Vector::Constant(inputs, weights[0]);
  if (weights.size() != inputs) invalid("payoff.weights", "expected " + std::to_string(inputs) + " weights");

  if (desc.kind == "clip-linear") return payoffs::clip_linear(weights, desc.low, desc.high);
  if (desc.kind == "indicator-ramp") return payoffs::ramp(weights, desc.start, desc.width, desc.height);
  if (desc.kind == "quadratic-clip") return payoffs::quadratic_clip(desc.scale, desc.cap);
  if (desc.kind == "constant") return payoffs::constant(desc.value);
  if (desc.kind == "table") return payoffs::table(weights, desc.knots);
  invalid("payoff", "unknown payoff '" + desc.kind + "'");
}

TestFunction make_test_function(const TestFunctionDescriptor& desc, Eigen::Index dim) {
  const double h = desc.height;
  if (desc.kind == "one-minus-cos") {
    return TestFunction{[h](const Vector& z) { return h * (1.0 - z.array().cos()).sum(); }, Vector::Zero(dim),
                        h * Matrix::Identity(dim, dim), 2.0 * std::abs(h) * static_cast<double>(dim)};
  }
  // (1 - r^2)^4 on the unit ball is C^3; its support stays away from the origin.
  const Vector center = Vector::Constant(dim, desc.center);
  const double width = desc.width;
  return TestFunction{[h, center, width](const Vector& z) {
                        const double r2 = (z - center).squaredNorm() / (width * width);
                        return r2 < 1.0 ? h * std::pow(1.0 - r2, 4) : 0.0;
                      },
                      Vector::Zero(dim), Matrix::Zero(dim, dim), std::abs(h)};
}

}  // namespace glevy::cli
