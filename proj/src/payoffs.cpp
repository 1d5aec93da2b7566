#include "glevy/payoffs.hpp"

#include <algorithm>
#include <cmath>

namespace glevy::payoffs {

Payoff constant(double value) {
  return Payoff{[value](const Vector&) { return value; }, std::abs(value), 0.0};
}

Payoff clip_linear(Vector weights, double low, double high) {
  if (!(high >= low)) throw Error(ErrorCode::InvalidArgument, "clip_linear needs low <= high");
  const double lip = weights.norm();
  return Payoff{[w = std::move(weights), low, high](const Vector& x) { return std::clamp(w.dot(x), low, high); },
                std::max(std::abs(low), std::abs(high)), lip};
}

Payoff ramp(Vector weights, double start, double width, double height) {
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "ramp width must be positive");
  const double lip = std::abs(height) * weights.norm() / width;
  return Payoff{[w = std::move(weights), start, width, height](const Vector& x) {
                  return height * std::clamp((w.dot(x) - start) / width, 0.0, 1.0);
                },
                std::abs(height), lip};
}

Payoff quadratic_clip(double scale, double cap) {
  if (!(cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "quadratic_clip cap must be positive");
  return Payoff{[scale, cap](const Vector& x) { return scale * std::min(x.squaredNorm(), cap); },
                std::abs(scale) * cap, 2.0 * std::abs(scale) * std::sqrt(cap)};
}

Payoff table(Vector weights, std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw Error(ErrorCode::InvalidArgument, "table payoff needs at least one knot");
  std::sort(knots.begin(), knots.end());
  double bound = 0.0, slope = 0.0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    bound = std::max(bound, std::abs(knots[i].second));
    if (i > 0) {
      const double dx = knots[i].first - knots[i - 1].first;
      if (!(dx > 0.0)) throw Error(ErrorCode::InvalidArgument, "table knots must be distinct");
      slope = std::max(slope, std::abs(knots[i].second - knots[i - 1].second) / dx);
    }
  }
  const double lip = slope * weights.norm();
  return Payoff{[w = std::move(weights), k = std::move(knots)](const Vector& x) {
                  const double s = w.dot(x);
                  if (s <= k.front().first) return k.front().second;
                  if (s >= k.back().first) return k.back().second;
                  auto hi = std::upper_bound(k.begin(), k.end(), s,
                                             [](double v, const auto& knot) { return v < knot.first; });
                  auto lo = hi - 1;
                  const double r = (s - lo->first) / (hi->first - lo->first);
                  return lo->second + r * (hi->second - lo->second);
                },
                bound, lip};
}

Payoff bump(Vector center, double width, double height) {
  if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "bump width must be positive");
  return Payoff{[c = std::move(center), width, height](const Vector& x) {
                  return height * std::max(0.0, 1.0 - (x - c).norm() / width);
                },
                std::abs(height), std::abs(height) / width};
}

}  // namespace glevy::payoffs
