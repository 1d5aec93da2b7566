#pragma once

#include <utility>
#include <vector>

#include "glevy/core.hpp"

// Named bounded Lipschitz payoffs. Each one acts on s = <weights, x> except
// quadratic_clip and bump, which use the Euclidean geometry of x.
namespace glevy::payoffs {

Payoff constant(double value);

/// clamp(<weights, x>, low, high)
Payoff clip_linear(Vector weights, double low, double high);

/// height * clamp((<weights, x> - start) / width, 0, 1)
Payoff ramp(Vector weights, double start, double width, double height);

/// scale * min(|x|^2, cap); a negative scale gives the concave variant.
Payoff quadratic_clip(double scale, double cap);

/// Piecewise linear through (knot, value) pairs in <weights, x>, flat beyond the end knots.
Payoff table(Vector weights, std::vector<std::pair<double, double>> knots);

/// Tent of the given height centered at `center` with radius `width`.
Payoff bump(Vector center, double width, double height);

}  // namespace glevy::payoffs
