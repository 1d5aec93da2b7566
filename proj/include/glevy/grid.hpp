#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "glevy/core.hpp"

namespace glevy {

/// Uniform tensor grid on a box. Flat node indices run with axis 0 fastest.
class GridSpec {
 public:
  /// Throws InvalidArgument unless upper > lower componentwise and every axis has >= 3 points.
  GridSpec(Vector lower, Vector upper, std::vector<int> points_per_axis);

  /// Grid with spacing `dx` on every axis whose nodes include the origin:
  /// lower = -ceil(reach_below/dx) dx, upper = ceil(reach_above/dx) dx.
  static GridSpec through_origin(const Vector& reach_below, const Vector& reach_above, double dx);

  /// Cartesian product, axes of `a` first.
  static GridSpec concat(const GridSpec& a, const GridSpec& b);

  Eigen::Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const Vector& spacing() const { return spacing_; }
  double spacing(Eigen::Index axis) const { return spacing_[axis]; }
  int points(Eigen::Index axis) const { return points_[static_cast<std::size_t>(axis)]; }
  const std::vector<int>& points_per_axis() const { return points_; }
  std::size_t stride(Eigen::Index axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  std::size_t node_count() const { return node_count_; }

  /// Coordinate of node `i` along `axis`.
  double coordinate(Eigen::Index axis, int i) const {
    return i == points(axis) - 1 ? upper_[axis] : lower_[axis] + i * spacing_[axis];
  }

  Vector node(std::size_t flat) const;
  std::vector<int> multi_index(std::size_t flat) const;
  std::size_t flat_index(const std::vector<int>& index) const;

  /// Flat index of the node closest to x (clamped to the box).
  std::size_t nearest_node(const Vector& x) const;

  bool contains(const Vector& x) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b);

 private:
  Vector lower_;
  Vector upper_;
  Vector spacing_;
  std::vector<int> points_;
  std::vector<std::size_t> strides_;
  std::size_t node_count_ = 0;
};

/// Samples of u(t, .) on a GridSpec.
class GridFunction {
 public:
  /// Throws NonFinite on non-finite values, DimensionMismatch on a size mismatch,
  /// InvalidArgument on a negative time label.
  GridFunction(GridSpec spec, Vector values, double time_label = 0.0);

  const GridSpec& spec() const { return spec_; }
  const Vector& values() const { return values_; }
  double time_label() const { return time_label_; }
  double operator[](std::size_t flat) const { return values_[static_cast<Eigen::Index>(flat)]; }

  /// max |value|
  double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

 private:
  GridSpec spec_;
  Vector values_;
  double time_label_;
};

/// Clamped multilinear interpolation: points outside the box are projected
/// onto it first, so the result is a convex combination of node values.
double interpolate(const GridFunction& g, const Vector& x);

/// Evaluates `f` at every node.
GridFunction sample(const Payoff& f, const GridSpec& spec, double time_label = 0.0);

struct PayoffCheck {
  double max_bound_excess = 0.0;      // max(|f(x)| - bound, 0) over grid nodes
  double max_lipschitz_excess = 0.0;  // max(|f(x)-f(y)| - L|x-y|, 0) over random pairs
  bool ok(double tol = 1e-12) const { return max_bound_excess <= tol && max_lipschitz_excess <= tol; }
};

/// Spot-checks a payoff's declared bound on every grid node and its
/// Lipschitz constant on `pairs` random pairs drawn inside the box.
PayoffCheck check_payoff(const Payoff& f, const GridSpec& spec, std::uint64_t seed, int pairs = 256);

}  // namespace glevy
