#include "glevy/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace glevy {

GridSpec::GridSpec(Vector lower, Vector upper, std::vector<int> points_per_axis)
    : lower_(std::move(lower)), upper_(std::move(upper)), points_(std::move(points_per_axis)) {
  const auto d = lower_.size();
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one axis");
  if (upper_.size() != d || static_cast<Eigen::Index>(points_.size()) != d)
    throw Error(ErrorCode::DimensionMismatch, "grid bounds and point counts disagree in dimension");
  if (!lower_.allFinite() || !upper_.allFinite()) throw Error(ErrorCode::NonFinite, "grid bounds");

  spacing_.resize(d);
  strides_.resize(static_cast<std::size_t>(d));
  std::size_t stride = 1;
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto n = points_[static_cast<std::size_t>(i)];
    if (!(upper_[i] > lower_[i]))
      throw Error(ErrorCode::InvalidArgument, "grid upper must exceed lower on axis " + std::to_string(i));
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "grid needs >= 3 points on axis " + std::to_string(i));
    spacing_[i] = (upper_[i] - lower_[i]) / (n - 1);
    strides_[static_cast<std::size_t>(i)] = stride;
    stride *= static_cast<std::size_t>(n);
  }
  node_count_ = stride;
}

GridSpec GridSpec::through_origin(const Vector& reach_below, const Vector& reach_above, double dx) {
  if (!(dx > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  const auto d = reach_below.size();
  Vector lower(d), upper(d);
  std::vector<int> points(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const int below = std::max(1, static_cast<int>(std::ceil(reach_below[i] / dx - 1e-9)));
    const int above = std::max(1, static_cast<int>(std::ceil(reach_above[i] / dx - 1e-9)));
    lower[i] = -below * dx;
    upper[i] = above * dx;
    points[static_cast<std::size_t>(i)] = below + above + 1;
  }
  return GridSpec(std::move(lower), std::move(upper), std::move(points));
}

GridSpec GridSpec::concat(const GridSpec& a, const GridSpec& b) {
  Vector lower(a.dim() + b.dim()), upper(a.dim() + b.dim());
  lower << a.lower_, b.lower_;
  upper << a.upper_, b.upper_;
  std::vector<int> points = a.points_;
  points.insert(points.end(), b.points_.begin(), b.points_.end());
  return GridSpec(std::move(lower), std::move(upper), std::move(points));
}

Vector GridSpec::node(std::size_t flat) const {
  Vector x(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const auto n = static_cast<std::size_t>(points(i));
    x[i] = coordinate(i, static_cast<int>(flat % n));
    flat /= n;
  }
  return x;
}

std::vector<int> GridSpec::multi_index(std::size_t flat) const {
  std::vector<int> index(static_cast<std::size_t>(dim()));
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const auto n = static_cast<std::size_t>(points(i));
    index[static_cast<std::size_t>(i)] = static_cast<int>(flat % n);
    flat /= n;
  }
  return index;
}

std::size_t GridSpec::flat_index(const std::vector<int>& index) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) flat += strides_[i] * static_cast<std::size_t>(index[i]);
  return flat;
}

std::size_t GridSpec::nearest_node(const Vector& x) const {
  std::size_t flat = 0;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const double s = std::clamp((x[i] - lower_[i]) / spacing_[i], 0.0, static_cast<double>(points(i) - 1));
    flat += strides_[static_cast<std::size_t>(i)] * static_cast<std::size_t>(std::lround(s));
  }
  return flat;
}

bool GridSpec::contains(const Vector& x) const {
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  return a.points_ == b.points_ && a.lower_ == b.lower_ && a.upper_ == b.upper_;
}

GridFunction::GridFunction(GridSpec spec, Vector values, double time_label)
    : spec_(std::move(spec)), values_(std::move(values)), time_label_(time_label) {
  if (static_cast<std::size_t>(values_.size()) != spec_.node_count())
    throw Error(ErrorCode::DimensionMismatch, "grid function length does not match node count");
  if (!values_.allFinite()) throw Error(ErrorCode::NonFinite, "grid function values");
  if (!(time_label_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time label must be nonnegative");
}

double interpolate(const GridFunction& g, const Vector& x) {
  const auto& spec = g.spec();
  const auto d = spec.dim();
  if (x.size() != d) throw Error(ErrorCode::DimensionMismatch, "interpolation point dimension");

  // Per axis: lower cell index and the weight of the upper node.
  std::size_t base = 0;
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1> frac(d);
  std::vector<std::size_t> step(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const int last = spec.points(i) - 1;
    double s = std::clamp((x[i] - spec.lower()[i]) / spec.spacing(i), 0.0, static_cast<double>(last));
    // Node coordinates carry round-off; land them back on the node.
    if (const double r = std::round(s); std::abs(s - r) <= 1e-12 * std::max(1.0, r)) s = r;
    int cell = std::min(static_cast<int>(s), last - 1);
    frac[i] = s - cell;
    base += spec.stride(i) * static_cast<std::size_t>(cell);
    step[static_cast<std::size_t>(i)] = spec.stride(i);
  }

  double value = 0.0;
  const std::size_t corners = std::size_t{1} << d;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = base;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (c >> i & 1u) {
        w *= frac[i];
        flat += step[static_cast<std::size_t>(i)];
      } else {
        w *= 1.0 - frac[i];
      }
    }
    if (w != 0.0) value += w * g[flat];
  }
  return value;
}

GridFunction sample(const Payoff& f, const GridSpec& spec, double time_label) {
  Vector values(static_cast<Eigen::Index>(spec.node_count()));
  for (std::size_t n = 0; n < spec.node_count(); ++n) values[static_cast<Eigen::Index>(n)] = f(spec.node(n));
  return GridFunction(spec, std::move(values), time_label);
}

PayoffCheck check_payoff(const Payoff& f, const GridSpec& spec, std::uint64_t seed, int pairs) {
  PayoffCheck result;
  for (std::size_t n = 0; n < spec.node_count(); ++n)
    result.max_bound_excess = std::max(result.max_bound_excess, std::abs(f(spec.node(n))) - f.bound);

  std::mt19937_64 rng(seed);
  const auto d = spec.dim();
  auto draw = [&] {
    Vector x(d);
    for (Eigen::Index i = 0; i < d; ++i)
      x[i] = std::uniform_real_distribution<double>(spec.lower()[i], spec.upper()[i])(rng);
    return x;
  };
  for (int p = 0; p < pairs; ++p) {
    const Vector x = draw();
    const Vector y = draw();
    const double excess = std::abs(f(x) - f(y)) - f.lipschitz * (x - y).norm();
    result.max_lipschitz_excess = std::max(result.max_lipschitz_excess, excess);
  }
  return result;
}

}  // namespace glevy
