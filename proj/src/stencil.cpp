#include "stencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glevy::detail {

ScenarioStencil::ScenarioStencil(const GridSpec& grid, const Scenario& scenario)
    : dim_(static_cast<int>(grid.dim())) {
  if (dim_ > kMaxDim) throw Error(ErrorCode::DimensionOverflow, "stencil supports at most 8 axes");
  if (scenario.dim() != grid.dim()) throw Error(ErrorCode::DimensionMismatch, "scenario and grid dimension differ");

  const Vector& dx = grid.spacing();
  for (int i = 0; i < dim_; ++i) {
    points_[i] = grid.points(i);
    strides_[i] = grid.stride(i);
  }

  const double min_dx = dx.minCoeff();
  for (const auto& atom : scenario.atoms) {
    if (atom.size.norm() < 0.5 * min_dx)
      throw Error(ErrorCode::GridTooCoarse,
                  "jump of size " + std::to_string(atom.size.norm()) + " is below half a grid cell");
    if (atom.rate == 0.0) continue;
    AtomShift a{atom.rate, {}, {}};
    for (int i = 0; i < dim_; ++i) {
      const double cells = atom.size[i] / dx[i];
      const double whole = std::floor(cells);
      a.shift[i] = static_cast<int>(whole);
      a.frac[i] = cells - whole;
    }
    atoms_.push_back(a);
    rate_ += atom.rate;
  }

  for (int i = 0; i < dim_; ++i) {
    drift_[i] = scenario.drift[i] / dx[i];
    rate_ += std::abs(drift_[i]);
  }

  const Matrix cov = scenario.covariance();
  for (int i = 0; i < dim_; ++i) {
    diffusion_[i] = 0.5 * cov(i, i) / (dx[i] * dx[i]);
    rate_ += 2.0 * diffusion_[i];
  }
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      const double a = 0.5 * (cov(i, j) + cov(j, i));
      if (a == 0.0) continue;
      const double coef = std::abs(a) / (2.0 * dx[i] * dx[j]);
      cross_.push_back({i, j, coef, a > 0.0});
      rate_ += 2.0 * coef;
    }
  }

  // Every off-center coefficient must stay nonnegative: the axis neighbours
  // lose |A_ij| / (2 dx_i dx_j) to each cross pair they take part in.
  for (int i = 0; i < dim_; ++i) {
    double axis_coef = diffusion_[i];
    for (const auto& c : cross_)
      if (c.i == i || c.j == i) axis_coef -= c.coef;
    if (axis_coef < -1e-12 * std::max(1.0, diffusion_[i]))
      throw Error(ErrorCode::NonmonotoneDiffusion,
                  "Q Q^T is not diagonally dominant enough on axis " + std::to_string(i));
  }
}

std::size_t ScenarioStencil::flat(const Index& idx, int axis_a, int off_a, int axis_b, int off_b) const {
  std::size_t f = 0;
  for (int i = 0; i < dim_; ++i) {
    int k = idx[i];
    if (i == axis_a) k += off_a;
    if (i == axis_b) k += off_b;
    k = std::clamp(k, 0, points_[i] - 1);
    f += strides_[i] * static_cast<std::size_t>(k);
  }
  return f;
}

void ScenarioStencil::apply(std::span<const double> u, std::span<double> out, std::size_t begin,
                            std::size_t end) const {
  Index idx{};
  {
    std::size_t rest = begin;
    for (int i = 0; i < dim_; ++i) {
      idx[i] = static_cast<int>(rest % static_cast<std::size_t>(points_[i]));
      rest /= static_cast<std::size_t>(points_[i]);
    }
  }

  const std::size_t corners = std::size_t{1} << dim_;
  for (std::size_t n = begin; n < end; ++n) {
    const double center = u[n];
    double acc = 0.0;

    for (const auto& a : atoms_) {
      double landed = 0.0;
      for (std::size_t c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t f = 0;
        for (int i = 0; i < dim_; ++i) {
          const bool up = (c >> i) & 1u;
          w *= up ? a.frac[i] : 1.0 - a.frac[i];
          const int k = std::clamp(idx[i] + a.shift[i] + (up ? 1 : 0), 0, points_[i] - 1);
          f += strides_[i] * static_cast<std::size_t>(k);
        }
        if (w != 0.0) landed += w * u[f];
      }
      acc += a.rate * (landed - center);
    }

    for (int i = 0; i < dim_; ++i) {
      if (drift_[i] > 0.0)
        acc += drift_[i] * (u[flat(idx, i, +1)] - center);
      else if (drift_[i] < 0.0)
        acc -= drift_[i] * (u[flat(idx, i, -1)] - center);

      if (diffusion_[i] != 0.0)
        acc += diffusion_[i] * (u[flat(idx, i, +1)] + u[flat(idx, i, -1)] - 2.0 * center);
    }

    for (const auto& c : cross_) {
      const double axes = u[flat(idx, c.i, +1)] + u[flat(idx, c.i, -1)] + u[flat(idx, c.j, +1)] +
                          u[flat(idx, c.j, -1)];
      const double diag = c.positive ? u[flat(idx, c.i, +1, c.j, +1)] + u[flat(idx, c.i, -1, c.j, -1)]
                                     : u[flat(idx, c.i, +1, c.j, -1)] + u[flat(idx, c.i, -1, c.j, +1)];
      acc += c.coef * (diag - axes + 2.0 * center);
    }

    out[n] = acc;

    for (int i = 0; i < dim_; ++i) {
      if (++idx[i] < points_[i]) break;
      idx[i] = 0;
    }
  }
}

}  // namespace glevy::detail
