#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "glevy/grid.hpp"

namespace glevy::detail {

/// Precomputed discretization of one scenario's generator on a fixed grid:
/// jumps by clamped multilinear interpolation, drift by upwinding, diffusion
/// by central differences with the monotone 7-point cross stencil.
class ScenarioStencil {
 public:
  ScenarioStencil(const GridSpec& grid, const Scenario& scenario);

  /// Bound on the magnitude of the diagonal coefficient; the explicit step
  /// u + dt L u is monotone whenever dt * rate() <= 1.
  double rate() const { return rate_; }

  /// out[n] = (L u)[n] for n in [begin, end).
  void apply(std::span<const double> u, std::span<double> out, std::size_t begin, std::size_t end) const;

 private:
  static constexpr int kMaxDim = 8;
  using Index = std::array<int, kMaxDim>;

  struct AtomShift {
    double rate;
    Index shift;
    std::array<double, kMaxDim> frac;
  };
  struct CrossTerm {
    int i, j;
    double coef;  // |A_ij| / (2 dx_i dx_j)
    bool positive;
  };

  std::size_t flat(const Index& idx, int axis_a = -1, int off_a = 0, int axis_b = -1, int off_b = 0) const;

  int dim_;
  std::array<int, kMaxDim> points_{};
  std::array<std::size_t, kMaxDim> strides_{};
  std::vector<AtomShift> atoms_;
  std::array<double, kMaxDim> drift_{};      // q_i / dx_i
  std::array<double, kMaxDim> diffusion_{};  // A_ii / (2 dx_i^2)
  std::vector<CrossTerm> cross_;
  double rate_ = 0.0;
};

}  // namespace glevy::detail
