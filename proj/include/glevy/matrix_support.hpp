#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "glevy/error.hpp"

namespace glevy {

template <typename Scalar>
using SymMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar tol = 1e-12) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

/// X (I - gamma X)^{-1}, symmetrized. Requires X symmetric with every
/// eigenvalue strictly below 1 / gamma.
///
/// Throws Singular when I - gamma X has condition number above 1e10 and
/// InvalidArgument when X is not symmetric, gamma <= 0, or X >= (1/gamma) I
/// fails strictly on a well-conditioned I - gamma X.
template <typename Derived>
SymMatrix<typename Derived::Scalar> gamma_transform(const Eigen::MatrixBase<Derived>& x,
                                                    typename Derived::Scalar gamma) {
  using Scalar = typename Derived::Scalar;
  if (!(gamma > Scalar(0))) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (!is_symmetric(x, Scalar(1e-12) * std::max(Scalar(1), x.cwiseAbs().maxCoeff())))
    throw Error(ErrorCode::InvalidArgument, "gamma_transform needs a symmetric matrix");

  const auto n = x.rows();
  const SymMatrix<Scalar> shifted = SymMatrix<Scalar>::Identity(n, n) - gamma * x;
  const Eigen::SelfAdjointEigenSolver<SymMatrix<Scalar>> eig(shifted, Eigen::EigenvaluesOnly);
  const auto& mu = eig.eigenvalues();
  const Scalar smallest = mu.cwiseAbs().minCoeff();
  if (!(smallest > Scalar(0)) || mu.cwiseAbs().maxCoeff() / smallest > Scalar(1e10))
    throw Error(ErrorCode::Singular, "I - gamma X is numerically singular");
  if (mu.minCoeff() <= Scalar(0))
    throw Error(ErrorCode::InvalidArgument, "X must lie strictly below (1/gamma) I");

  // X and I - gamma X commute, so (I - gamma X)^{-1} X = X (I - gamma X)^{-1}.
  const SymMatrix<Scalar> out = shifted.ldlt().solve(x.derived());
  return Scalar(0.5) * (out + out.transpose());
}

/// nd x nd block matrix with (n-1) I on the diagonal blocks and -I elsewhere;
/// satisfies J^2 = n J.
template <typename Scalar = double>
SymMatrix<Scalar> j_matrix(int n, int d) {
  if (n < 1 || d < 1) throw Error(ErrorCode::InvalidArgument, "j_matrix needs n, d >= 1");
  const auto size = static_cast<Eigen::Index>(n) * d;
  SymMatrix<Scalar> j(size, size);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      j.block(a * d, b * d, d, d) =
          (a == b ? Scalar(n - 1) : Scalar(-1)) * SymMatrix<Scalar>::Identity(d, d);
  return j;
}

/// Smallest eigenvalue of a symmetric matrix; A >= B is checked as min_eig(A - B) >= -tol.
template <typename Derived>
typename Derived::Scalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const SymMatrix<Scalar> sym = Scalar(0.5) * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<SymMatrix<Scalar>>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace glevy
