#pragma once

#include "lssmor/common.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>

namespace lssmor::linalg {

/// Smallest |U_ii| relative to the largest entry of U. The LU-based
/// condition estimate alone misses exact zero pivots.
template <typename Scalar>
double pivot_ratio(const Eigen::PartialPivLU<Mat<Scalar>>& lu) {
  const double top = lu.matrixLU().template triangularView<Eigen::Upper>().toDenseMatrix().cwiseAbs().maxCoeff();
  if (!(top > 0.0)) return 0.0;
  return lu.matrixLU().diagonal().cwiseAbs().minCoeff() / top;
}

/// LU factorization that refuses to exist when the matrix is numerically
/// singular (reciprocal condition estimate below the threshold or non-finite).
template <typename Scalar>
std::optional<Eigen::PartialPivLU<Mat<Scalar>>> try_factor(const Mat<Scalar>& m,
                                                            double min_rcond = kSingularRcond) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (m.rows() == 0) return Eigen::PartialPivLU<Mat<Scalar>>(m);
  if (!m.allFinite()) return std::nullopt;
  Eigen::PartialPivLU<Mat<Scalar>> lu(m);
  const double rc = std::min(lu.rcond(), pivot_ratio<Scalar>(lu));
  if (!(rc >= min_rcond) || !std::isfinite(rc)) return std::nullopt;
  return lu;
}

template <typename Scalar>
double rcond(const Mat<Scalar>& m) {
  if (m.rows() == 0) return 1.0;
  if (!m.allFinite()) return 0.0;
  const Eigen::PartialPivLU<Mat<Scalar>> lu(m);
  const double rc = std::min(lu.rcond(), pivot_ratio<Scalar>(lu));
  return std::isfinite(rc) ? rc : 0.0;
}

/// Kronecker product `a ⊗ b`.
template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DA::Scalar, typename DB::Scalar>::ReturnType;
  Mat<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Column-stacking vectorization.
template <typename Scalar>
Vec<Scalar> vec(const Mat<Scalar>& m) {
  return Eigen::Map<const Vec<Scalar>>(m.data(), m.size());
}

template <typename Scalar>
Mat<Scalar> unvec(const Vec<Scalar>& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat<Scalar>>(v.data(), rows, cols);
}

/// Solves A X + X B = C with the complex Schur (Bartels–Stewart) method.
inline MatrixXcd solve_sylvester(const MatrixXcd& a, const MatrixXcd& b, const MatrixXcd& c) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || c.rows() != a.rows() || c.cols() != b.rows())
    throw DimensionMismatch("solve_sylvester: incompatible shapes");
  const Eigen::Index n = a.rows(), m = b.rows();
  if (n == 0 || m == 0) return MatrixXcd::Zero(n, m);

  Eigen::ComplexSchur<MatrixXcd> sa(a), sb(b);
  const MatrixXcd& ta = sa.matrixT();
  const MatrixXcd& tb = sb.matrixT();
  const MatrixXcd f = sa.matrixU().adjoint() * c * sb.matrixU();

  MatrixXcd y(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    VectorXcd rhs = f.col(k);
    if (k > 0) rhs.noalias() -= y.leftCols(k) * tb.col(k).head(k);
    MatrixXcd shifted = ta;
    shifted.diagonal().array() += tb(k, k);
    for (Eigen::Index i = 0; i < n; ++i)
      if (shifted(i, i) == Complex(0.0))
        throw Error("SingularSylvester", "Sylvester operator is singular (common eigenvalue)");
    y.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return sa.matrixU() * y * sb.matrixU().adjoint();
}

/// Solves A X + X A^T + Q = 0 for real A, Q; symmetric part returned.
inline MatrixXd solve_lyapunov(const MatrixXd& a, const MatrixXd& q) {
  const MatrixXcd x = solve_sylvester(a.cast<Complex>(), a.transpose().cast<Complex>(), -q.cast<Complex>());
  MatrixXd xr = x.real();
  return 0.5 * (xr + xr.transpose());
}

/// Factor of a symmetric positive semidefinite matrix: `p = f * f^T`.
/// Tiny negative eigenvalues caused by rounding are clipped to zero.
inline MatrixXd psd_factor(const MatrixXd& p) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (p + p.transpose()));
  VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

/// Number of singular values strictly above `tol * sigma_max`.
inline int numerical_rank(const VectorXd& singular_values, double tol) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (!(top > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i)
    if (singular_values[i] > tol * top) r = static_cast<int>(i) + 1;
  return r;
}

inline double rel_diff(const MatrixXcd& a, const MatrixXcd& b) {
  if (a.size() == 0) return 0.0;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace lssmor::linalg
