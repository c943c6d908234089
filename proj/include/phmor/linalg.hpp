// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_LINALG_HPP
#define PHMOR_LINALG_HPP

#include <complex>
#include <memory>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace phmor
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexSparseMatrix = Eigen::SparseMatrix<std::complex<double>>;

// Pivots below this reciprocal condition estimate count as singular.
inline constexpr double kSingularRcond = 1e-12;

// Systems up to this order are factorized densely.
inline constexpr Eigen::Index kDenseLimit = 400;

// LU factorization of a square real matrix with a reciprocal 1-norm condition
// estimate. Small systems use dense partial pivoting; larger ones use sparse LU.
// Factorization never throws: callers inspect rcond() and decide.
class LuSolver
{
public:
  explicit LuSolver(const SparseMatrix &matrix);
  ~LuSolver();
  LuSolver(LuSolver &&) noexcept;
  LuSolver &operator=(LuSolver &&) noexcept;

  Eigen::Index size() const { return size_; }
  double rcond() const { return rcond_; }
  bool singular() const { return !(rcond_ >= kSingularRcond); }

  Matrix solve(const Matrix &rhs) const;
  Matrix solve_transposed(const Matrix &rhs) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Eigen::Index size_ = 0;
  double rcond_ = 0.0;
};

// Complex counterpart, used for transfer function evaluation off the real axis.
class ComplexLuSolver
{
public:
  explicit ComplexLuSolver(const ComplexSparseMatrix &matrix);
  ~ComplexLuSolver();

  double rcond() const { return rcond_; }
  bool singular() const { return !(rcond_ >= kSingularRcond); }
  ComplexMatrix solve(const ComplexMatrix &rhs) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double rcond_ = 0.0;
};

// Extremes of the spectrum of a symmetric matrix. Dense eigensolver for small
// sizes, power / inverse iteration otherwise. A failed factorization (matrix
// not positive definite) reports min = 0.
struct SymmetricSpectrumBounds
{
  double min = 0.0;
  double max = 0.0;
};
SymmetricSpectrumBounds symmetric_spectrum_bounds(const SparseMatrix &matrix);

// max |X - X^T|
double symmetry_defect(const SparseMatrix &matrix);

// Orthonormal (Euclidean) basis of range(Y) with singular values above
// rank_tol * sigma_max.
Matrix range_basis(const Matrix &Y, double rank_tol = 1e-12);

SparseMatrix to_sparse(const Matrix &dense);

}  // namespace phmor

#endif  // PHMOR_LINALG_HPP
