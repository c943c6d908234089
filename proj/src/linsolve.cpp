// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <variant>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "phmor/linalg.hpp"

namespace phmor
{

namespace
{

template <typename Scalar>
double one_norm(const Eigen::SparseMatrix<Scalar> &A)
{
  double norm = 0.0;
  for (Eigen::Index k = 0; k < A.outerSize(); ++k)
  {
    double column = 0.0;
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(A, k); it; ++it)
    {
      column += std::abs(it.value());
    }
    norm = std::max(norm, column);
  }
  return norm;
}

// Hager/Higham estimate of ||A^{-1}||_1 from solves with A and A^T.
template <typename Scalar, typename Solve, typename SolveT>
double inverse_one_norm_estimate(Eigen::Index n, Solve solve, SolveT solve_t)
{
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (n == 0)
  {
    return 0.0;
  }
  Vec x = Vec::Constant(n, Scalar(1.0 / static_cast<double>(n)));
  double estimate = 0.0;
  Eigen::Index last = -1;
  for (int iter = 0; iter < 5; ++iter)
  {
    Vec y = solve(x);
    if (!y.allFinite())
    {
      return std::numeric_limits<double>::infinity();
    }
    const double current = y.template lpNorm<1>();
    if (iter > 0 && current <= estimate)
    {
      estimate = std::max(estimate, current);
      break;
    }
    estimate = current;
    Vec sign(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
      const double mag = std::abs(y(i));
      sign(i) = mag > 0.0 ? Scalar(y(i) / mag) : Scalar(1.0);
    }
    Vec z = solve_t(sign);
    if (!z.allFinite())
    {
      return std::numeric_limits<double>::infinity();
    }
    Eigen::Index j = 0;
    z.cwiseAbs().maxCoeff(&j);
    if (iter > 0 && (j == last || std::abs(z(j)) <= std::real(z.dot(x))))
    {
      break;
    }
    last = j;
    x.setZero();
    x(j) = Scalar(1.0);
  }
  // Higham's alternating test vector guards against the worst cases of the
  // plain iteration.
  Vec alt(n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    alt(i) = Scalar(sgn * (1.0 + static_cast<double>(i) / std::max<Eigen::Index>(n - 1, 1)));
  }
  Vec y = solve(alt);
  if (!y.allFinite())
  {
    return std::numeric_limits<double>::infinity();
  }
  const double alt_estimate = 2.0 * y.template lpNorm<1>() / (3.0 * static_cast<double>(n));
  return std::max(estimate, alt_estimate);
}

double rcond_from(double norm, double inv_norm)
{
  if (!(norm > 0.0) || !std::isfinite(inv_norm) || !(inv_norm > 0.0))
  {
    return 0.0;
  }
  const double r = 1.0 / (norm * inv_norm);
  return std::isfinite(r) ? r : 0.0;
}

}  // namespace

struct LuSolver::Impl
{
  std::variant<Eigen::PartialPivLU<Matrix>, Eigen::SparseLU<SparseMatrix>> lu;
  bool ok = true;
};

LuSolver::LuSolver(const SparseMatrix &matrix) : impl_(std::make_unique<Impl>()), size_(matrix.rows())
{
  const Eigen::Index n = matrix.rows();
  const double norm = one_norm(matrix);
  if (n == 0)
  {
    rcond_ = 1.0;
    impl_->lu.emplace<0>();
    return;
  }
  if (n <= kDenseLimit)
  {
    auto &lu = impl_->lu.emplace<0>(Matrix(matrix));
    const Matrix &packed = lu.matrixLU();
    const double umax = packed.diagonal().cwiseAbs().maxCoeff();
    const double umin = packed.diagonal().cwiseAbs().minCoeff();
    if (!(umin > 0.0) || !std::isfinite(umax))
    {
      rcond_ = 0.0;
      impl_->ok = false;
      return;
    }
    auto solve = [&](const Vector &b) -> Vector { return lu.solve(b); };
    auto solve_t = [&](const Vector &b) -> Vector { return lu.transpose().solve(b); };
    rcond_ = rcond_from(norm, inverse_one_norm_estimate<double>(n, solve, solve_t));
    return;
  }
  auto &lu = impl_->lu.emplace<1>();
  SparseMatrix compressed = matrix;
  compressed.makeCompressed();
  lu.analyzePattern(compressed);
  lu.factorize(compressed);
  if (lu.info() != Eigen::Success)
  {
    rcond_ = 0.0;
    impl_->ok = false;
    return;
  }
  auto solve = [&](const Vector &b) -> Vector { return lu.solve(b); };
  auto solve_t = [&](const Vector &b) -> Vector { return lu.transpose().solve(b); };
  rcond_ = rcond_from(norm, inverse_one_norm_estimate<double>(n, solve, solve_t));
}

LuSolver::~LuSolver() = default;
LuSolver::LuSolver(LuSolver &&) noexcept = default;
LuSolver &LuSolver::operator=(LuSolver &&) noexcept = default;

Matrix LuSolver::solve(const Matrix &rhs) const
{
  if (size_ == 0)
  {
    return Matrix(0, rhs.cols());
  }
  if (!impl_->ok)
  {
    return Matrix::Constant(rhs.rows(), rhs.cols(), std::numeric_limits<double>::quiet_NaN());
  }
  return std::visit([&](const auto &lu) -> Matrix { return lu.solve(rhs); }, impl_->lu);
}

Matrix LuSolver::solve_transposed(const Matrix &rhs) const
{
  if (size_ == 0)
  {
    return Matrix(0, rhs.cols());
  }
  if (!impl_->ok)
  {
    return Matrix::Constant(rhs.rows(), rhs.cols(), std::numeric_limits<double>::quiet_NaN());
  }
  return std::visit([&](auto &lu) -> Matrix { return lu.transpose().solve(rhs); },
                    impl_->lu);
}

struct ComplexLuSolver::Impl
{
  Eigen::SparseLU<ComplexSparseMatrix> lu;
  bool ok = true;
};

ComplexLuSolver::ComplexLuSolver(const ComplexSparseMatrix &matrix) : impl_(std::make_unique<Impl>())
{
  const Eigen::Index n = matrix.rows();
  if (n == 0)
  {
    rcond_ = 1.0;
    return;
  }
  ComplexSparseMatrix compressed = matrix;
  compressed.makeCompressed();
  auto &lu = impl_->lu;
  lu.analyzePattern(compressed);
  lu.factorize(compressed);
  if (lu.info() != Eigen::Success)
  {
    impl_->ok = false;
    rcond_ = 0.0;
    return;
  }
  using CVec = Eigen::VectorXcd;
  auto solve = [&](const CVec &b) -> CVec { return lu.solve(b); };
  auto solve_t = [&](const CVec &b) -> CVec { return lu.adjoint().solve(b); };
  rcond_ = rcond_from(one_norm(compressed),
                      inverse_one_norm_estimate<std::complex<double>>(n, solve, solve_t));
}

ComplexLuSolver::~ComplexLuSolver() = default;

ComplexMatrix ComplexLuSolver::solve(const ComplexMatrix &rhs) const
{
  if (rhs.rows() == 0)
  {
    return ComplexMatrix(0, rhs.cols());
  }
  return impl_->lu.solve(rhs);
}

SymmetricSpectrumBounds symmetric_spectrum_bounds(const SparseMatrix &matrix)
{
  const Eigen::Index n = matrix.rows();
  SymmetricSpectrumBounds bounds;
  if (n == 0)
  {
    return bounds;
  }
  if (n <= 2 * kDenseLimit)
  {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(matrix), Eigen::EigenvaluesOnly);
    bounds.min = eig.eigenvalues().minCoeff();
    bounds.max = eig.eigenvalues().maxCoeff();
    return bounds;
  }
  // Power iteration for the largest eigenvalue, inverse iteration for the smallest.
  Vector x = Vector::LinSpaced(n, 1.0, 2.0).normalized();
  double lambda = 0.0;
  for (int k = 0; k < 300; ++k)
  {
    Vector y = matrix * x;
    const double next = x.dot(y);
    const double ny = y.norm();
    if (ny == 0.0)
    {
      break;
    }
    x = y / ny;
    if (k > 0 && std::abs(next - lambda) <= 1e-12 * std::abs(next))
    {
      lambda = next;
      break;
    }
    lambda = next;
  }
  bounds.max = lambda;

  Eigen::SimplicialLDLT<SparseMatrix> ldlt(matrix);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
  {
    bounds.min = 0.0;
    return bounds;
  }
  x = Vector::LinSpaced(n, 1.0, 2.0).normalized();
  double mu = 0.0;
  for (int k = 0; k < 500; ++k)
  {
    Vector y = ldlt.solve(x);
    const double next = x.dot(y);
    x = y.normalized();
    if (k > 0 && std::abs(next - mu) <= 1e-12 * std::abs(next))
    {
      mu = next;
      break;
    }
    mu = next;
  }
  bounds.min = mu > 0.0 ? 1.0 / mu : 0.0;
  return bounds;
}

double symmetry_defect(const SparseMatrix &matrix)
{
  SparseMatrix diff = matrix - SparseMatrix(matrix.transpose());
  double defect = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
    {
      defect = std::max(defect, std::abs(it.value()));
    }
  }
  return defect;
}

Matrix range_basis(const Matrix &Y, double rank_tol)
{
  if (Y.cols() == 0 || Y.rows() == 0)
  {
    return Matrix(Y.rows(), 0);
  }
  Eigen::BDCSVD<Matrix> svd(Y, Eigen::ComputeThinU);
  const auto &sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > rank_tol * smax && sigma(rank) > 0.0)
  {
    ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

SparseMatrix to_sparse(const Matrix &dense)
{
  return dense.sparseView(0.0, 0.0);
}

}  // namespace phmor
