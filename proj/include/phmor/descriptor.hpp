// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_DESCRIPTOR_HPP
#define PHMOR_DESCRIPTOR_HPP

#include <complex>
#include <memory>
#include <vector>

#include "phmor/fem.hpp"
#include "phmor/linalg.hpp"

namespace phmor
{

struct BlockDims
{
  Eigen::Index k1 = 0;  // pressure
  Eigen::Index k2 = 0;  // flux
  Eigen::Index k3 = 0;  // junction multipliers

  Eigen::Index total() const { return k1 + k2 + k3; }
};

// Linear time-invariant system E x' + A x = B u, y = B^T x with
//
//   E = [M1 0 0; 0 M2 0; 0 0 0],  A = [0 G 0; -G^T D -N^T; 0 N 0],  B = [0; B2; 0].
//
// The blocks are kept alongside the assembled matrices. mass_weights holds the
// pressure-block coordinates of the constant one, so mass = weights^T M1 x1.
class DescriptorSystem
{
public:
  DescriptorSystem() = default;
  DescriptorSystem(SparseMatrix M1, SparseMatrix M2, SparseMatrix D, SparseMatrix G,
                   SparseMatrix N, Matrix B2, Vector mass_weights);

  const SparseMatrix &E() const { return E_; }
  const SparseMatrix &A() const { return A_; }
  const Matrix &B() const { return B_; }
  const BlockDims &dims() const { return dims_; }
  Eigen::Index size() const { return dims_.total(); }
  Eigen::Index inputs() const { return B_.cols(); }

  const SparseMatrix &M1() const { return M1_; }
  const SparseMatrix &M2() const { return M2_; }
  const SparseMatrix &D() const { return D_; }
  const SparseMatrix &G() const { return G_; }
  const SparseMatrix &N() const { return N_; }
  const Matrix &B2() const { return B2_; }
  const Vector &mass_weights() const { return mass_weights_; }

  // Symmetric part of A, blockdiag(0, D, 0).
  SparseMatrix dissipation() const;

  SparseMatrix pencil(double s) const;

  // Views of the three state components.
  auto pressure(const Vector &x) const { return x.head(dims_.k1); }
  auto flux(const Vector &x) const { return x.segment(dims_.k1, dims_.k2); }
  auto multiplier(const Vector &x) const { return x.tail(dims_.k3); }

  // Pads (x1, x2) with a zero multiplier.
  Vector state(const Vector &x1, const Vector &x2) const;

  double mass(const Vector &x) const;
  double energy(const Vector &x) const;
  double dissipation_rate(const Vector &x) const;
  Vector output(const Vector &x) const;

private:
  SparseMatrix M1_, M2_, D_, G_, N_;
  Matrix B2_;
  Vector mass_weights_;
  SparseMatrix E_, A_;
  Matrix B_;
  BlockDims dims_;
};

DescriptorSystem from_fem(const FemSystem &sys);

// Factorization of s0 E + A that is reused for many right-hand sides.
// Throws ErrorKind::SingularPencil (value = rcond estimate) when singular.
class ShiftedSolver
{
public:
  ShiftedSolver(const DescriptorSystem &sys, double s0);

  double shift() const { return s0_; }
  double rcond() const { return lu_.rcond(); }
  Matrix solve(const Matrix &rhs) const;

private:
  double s0_;
  LuSolver lu_;
};

// Solves (s0 E + A) x = rhs.
Matrix solve_shifted(const DescriptorSystem &sys, double s0, const Matrix &rhs);

// x_bar with A x_bar = B u. Throws ErrorKind::NoSteadyState if A is singular.
Vector steady_state(const DescriptorSystem &sys, const Vector &u);

struct MomentSequence
{
  double s0 = 0.0;
  std::vector<Matrix> moments;         // m_l = B^T r_l, inputs x inputs
  std::vector<Matrix> krylov_vectors;  // r_l, n x inputs
};

// r_0 = (s0 E + A)^{-1} B, r_l = (s0 E + A)^{-1} E r_{l-1}; the moments are
// the coefficients of H(s) = sum_l m_l (s0 - s)^l.
MomentSequence moments(const DescriptorSystem &sys, double s0, int count);

// H(s) = B^T (s E + A)^{-1} B.
Matrix transfer(const DescriptorSystem &sys, double s);
ComplexMatrix transfer(const DescriptorSystem &sys, std::complex<double> s);

}  // namespace phmor

#endif  // PHMOR_DESCRIPTOR_HPP
