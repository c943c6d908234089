// SPDX-License-Identifier: Apache-2.0

#include "phmor/descriptor.hpp"

#include <sstream>
#include <utility>

#include "phmor/error.hpp"

namespace phmor
{

namespace
{

using Triplet = Eigen::Triplet<double>;

void append_block(std::vector<Triplet> &t, const SparseMatrix &block, Eigen::Index row0,
                  Eigen::Index col0, double scale)
{
  for (Eigen::Index k = 0; k < block.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(block, k); it; ++it)
    {
      t.emplace_back(static_cast<int>(row0 + it.row()), static_cast<int>(col0 + it.col()),
                     scale * it.value());
    }
  }
}

std::string describe_singular(double s, double rcond)
{
  std::ostringstream os;
  os << "pencil s*E + A is numerically singular at s = " << s << " (rcond " << rcond << ")";
  return os.str();
}

}  // namespace

DescriptorSystem::DescriptorSystem(SparseMatrix M1, SparseMatrix M2, SparseMatrix D,
                                   SparseMatrix G, SparseMatrix N, Matrix B2,
                                   Vector mass_weights)
  : M1_(std::move(M1)), M2_(std::move(M2)), D_(std::move(D)), G_(std::move(G)),
    N_(std::move(N)), B2_(std::move(B2)), mass_weights_(std::move(mass_weights))
{
  dims_ = BlockDims{M1_.rows(), M2_.rows(), N_.rows()};
  const bool conforming = M1_.cols() == dims_.k1 && M2_.cols() == dims_.k2 &&
                          D_.rows() == dims_.k2 && D_.cols() == dims_.k2 &&
                          G_.rows() == dims_.k1 && G_.cols() == dims_.k2 &&
                          N_.cols() == dims_.k2 && B2_.rows() == dims_.k2 &&
                          mass_weights_.size() == dims_.k1;
  if (!conforming)
  {
    throw Error(ErrorKind::Precondition, "descriptor", "block dimensions do not conform");
  }
  const Eigen::Index n = dims_.total();
  const Eigen::Index o2 = dims_.k1, o3 = dims_.k1 + dims_.k2;

  std::vector<Triplet> e, a;
  append_block(e, M1_, 0, 0, 1.0);
  append_block(e, M2_, o2, o2, 1.0);
  append_block(a, G_, 0, o2, 1.0);
  SparseMatrix Gt = G_.transpose();
  append_block(a, Gt, o2, 0, -1.0);
  append_block(a, D_, o2, o2, 1.0);
  SparseMatrix Nt = N_.transpose();
  append_block(a, Nt, o2, o3, -1.0);
  append_block(a, N_, o3, o2, 1.0);
  E_.resize(n, n);
  E_.setFromTriplets(e.begin(), e.end());
  A_.resize(n, n);
  A_.setFromTriplets(a.begin(), a.end());
  B_ = Matrix::Zero(n, B2_.cols());
  B_.middleRows(o2, dims_.k2) = B2_;
}

SparseMatrix DescriptorSystem::dissipation() const
{
  std::vector<Triplet> t;
  append_block(t, D_, dims_.k1, dims_.k1, 1.0);
  SparseMatrix R(size(), size());
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

SparseMatrix DescriptorSystem::pencil(double s) const
{
  SparseMatrix P = s * E_ + A_;
  P.makeCompressed();
  return P;
}

Vector DescriptorSystem::state(const Vector &x1, const Vector &x2) const
{
  if (x1.size() != dims_.k1 || x2.size() != dims_.k2)
  {
    throw Error(ErrorKind::Precondition, "descriptor", "state components do not conform");
  }
  Vector x = Vector::Zero(size());
  x.head(dims_.k1) = x1;
  x.segment(dims_.k1, dims_.k2) = x2;
  return x;
}

double DescriptorSystem::mass(const Vector &x) const
{
  return mass_weights_.dot(M1_ * pressure(x));
}

double DescriptorSystem::energy(const Vector &x) const
{
  const Vector x1 = pressure(x);
  const Vector x2 = flux(x);
  return 0.5 * (x1.dot(M1_ * x1) + x2.dot(M2_ * x2));
}

double DescriptorSystem::dissipation_rate(const Vector &x) const
{
  const Vector x2 = flux(x);
  return x2.dot(D_ * x2);
}

Vector DescriptorSystem::output(const Vector &x) const
{
  return B2_.transpose() * flux(x);
}

DescriptorSystem from_fem(const FemSystem &sys)
{
  return DescriptorSystem(sys.M1, sys.M2, sys.D, sys.G, sys.N, sys.B2, sys.o1);
}

ShiftedSolver::ShiftedSolver(const DescriptorSystem &sys, double s0)
  : s0_(s0), lu_(sys.pencil(s0))
{
  if (lu_.singular())
  {
    throw Error(ErrorKind::SingularPencil, "descriptor", describe_singular(s0, lu_.rcond()),
                lu_.rcond());
  }
}

Matrix ShiftedSolver::solve(const Matrix &rhs) const
{
  return lu_.solve(rhs);
}

Matrix solve_shifted(const DescriptorSystem &sys, double s0, const Matrix &rhs)
{
  if (rhs.rows() != sys.size())
  {
    throw Error(ErrorKind::Precondition, "descriptor", "right-hand side does not conform");
  }
  return ShiftedSolver(sys, s0).solve(rhs);
}

Vector steady_state(const DescriptorSystem &sys, const Vector &u)
{
  if (u.size() != sys.inputs())
  {
    throw Error(ErrorKind::Precondition, "descriptor", "input vector does not conform");
  }
  LuSolver lu(sys.A());
  if (lu.singular())
  {
    throw Error(ErrorKind::NoSteadyState, "descriptor",
                "system matrix A is singular; no unique steady state", lu.rcond());
  }
  return lu.solve(sys.B() * u);
}

MomentSequence moments(const DescriptorSystem &sys, double s0, int count)
{
  if (count < 1)
  {
    throw Error(ErrorKind::Precondition, "descriptor", "moment count must be positive");
  }
  ShiftedSolver solver(sys, s0);
  MomentSequence seq;
  seq.s0 = s0;
  Matrix r = solver.solve(sys.B());
  for (int l = 0; l < count; ++l)
  {
    if (l > 0)
    {
      r = solver.solve(sys.E() * r);
    }
    seq.moments.push_back(sys.B().transpose() * r);
    seq.krylov_vectors.push_back(r);
  }
  return seq;
}

Matrix transfer(const DescriptorSystem &sys, double s)
{
  return sys.B().transpose() * solve_shifted(sys, s, sys.B());
}

ComplexMatrix transfer(const DescriptorSystem &sys, std::complex<double> s)
{
  ComplexSparseMatrix P = s * sys.E().cast<std::complex<double>>() +
                          sys.A().cast<std::complex<double>>();
  ComplexLuSolver lu(P);
  if (lu.singular())
  {
    throw Error(ErrorKind::SingularPencil, "descriptor", describe_singular(std::abs(s), lu.rcond()),
                lu.rcond());
  }
  const ComplexMatrix Bc = sys.B().cast<std::complex<double>>();
  return Bc.transpose() * lu.solve(Bc);
}

}  // namespace phmor
