// SPDX-License-Identifier: Apache-2.0

#include "phmor/mor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SVD>

#include "phmor/error.hpp"

namespace phmor
{

namespace
{

constexpr const char *kModule = "mor";

// Largest-magnitude entry (or the first one when it is not negligible) is positive.
void fix_sign(Eigen::Ref<Vector> w)
{
  if (w.size() == 0)
    return;
  Eigen::Index imax = 0;
  const double amax = w.cwiseAbs().maxCoeff(&imax);
  const Eigen::Index pivot = std::abs(w(0)) > 1e-3 * amax ? 0 : imax;
  if (w(pivot) < 0.0)
    w = -w;
}

using Cholesky = Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>>;

void factor_mass(Cholesky &llt, const SparseMatrix &M, const char *name)
{
  llt.compute(M);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::AssemblyInvariant, kModule,
                std::string("Cholesky factorization of ") + name + " failed");
}

// Euclidean MGS, twice; columns below tol are dropped.
Matrix euclidean_orthonormalize(const Matrix &Z, double tol)
{
  Matrix Q(Z.rows(), Z.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < Z.cols(); ++j)
  {
    Vector v = Z.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < kept; ++i)
        v -= Q.col(i).dot(v) * Q.col(i);
    const double d = v.norm();
    if (d > tol)
      Q.col(kept++) = v / d;
  }
  return Q.leftCols(kept);
}

// Relative least-squares residual of each column of Y in range(Q), Q orthonormal.
double worst_range_residual(const Matrix &Y, const Matrix &Q, double floor)
{
  double worst = 0.0;
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
  {
    const double ny = Y.col(j).norm();
    if (ny <= floor)
      continue;
    const Vector r = Q.cols() > 0 ? Vector(Y.col(j) - Q * (Q.transpose() * Y.col(j)))
                                  : Vector(Y.col(j));
    worst = std::max(worst, r.norm() / ny);
  }
  return worst;
}

}  // namespace

Matrix ortho(const Matrix &V, const Matrix &W_fixed, const SparseMatrix &M, double tol)
{
  const Eigen::Index n = V.rows();
  if (M.rows() != n || M.cols() != n || (W_fixed.size() > 0 && W_fixed.rows() != n))
    throw Error(ErrorKind::Precondition, kModule, "ortho: dimension mismatch");

  const Matrix MW = W_fixed.size() > 0 ? Matrix(M * W_fixed) : Matrix(n, 0);
  const Matrix MV = M * V;
  double scale = 0.0;
  for (Eigen::Index j = 0; j < V.cols(); ++j)
    scale = std::max(scale, std::sqrt(std::max(V.col(j).dot(MV.col(j)), 0.0)));
  const double threshold = tol * scale;

  Matrix Q(n, V.cols());
  Matrix MQ(n, V.cols());
  Eigen::Index kept = 0;
  if (!(scale > 0.0))
    return Q.leftCols(0);

  for (Eigen::Index j = 0; j < V.cols(); ++j)
  {
    Vector v = V.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < MW.cols(); ++i)
        v -= MW.col(i).dot(v) * W_fixed.col(i);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < kept; ++i)
        v -= MQ.col(i).dot(v) * Q.col(i);
    const Vector Mv = M * v;
    const double d = std::sqrt(std::max(v.dot(Mv), 0.0));
    if (d > threshold)
    {
      Q.col(kept) = v / d;
      MQ.col(kept) = Mv / d;
      ++kept;
    }
  }
  return Q.leftCols(kept);
}

KrylovBasis krylov_iterate(const DescriptorSystem &sys, double s0, int levels, double tol,
                           const std::vector<Eigen::Index> &ports)
{
  if (levels < 1)
    throw Error(ErrorKind::Precondition, kModule, "krylov_iterate: levels must be >= 1");
  if (!(s0 >= 0.0))
    throw Error(ErrorKind::Precondition, kModule, "krylov_iterate: shift must be >= 0");

  Matrix B0;
  if (ports.empty())
    B0 = sys.B();
  else
  {
    B0.resize(sys.size(), static_cast<Eigen::Index>(ports.size()));
    for (std::size_t i = 0; i < ports.size(); ++i)
    {
      if (ports[i] < 0 || ports[i] >= sys.inputs())
        throw Error(ErrorKind::Precondition, kModule, "krylov_iterate: unknown input column");
      B0.col(static_cast<Eigen::Index>(i)) = sys.B().col(ports[i]);
    }
  }

  const ShiftedSolver solver(sys, s0);
  KrylovBasis out;
  out.s0 = s0;
  out.input_count = B0.cols();

  Matrix r = ortho(solver.solve(B0), Matrix(), sys.E(), tol);
  Matrix W = r;
  out.levels = 1;
  for (int level = 1; level < levels; ++level)
  {
    if (r.cols() > 0)
    {
      r = ortho(solver.solve(sys.E() * r), W, sys.E(), tol);
      Matrix grown(W.rows(), W.cols() + r.cols());
      grown << W, r;
      W = std::move(grown);
    }
    ++out.levels;
  }
  out.W = std::move(W);
  return out;
}

SplitBasis cs_split(const Matrix &W, const SparseMatrix &M1, const SparseMatrix &M2, double tol)
{
  const Eigen::Index k1 = M1.rows();
  const Eigen::Index k2 = M2.rows();
  if (W.rows() < k1 + k2)
    throw Error(ErrorKind::Precondition, kModule, "cs_split: basis has too few rows");
  const Eigen::Index r = W.cols();

  Cholesky llt1, llt2;
  factor_mass(llt1, M1, "M1");
  factor_mass(llt2, M2, "M2");

  // R = L^T, so R W = L^T W.
  const SparseMatrix L1 = llt1.matrixL();
  const SparseMatrix L2 = llt2.matrixL();
  const Matrix Q1 = L1.transpose() * W.topRows(k1);
  const Matrix Q2 = L2.transpose() * W.middleRows(k1, k2);

  SplitBasis out;
  if (r == 0)
  {
    out.W1.resize(k1, 0);
    out.W2.resize(k2, 0);
    return out;
  }

  Eigen::JacobiSVD<Matrix> svd(Q1, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Vector sv = svd.singularValues();
  const Matrix &X = svd.matrixV();
  const Matrix &U1all = svd.matrixU();

  Vector C = Vector::Zero(r);
  C.head(sv.size()) = sv;
  const Matrix Z = Q2 * X;

  // Pressure directions in the SVD order (cosines descending).
  std::vector<Eigen::Index> keep1;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (C(i) > tol)
      keep1.push_back(i);

  // Flux directions ordered by descending sine.
  Vector S(r);
  for (Eigen::Index i = 0; i < r; ++i)
    S(i) = Z.col(i).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return S(a) > S(b); });
  std::vector<Eigen::Index> keep2;
  for (Eigen::Index i : order)
    if (S(i) > tol)
      keep2.push_back(i);

  Matrix U1(k1, static_cast<Eigen::Index>(keep1.size()));
  out.cosines.resize(U1.cols());
  for (std::size_t j = 0; j < keep1.size(); ++j)
  {
    U1.col(static_cast<Eigen::Index>(j)) = U1all.col(keep1[j]);
    out.cosines(static_cast<Eigen::Index>(j)) = C(keep1[j]);
  }
  Matrix U2raw(k2, static_cast<Eigen::Index>(keep2.size()));
  out.sines.resize(U2raw.cols());
  for (std::size_t j = 0; j < keep2.size(); ++j)
  {
    const Eigen::Index i = keep2[j];
    U2raw.col(static_cast<Eigen::Index>(j)) = Z.col(i) / S(i);
    out.sines(static_cast<Eigen::Index>(j)) = S(i);
  }
  // Rotated columns are orthogonal in exact arithmetic; restore it numerically.
  Matrix U2 = euclidean_orthonormalize(U2raw, 0.5);
  if (U2.cols() != U2raw.cols())
    out.sines.conservativeResize(U2.cols());

  out.W1 = llt1.matrixU().solve(U1);
  out.W2 = llt2.matrixU().solve(U2);
  for (Eigen::Index j = 0; j < out.W1.cols(); ++j)
    fix_sign(out.W1.col(j));
  for (Eigen::Index j = 0; j < out.W2.cols(); ++j)
    fix_sign(out.W2.col(j));
  return out;
}

SplitBasis cs_split(const Matrix &W, const FemSystem &sys, double tol)
{
  return cs_split(W, sys.M1, sys.M2, tol);
}

SplitBasis naive_split(const Matrix &W, const SparseMatrix &M1, const SparseMatrix &M2,
                       double tol)
{
  const Eigen::Index k1 = M1.rows();
  const Eigen::Index k2 = M2.rows();
  if (W.rows() < k1 + k2)
    throw Error(ErrorKind::Precondition, kModule, "naive_split: basis has too few rows");
  SplitBasis out;
  out.W1 = ortho(W.topRows(k1), Matrix(), M1, tol);
  out.W2 = ortho(W.middleRows(k1, k2), Matrix(), M2, tol);
  return out;
}

Matrix min_norm_solve(const FemSystem &sys, const Matrix &g1, const Matrix &g3)
{
  const Eigen::Index k1 = sys.k1, k2 = sys.k2, k3 = sys.k3;
  if (g1.rows() != k1 || g3.rows() != k3 || g1.cols() != g3.cols())
    throw Error(ErrorKind::Precondition, kModule, "min_norm_solve: right-hand side mismatch");

  // [M2 C^T; C 0] [x; mu] = [0; g] with C = [G; N].
  std::vector<Eigen::Triplet<double>> trips;
  const auto add = [&](const SparseMatrix &X, Eigen::Index r0, Eigen::Index c0, bool transpose) {
    for (int k = 0; k < X.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(X, k); it; ++it)
        trips.emplace_back(r0 + (transpose ? it.col() : it.row()),
                           c0 + (transpose ? it.row() : it.col()), it.value());
  };
  const Eigen::Index n = k2 + k1 + k3;
  add(sys.M2, 0, 0, false);
  add(sys.G, 0, k2, true);
  add(sys.N, 0, k2 + k1, true);
  add(sys.G, k2, 0, false);
  add(sys.N, k2 + k1, 0, false);
  SparseMatrix K(n, n);
  K.setFromTriplets(trips.begin(), trips.end());

  const LuSolver lu(K);
  if (lu.singular())
    throw Error(ErrorKind::SurjectivityViolation, kModule,
                "min_norm_solve: [G; N] is not surjective", lu.rcond());
  Matrix rhs = Matrix::Zero(n, g1.cols());
  rhs.middleRows(k2, k1) = g1;
  rhs.bottomRows(k3) = g3;
  return lu.solve(rhs).topRows(k2);
}

std::string_view to_string(BasisMode mode)
{
  return mode == BasisMode::improved ? "improved" : "standard";
}

BasisMode basis_mode_from_string(std::string_view name)
{
  if (name == "improved")
    return BasisMode::improved;
  if (name == "standard")
    return BasisMode::standard;
  throw Error(ErrorKind::Validation, kModule, "unknown basis mode '" + std::string(name) + "'");
}

namespace
{

// M1hat^{-1} V1^T M1 o1: coordinates of the best approximation of the constant.
Vector constant_coordinates(const Matrix &V1, const FemSystem &sys)
{
  if (V1.cols() == 0)
    return Vector(0);
  const Matrix MV = sys.M1 * V1;
  const Matrix hat = V1.transpose() * MV;
  return hat.ldlt().solve(MV.transpose() * sys.o1);
}

}  // namespace

ProjectionBasis build_compatible_bases(const Matrix &W1, const Matrix &W2, const FemSystem &sys,
                                       double tol)
{
  (void)W2;  // contained in the minimum-norm images plus nullG
  if (W1.rows() != sys.k1)
    throw Error(ErrorKind::Precondition, kModule, "build_compatible_bases: W1 row mismatch");

  Matrix P(sys.k1, W1.cols() + 1);
  P << W1, sys.o1;
  ProjectionBasis out;
  out.mode = BasisMode::improved;
  out.V1 = ortho(P, Matrix(), sys.M1, tol);

  const Matrix images =
      min_norm_solve(sys, sys.M1 * out.V1, Matrix::Zero(sys.k3, out.V1.cols()));
  Matrix F(sys.k2, sys.nullG.cols() + images.cols());
  F << sys.nullG, images;
  out.V2 = ortho(F, Matrix(), sys.M2, tol);
  out.o1_hat = constant_coordinates(out.V1, sys);
  return out;
}

ProjectionBasis standard_bases(const Matrix &W1, const Matrix &W2, const FemSystem &sys,
                               double tol)
{
  (void)tol;
  if (W1.rows() != sys.k1 || W2.rows() != sys.k2)
    throw Error(ErrorKind::Precondition, kModule, "standard_bases: row mismatch");
  ProjectionBasis out;
  out.mode = BasisMode::standard;
  out.V1 = W1;
  out.V2 = W2;
  out.o1_hat = constant_coordinates(out.V1, sys);
  return out;
}

CompatibilityReport check_compatibility(const ProjectionBasis &basis, const FemSystem &sys,
                                        double tol)
{
  CompatibilityReport rep;
  const Matrix &V1 = basis.V1;
  const Matrix &V2 = basis.V2;

  // (A1): M1-orthogonal projection of o1 onto range(V1).
  {
    const double norm_o = std::sqrt(sys.o1.dot(sys.M1 * sys.o1));
    Vector residual = sys.o1;
    if (V1.cols() > 0)
      residual -= V1 * constant_coordinates(V1, sys);
    rep.a1_residual = std::sqrt(std::max(residual.dot(sys.M1 * residual), 0.0)) / norm_o;
    rep.a1 = rep.a1_residual <= tol;
  }

  // (A2): range(M1 V1) = range(G V2).
  {
    const Matrix Y1 = sys.M1 * V1;
    const Matrix Y2 = sys.G * V2;
    const double scale = std::max(Y1.size() ? Y1.cwiseAbs().maxCoeff() : 0.0,
                                  Y2.size() ? Y2.cwiseAbs().maxCoeff() : 0.0);
    const Matrix Q1 = Y1.cols() ? range_basis(Y1, 1e-10) : Matrix(sys.k1, 0);
    const Matrix Q2 = Y2.cols() ? range_basis(Y2, 1e-10) : Matrix(sys.k1, 0);
    const double floor = 1e-10 * scale;
    rep.a2_residual = std::max(worst_range_residual(Y1, Q2, floor),
                               worst_range_residual(Y2, Q1, floor));
    rep.a2 = rep.a2_residual <= tol && (Y1.cols() > 0 || Y2.cols() > 0);
  }

  // (A3): nullG in range(V2) and N nullG onto the constraint space.
  {
    const Matrix &Z = sys.nullG;
    double worst = 0.0;
    const Matrix MV2 = sys.M2 * V2;
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
    {
      const Vector z = Z.col(j);
      const double nz = std::sqrt(z.dot(sys.M2 * z));
      const Vector r = V2.cols() ? Vector(z - V2 * (MV2.transpose() * z)) : z;
      worst = std::max(worst, std::sqrt(std::max(r.dot(sys.M2 * r), 0.0)) / nz);
    }
    rep.a3_residual = worst;
    bool onto = true;
    if (sys.k3 > 0)
    {
      const Matrix NZ = sys.N * Z;
      Eigen::JacobiSVD<Matrix> svd(NZ);
      const Vector s = svd.singularValues();
      const double smax = s.size() ? s(0) : 0.0;
      const double smin = s.size() >= sys.k3 ? s(sys.k3 - 1) : 0.0;
      rep.a3_sigma_min = smax > 0.0 ? smin / smax : 0.0;
      onto = rep.a3_sigma_min > tol;
    }
    else
      rep.a3_sigma_min = 1.0;
    rep.a3 = rep.a3_residual <= tol && onto;
  }

  if (sys.k3 > 0 && V2.cols() > 0)
    rep.constraint_coupling = Matrix(sys.N * V2).cwiseAbs().maxCoeff();
  return rep;
}

DescriptorSystem ReducedSystem::descriptor() const
{
  return DescriptorSystem(to_sparse(M1), to_sparse(M2), to_sparse(D), to_sparse(G),
                          to_sparse(N), B2, o1_hat);
}

DescriptorSystem ReducedSystem::ode_form() const
{
  return DescriptorSystem(to_sparse(M1), to_sparse(M2), to_sparse(D), to_sparse(G),
                          SparseMatrix(0, M2.rows()), B2, o1_hat);
}

DescriptorSystem ReducedSystem::simulation_form() const
{
  return multiplier_eliminated ? ode_form() : descriptor();
}

ReducedSystem project(const FemSystem &sys, const ProjectionBasis &basis)
{
  const Matrix &V1 = basis.V1;
  const Matrix &V2 = basis.V2;
  if (V1.rows() != sys.k1 || V2.rows() != sys.k2)
    throw Error(ErrorKind::Precondition, kModule, "project: basis dimensions do not conform");

  ReducedSystem red;
  red.mode = basis.mode;
  red.M1 = V1.transpose() * (sys.M1 * V1);
  red.M2 = V2.transpose() * (sys.M2 * V2);
  red.D = V2.transpose() * (sys.D * V2);
  red.G = V1.transpose() * (sys.G * V2);
  red.N = sys.N * V2;
  red.B2 = V2.transpose() * sys.B2;
  red.o1_hat = basis.o1_hat;
  // Symmetrize away round-off so downstream SPD checks see exact symmetry.
  red.M1 = 0.5 * (red.M1 + red.M1.transpose()).eval();
  red.M2 = 0.5 * (red.M2 + red.M2.transpose()).eval();
  red.D = 0.5 * (red.D + red.D.transpose()).eval();

  if (sys.k3 > 0)
  {
    const double vscale = V2.size() ? std::max(1.0, V2.cwiseAbs().maxCoeff()) : 1.0;
    const double nmax = red.N.size() ? red.N.cwiseAbs().maxCoeff() : 0.0;
    red.multiplier_eliminated = nmax <= 1e-10 * vscale;
  }
  return red;
}

std::pair<Vector, Vector> project_initial_reduced(const ProjectionBasis &basis,
                                                  const FemSystem &sys, const Vector &x1,
                                                  const Vector &x2, bool enforce_mass)
{
  const Matrix &V1 = basis.V1;
  const Matrix &V2 = basis.V2;
  if (x1.size() != sys.k1 || x2.size() != sys.k2 || V1.rows() != sys.k1 ||
      V2.rows() != sys.k2)
    throw Error(ErrorKind::Precondition, kModule, "project_initial_reduced: size mismatch");

  const Matrix MV1 = sys.M1 * V1;
  const Matrix MV2 = sys.M2 * V2;
  const Matrix hat1 = V1.transpose() * MV1;
  const Matrix hat2 = V2.transpose() * MV2;
  Vector z1 = V1.cols() ? Vector(hat1.ldlt().solve(MV1.transpose() * x1)) : Vector(0);
  Vector z2 = V2.cols() ? Vector(hat2.ldlt().solve(MV2.transpose() * x2)) : Vector(0);

  if (enforce_mass)
  {
    // min (z - z1)^T hat1 (z - z1) s.t. c^T z = m with c = hat1 o1_hat.
    const Vector &o = basis.o1_hat;
    const double target = sys.o1.dot(sys.M1 * x1);
    const double denom = o.size() ? o.dot(hat1 * o) : 0.0;
    const double scale = std::sqrt(sys.o1.dot(sys.M1 * sys.o1));
    if (!(denom > 1e-24 * scale * scale))
      throw Error(ErrorKind::ConstraintInfeasible, kModule,
                  "project_initial_reduced: constant not representable in the pressure basis",
                  denom);
    const double current = o.dot(hat1 * z1);
    z1 += ((target - current) / denom) * o;
  }
  return {z1, z2};
}

Reduction reduce(const FemSystem &sys, const ReductionOptions &options)
{
  Reduction out;
  const DescriptorSystem full = from_fem(sys);
  out.krylov = krylov_iterate(full, options.s0, options.levels, options.tol, options.ports);
  out.split = cs_split(out.krylov.W, sys, options.tol);
  out.basis = options.mode == BasisMode::improved
                  ? build_compatible_bases(out.split.W1, out.split.W2, sys, options.tol)
                  : standard_bases(out.split.W1, out.split.W2, sys, options.tol);
  out.reduced = project(sys, out.basis);
  return out;
}

}  // namespace phmor
