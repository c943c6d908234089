// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "phmor/descriptor.hpp"
#include "phmor/error.hpp"
#include "phmor/mor.hpp"

using namespace phmor;

namespace
{

constexpr double kTol = kDefaultDropTol;

FemSystem build(const Network &net, std::size_t cells)
{
  return assemble(net, Mesh::uniform(net, cells));
}

Reduction run(const FemSystem &s, int L, double s0, BasisMode mode,
              std::vector<Eigen::Index> ports = {})
{
  ReductionOptions opt;
  opt.levels = L;
  opt.s0 = s0;
  opt.mode = mode;
  opt.ports = std::move(ports);
  return reduce(s, opt);
}

// Largest sine of the principal angles between range(X) and range(Y) in the
// inner product of M; X and Y are made M-orthonormal here via a dense Cholesky.
double subspace_gap(const Matrix &X, const Matrix &Y, const Matrix &M)
{
  const Eigen::LLT<Matrix> llt(M);
  const Matrix R = llt.matrixU();
  const Matrix Qx = Eigen::HouseholderQR<Matrix>(R * X).householderQ() *
                    Matrix::Identity(X.rows(), X.cols());
  const Matrix Qy = Eigen::HouseholderQR<Matrix>(R * Y).householderQ() *
                    Matrix::Identity(Y.rows(), Y.cols());
  // ||(I - Qy Qy^T) Qx|| and the reverse.
  const double a = (Qx - Qy * (Qy.transpose() * Qx)).norm();
  const double b = (Qy - Qx * (Qx.transpose() * Qy)).norm();
  return std::max(a, b);
}

double orthonormality_defect(const Matrix &V, const SparseMatrix &M)
{
  if (V.cols() == 0)
    return 0.0;
  return (V.transpose() * (M * V) - Matrix::Identity(V.cols(), V.cols()))
      .cwiseAbs()
      .maxCoeff();
}

Eigen::Index numerical_rank(const Matrix &X)
{
  Eigen::JacobiSVD<Matrix> svd(X);
  const Vector s = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * s(0))
      ++r;
  return r;
}

bool throws_kind(ErrorKind kind, auto &&fn)
{
  try
  {
    fn();
  }
  catch (const Error &e)
  {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("ortho drops dependent columns")
{
  const FemSystem s = build(make_tp1(), 6);
  const SparseMatrix &M = s.M2;
  Vector v = Vector::LinSpaced(s.k2, 1.0, 2.0);
  Matrix V(s.k2, 2);
  V << v, 2 * v;
  const Matrix Q = ortho(V, Matrix(), M, kTol);
  REQUIRE(Q.cols() == 1);
  CHECK((Q.col(0) - v / std::sqrt(v.dot(M * v))).norm() < 1e-12);
}

TEST_CASE("ortho keeps an orthonormal input")
{
  const FemSystem s = build(make_tp1(), 8);
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  Matrix X(s.k2, 3);
  for (Eigen::Index i = 0; i < X.size(); ++i)
    X.data()[i] = nd(rng);
  const Matrix V = ortho(X, Matrix(), s.M2, kTol);
  REQUIRE(V.cols() == 3);
  CHECK(orthonormality_defect(V, s.M2) < 1e-14);
  const Matrix again = ortho(V, Matrix(), s.M2, kTol);
  REQUIRE(again.cols() == 3);
  for (Eigen::Index j = 0; j < 3; ++j)
    CHECK(std::min((again.col(j) - V.col(j)).norm(), (again.col(j) + V.col(j)).norm()) < 1e-12);
}

TEST_CASE("ortho against a fixed basis")
{
  const FemSystem s = build(make_net7(), 4);
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  Matrix X(s.k1, 6);
  for (Eigen::Index i = 0; i < X.size(); ++i)
    X.data()[i] = nd(rng);
  const Matrix W = ortho(X.leftCols(3), Matrix(), s.M1, kTol);
  Matrix Y(s.k1, 4);
  Y << X.rightCols(3), W.col(1);
  const Matrix Q = ortho(Y, W, s.M1, kTol);
  CHECK(Q.cols() == 3);
  CHECK((W.transpose() * (s.M1 * Q)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(orthonormality_defect(Q, s.M1) < 1e-13);
}

TEST_CASE("multiplier-only vectors have zero seminorm")
{
  const FemSystem s = build(make_tp2(), 3);
  const DescriptorSystem sys = from_fem(s);
  Matrix V = Matrix::Zero(sys.size(), 1);
  V(sys.size() - 1, 0) = 1.0;
  CHECK(ortho(V, Matrix(), sys.E(), kTol).cols() == 0);
}

TEST_CASE("first Krylov block spans the stationary responses")
{
  const FemSystem s = build(make_tp1(), 10);
  const DescriptorSystem sys = from_fem(s);
  const KrylovBasis kb = krylov_iterate(sys, 0.0, 1, kTol);
  CHECK(kb.levels == 1);
  CHECK(kb.input_count == 2);
  REQUIRE(kb.W.cols() == 2);
  const Matrix r0 = Eigen::FullPivLU<Matrix>(Matrix(sys.A())).solve(sys.B());
  // E is definite here since TP1 has no multiplier.
  CHECK(subspace_gap(kb.W, r0, Matrix(sys.E())) < 1e-10);
}

TEST_CASE("Krylov basis is E-orthonormal and contains the recursion")
{
  for (double s0 : {0.0, 1.0})
  {
    CAPTURE(s0);
    const FemSystem s = build(make_net7(), 6);
    const DescriptorSystem sys = from_fem(s);
    const int L = 4;
    const KrylovBasis kb = krylov_iterate(sys, s0, L, kTol);
    CHECK(orthonormality_defect(kb.W, sys.E()) < 1e-10);
    const MomentSequence ms = moments(sys, s0, L);
    const Matrix WtE = kb.W.transpose() * sys.E();
    for (const Matrix &r : ms.krylov_vectors)
    {
      // E-seminorm of the part of r outside span(W).
      const Matrix rest = r - kb.W * (WtE * r);
      const Matrix Erest = sys.E() * rest;
      const double scale = std::sqrt((r.transpose() * (sys.E() * r)).trace());
      CHECK(std::sqrt(std::abs((rest.transpose() * Erest).trace())) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("Krylov fluxes satisfy the junction balance")
{
  const FemSystem s = build(make_net7(), 5);
  const DescriptorSystem sys = from_fem(s);
  const KrylovBasis kb = krylov_iterate(sys, 0.5, 5, kTol);
  const Matrix W2 = kb.W.middleRows(s.k1, s.k2);
  CHECK(Matrix(s.N * W2).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pressure and flux components match through M1 and G")
{
  const FemSystem s = build(make_tp1(), 12);
  const DescriptorSystem sys = from_fem(s);
  const KrylovBasis kb = krylov_iterate(sys, 1.0, 3, kTol);
  const Matrix Y1 = s.M1 * kb.W.topRows(s.k1);
  const Matrix Y2 = s.G * kb.W.middleRows(s.k1, s.k2);
  const Eigen::Index r = numerical_rank(Y1);
  CHECK(r == numerical_rank(Y2));
  Matrix both(s.k1, Y1.cols() + Y2.cols());
  both << Y1, Y2;
  CHECK(numerical_rank(both) == r);
}

TEST_CASE("singular pencil propagates")
{
  const FemSystem s = build(make_tp1(), 4);
  const SparseMatrix zeroD(s.k2, s.k2);
  const DescriptorSystem sys(s.M1, s.M2, zeroD, s.G, s.N, s.B2, s.o1);
  CHECK(throws_kind(ErrorKind::SingularPencil, [&] { (void)krylov_iterate(sys, 0.0, 2, kTol); }));
}

TEST_CASE("cs split without flux content")
{
  const FemSystem s = build(make_tp1(), 6);
  Matrix W = Matrix::Zero(s.k1 + s.k2, 2);
  W.topRows(s.k1).col(0) = Vector::LinSpaced(s.k1, 0.0, 1.0);
  W.topRows(s.k1).col(1) = Vector::Ones(s.k1);
  const SplitBasis sp = cs_split(W, s, kTol);
  CHECK(sp.W2.cols() == 0);
  REQUIRE(sp.W1.cols() == 2);
  CHECK(orthonormality_defect(sp.W1, s.M1) < 1e-13);
  CHECK(subspace_gap(sp.W1, W.topRows(s.k1), Matrix(s.M1)) < 1e-10);
}

TEST_CASE("cs split recovers the component spans")
{
  const FemSystem s = build(make_tp1(), 4);
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  Matrix W(s.k1 + s.k2, 2);
  for (Eigen::Index i = 0; i < W.size(); ++i)
    W.data()[i] = nd(rng);
  const SplitBasis sp = cs_split(W, s, kTol);
  REQUIRE(sp.W1.cols() == 2);
  REQUIRE(sp.W2.cols() == 2);
  CHECK(subspace_gap(sp.W1, W.topRows(s.k1), Matrix(s.M1)) < 1e-8);
  CHECK(subspace_gap(sp.W2, W.middleRows(s.k1, s.k2), Matrix(s.M2)) < 1e-8);
  CHECK(orthonormality_defect(sp.W1, s.M1) < 1e-13);
  CHECK(orthonormality_defect(sp.W2, s.M2) < 1e-13);
}

TEST_CASE("cosines and sines of an E-orthonormal basis")
{
  const FemSystem s = build(make_tp1(), 20);
  const DescriptorSystem sys = from_fem(s);
  const KrylovBasis kb = krylov_iterate(sys, 1.0, 3, kTol);
  const SplitBasis sp = cs_split(kb.W, s, kTol);
  for (Eigen::Index i = 0; i < sp.cosines.size(); ++i)
  {
    CHECK(sp.cosines(i) <= 1.0 + 1e-12);
    if (i > 0)
      CHECK(sp.cosines(i) <= sp.cosines(i - 1));
  }
  for (Eigen::Index i = 0; i < sp.sines.size(); ++i)
    CHECK(sp.sines(i) <= 1.0 + 1e-12);
}

TEST_CASE("cs split stays orthonormal for long recursions")
{
  const FemSystem s = build(make_tp1(), 100);
  const DescriptorSystem sys = from_fem(s);
  const KrylovBasis kb = krylov_iterate(sys, 0.0, 10, kTol);
  const SplitBasis sp = cs_split(kb.W, s, kTol);
  CHECK(orthonormality_defect(sp.W1, s.M1) <= 1e-10);
  CHECK(orthonormality_defect(sp.W2, s.M2) <= 1e-10);
}

TEST_CASE("cs split needs positive definite weights")
{
  const FemSystem s = build(make_tp1(), 3);
  Matrix m1 = Matrix(s.M1);
  m1(0, 0) = -1.0;
  const Matrix W = Matrix::Ones(s.k1 + s.k2, 1);
  CHECK(throws_kind(ErrorKind::AssemblyInvariant,
                    [&] { (void)cs_split(W, to_sparse(m1), s.M2, kTol); }));
}

TEST_CASE("minimum-norm flux solves")
{
  const FemSystem s = build(make_net7(), 3);
  CHECK(min_norm_solve(s, Matrix::Zero(s.k1, 1), Matrix::Zero(s.k3, 1)).norm() == 0.0);

  const Matrix o2 = min_norm_solve(s, s.M1 * s.o1, Matrix::Zero(s.k3, 1));
  CHECK((s.G * o2 - s.M1 * s.o1).norm() <= 1e-10 * (s.M1 * s.o1).norm());
  CHECK((s.N * o2).norm() <= 1e-10 * o2.norm());

  // Dense oracle: M2^{-1} C^T (C M2^{-1} C^T)^{-1} g with C = [G; N].
  Matrix C(s.k1 + s.k3, s.k2);
  C << Matrix(s.G), Matrix(s.N);
  const Matrix M2 = Matrix(s.M2);
  const Matrix Minv_Ct = M2.llt().solve(C.transpose());
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  Matrix g(s.k1 + s.k3, 2);
  for (Eigen::Index i = 0; i < g.size(); ++i)
    g.data()[i] = nd(rng);
  const Matrix expected = Minv_Ct * (C * Minv_Ct).lu().solve(g);
  const Matrix x = min_norm_solve(s, g.topRows(s.k1), g.bottomRows(s.k3));
  CHECK((x - expected).norm() <= 1e-10 * expected.norm());

  // M2-orthogonal to every homogeneous solution.
  Eigen::FullPivLU<Matrix> lu(C);
  const Matrix Z = lu.kernel();
  REQUIRE(Z.cols() == s.k2 - (s.k1 + s.k3));
  CHECK((x.transpose() * M2 * Z).cwiseAbs().maxCoeff() <= 1e-10 * x.norm() * Z.norm());
}

TEST_CASE("non-surjective constraints are detected")
{
  FemSystem s = build(make_tp2(), 2);
  // A second copy of the junction row makes [G; N] rank deficient.
  Matrix n2(2, s.k2);
  n2 << Matrix(s.N), Matrix(s.N);
  s.N = to_sparse(n2);
  s.k3 = 2;
  CHECK(throws_kind(ErrorKind::SurjectivityViolation, [&] {
    (void)min_norm_solve(s, Matrix::Zero(s.k1, 1), Matrix::Zero(2, 1));
  }));
}

TEST_CASE("basis dimensions of the single pipe")
{
  const FemSystem s = build(make_tp1(), 100);
  const Reduction r = run(s, 4, 0.0, BasisMode::improved, {0});
  CHECK(r.basis.V1.cols() == 5);
  CHECK(r.basis.V2.cols() == 6);
}

TEST_CASE("empty split yields the constant and its preimage")
{
  const FemSystem s = build(make_net7(), 4);
  const ProjectionBasis b =
      build_compatible_bases(Matrix(s.k1, 0), Matrix(s.k2, 0), s, kTol);
  REQUIRE(b.V1.cols() == 1);
  CHECK((b.V1.col(0) / b.V1(0, 0) - s.o1).norm() < 1e-12);
  CHECK(b.V2.cols() == static_cast<Eigen::Index>(s.network->edge_count()) + 1);
  CHECK(b.o1_hat.size() == 1);
  CHECK((b.V1 * b.o1_hat - s.o1).norm() < 1e-12);
}

TEST_CASE("improved bases satisfy the compatibility conditions")
{
  for (const auto &[name, net] : builtin_scenarios())
    for (double s0 : {0.0, 1.0})
    {
      CAPTURE(name);
      CAPTURE(s0);
      const FemSystem s = build(net, 12);
      const Reduction r = run(s, 3, s0, BasisMode::improved);
      CHECK(orthonormality_defect(r.basis.V1, s.M1) <= 1e-10);
      CHECK(orthonormality_defect(r.basis.V2, s.M2) <= 1e-10);
      const CompatibilityReport c = check_compatibility(r.basis, s, kTol);
      CHECK(c.a1);
      CHECK(c.a2);
      CHECK(c.a3);
      CHECK(c.passed());
    }
}

TEST_CASE("standard basis on the split pipe loses the constraint")
{
  const FemSystem s = build(make_tp2(), 10);
  const Reduction r = run(s, 2, 1.0, BasisMode::standard);
  CHECK(Matrix(s.N * r.basis.V2).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(r.reduced.multiplier_eliminated);
  const CompatibilityReport c = check_compatibility(r.basis, s, kTol);
  CHECK_FALSE(c.a3);
  CHECK(c.constraint_coupling <= 1e-10);
  // Eliminating the multiplier leaves a regular system.
  CHECK(r.reduced.ode_form().dims().k3 == 0);
  CHECK_NOTHROW((void)ShiftedSolver(r.reduced.simulation_form(), 1.0));
}

TEST_CASE("explicit constant column satisfies the first condition exactly")
{
  const FemSystem s = build(make_tp1(), 8);
  ProjectionBasis b;
  b.V1 = s.o1 / std::sqrt(s.o1.dot(s.M1 * s.o1));
  b.V2 = ortho(s.nullG, Matrix(), s.M2, kTol);
  const CompatibilityReport c = check_compatibility(b, s, kTol);
  CHECK(c.a1);
  CHECK(c.a1_residual < 1e-15);
}

TEST_CASE("standard single level model at zero shift is singular")
{
  const FemSystem s = build(make_tp1(), 50);
  const Reduction r = run(s, 1, 0.0, BasisMode::standard, {0});
  const DescriptorSystem red = r.reduced.descriptor();
  CHECK(throws_kind(ErrorKind::SingularPencil, [&] { (void)ShiftedSolver(red, 0.0); }));
  const Reduction imp = run(s, 1, 0.0, BasisMode::improved, {0});
  CHECK_NOTHROW((void)ShiftedSolver(imp.reduced.descriptor(), 0.0));
}

TEST_CASE("standard subspaces lie inside the improved ones")
{
  const FemSystem s = build(make_tp1(), 30);
  for (double s0 : {0.0, 1.0})
  {
    const Reduction st = run(s, 3, s0, BasisMode::standard);
    const Reduction im = run(s, 3, s0, BasisMode::improved);
    const Matrix r1 = st.basis.V1 - im.basis.V1 * (im.basis.V1.transpose() * (s.M1 * st.basis.V1));
    const Matrix r2 = st.basis.V2 - im.basis.V2 * (im.basis.V2.transpose() * (s.M2 * st.basis.V2));
    CHECK(r1.norm() <= 1e-8);
    CHECK(r2.norm() <= 1e-8);
  }
}

TEST_CASE("projection with the full basis reproduces the system")
{
  const FemSystem s = build(make_tp2(), 3);
  ProjectionBasis b;
  b.V1 = Matrix::Identity(s.k1, s.k1);
  b.V2 = Matrix::Identity(s.k2, s.k2);
  b.o1_hat = s.o1;
  const ReducedSystem red = project(s, b);
  CHECK((red.M1 - Matrix(s.M1)).norm() == 0.0);
  CHECK((red.M2 - Matrix(s.M2)).norm() == 0.0);
  CHECK((red.D - Matrix(s.D)).norm() == 0.0);
  CHECK((red.G - Matrix(s.G)).norm() == 0.0);
  CHECK((red.N - Matrix(s.N)).norm() == 0.0);
  CHECK((red.B2 - s.B2).norm() == 0.0);
  CHECK_FALSE(red.multiplier_eliminated);
  const DescriptorSystem full = from_fem(s);
  CHECK((Matrix(red.descriptor().A()) - Matrix(full.A())).norm() == 0.0);
}

TEST_CASE("reduced systems keep the port-Hamiltonian structure")
{
  for (const auto &[name, net] : builtin_scenarios())
    for (BasisMode mode : {BasisMode::improved, BasisMode::standard})
    {
      CAPTURE(name);
      const FemSystem s = build(net, 10);
      const Reduction r = run(s, 3, 1.0, mode);
      const DescriptorSystem red = r.reduced.descriptor();
      const Matrix E = Matrix(red.E());
      CHECK((E - E.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(E).eigenvalues().minCoeff() >= -1e-12);
      const Matrix J = Matrix(red.A()) - Matrix(red.dissipation());
      CHECK((J + J.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      if (mode == BasisMode::improved)
      {
        CHECK((r.reduced.M1 - Matrix::Identity(r.reduced.M1.rows(), r.reduced.M1.cols()))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-10);
        CHECK((r.reduced.M2 - Matrix::Identity(r.reduced.M2.rows(), r.reduced.M2.cols()))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-10);
        const A0Report a0 = check_A0(to_sparse(r.reduced.M1), to_sparse(r.reduced.M2),
                                     to_sparse(r.reduced.D), to_sparse(r.reduced.G),
                                     to_sparse(r.reduced.N), 1e-12);
        CHECK(a0.passed());
        CHECK_NOTHROW((void)ShiftedSolver(red, 0.0));
      }
    }
}

TEST_CASE("reduced moments match the full model")
{
  for (const Network &net : {make_tp1(), make_tp2()})
    for (int L : {1, 2, 3})
      for (double s0 : {0.0, 1.0})
      {
        CAPTURE(L);
        CAPTURE(s0);
        const FemSystem s = build(net, 16);
        const DescriptorSystem full = from_fem(s);
        const Reduction r = run(s, L, s0, BasisMode::improved);
        const MomentSequence mf = moments(full, s0, 2 * L);
        const MomentSequence mr = moments(r.reduced.descriptor(), s0, 2 * L);
        for (int l = 0; l < 2 * L; ++l)
          CHECK((mr.moments[l] - mf.moments[l]).norm() <= 1e-8 * mf.moments[l].norm());
      }
}

TEST_CASE("initial projection and the mass constraint")
{
  const FemSystem s = build(make_tp1(), 200);
  const Vector x1 = s.o1;
  const Vector x2 = Vector::Zero(s.k2);
  const auto measure = [&](const Reduction &r, bool constrain) {
    const auto [z1, z2] = project_initial_reduced(r.basis, s, x1, x2, constrain);
    const double mass = r.basis.o1_hat.dot(r.reduced.M1 * z1);
    const double energy = 0.5 * (z1.dot(r.reduced.M1 * z1) + z2.dot(r.reduced.M2 * z2));
    return std::pair{mass, energy};
  };

  const Reduction imp = run(s, 3, 0.0, BasisMode::improved, {0});
  const auto [mi, ei] = measure(imp, false);
  CHECK(mi == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ei == doctest::Approx(0.5).epsilon(1e-10));

  const Reduction st = run(s, 1, 0.0, BasisMode::standard, {0});
  const auto [ms, es] = measure(st, false);
  CHECK(ms == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(es == doctest::Approx(0.375).epsilon(1e-3));
  const auto [mc, ec] = measure(st, true);
  CHECK(mc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ec == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("projection never increases the energy")
{
  const FemSystem s = build(make_net7(), 8);
  const DescriptorSystem full = from_fem(s);
  std::mt19937 rng(2);
  std::normal_distribution<double> nd;
  for (BasisMode mode : {BasisMode::improved, BasisMode::standard})
    for (int trial = 0; trial < 3; ++trial)
    {
      Vector x1(s.k1), x2(s.k2);
      for (Eigen::Index i = 0; i < x1.size(); ++i)
        x1(i) = nd(rng);
      for (Eigen::Index i = 0; i < x2.size(); ++i)
        x2(i) = nd(rng);
      const Reduction r = run(s, 2, 0.5, mode);
      const auto [z1, z2] = project_initial_reduced(r.basis, s, x1, x2, false);
      const double reduced = 0.5 * (z1.dot(r.reduced.M1 * z1) + z2.dot(r.reduced.M2 * z2));
      CHECK(reduced <= full.energy(full.state(x1, x2)) * (1 + 1e-12));
    }
}

TEST_CASE("degenerate mass constraint")
{
  const FemSystem s = build(make_tp1(), 10);
  // A pressure basis M1-orthogonal to the constant.
  Vector v = Vector::LinSpaced(s.k1, -1.0, 1.0);
  ProjectionBasis b;
  b.V1 = ortho(v, Matrix(), s.M1, kTol);
  b.V2 = ortho(s.nullG, Matrix(), s.M2, kTol);
  b.o1_hat = Vector::Zero(1);
  b.mode = BasisMode::standard;
  CHECK(throws_kind(ErrorKind::ConstraintInfeasible, [&] {
    (void)project_initial_reduced(b, s, s.o1, Vector::Zero(s.k2), true);
  }));
}

TEST_CASE("mode names")
{
  CHECK(to_string(BasisMode::improved) == "improved");
  CHECK(basis_mode_from_string("standard") == BasisMode::standard);
  CHECK(throws_kind(ErrorKind::Validation, [] { (void)basis_mode_from_string("other"); }));
}
