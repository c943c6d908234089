// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_MOR_HPP
#define PHMOR_MOR_HPP

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "phmor/descriptor.hpp"
#include "phmor/fem.hpp"
#include "phmor/linalg.hpp"

namespace phmor
{

inline constexpr double kDefaultDropTol = 1e-8;

// Gram-Schmidt in the (semi-)inner product induced by M: two passes against
// W_fixed, then two passes against the columns accepted so far. A column is
// kept if its M-seminorm after orthogonalization exceeds tol times the largest
// M-seminorm among the input columns. Kept columns are normalized.
Matrix ortho(const Matrix &V, const Matrix &W_fixed, const SparseMatrix &M, double tol);

struct KrylovBasis
{
  Matrix W;  // E-orthonormal columns spanning the block Krylov space
  double s0 = 0.0;
  int levels = 0;
  Eigen::Index input_count = 0;
};

// Block Arnoldi for (s0 E + A)^{-1} E started from (s0 E + A)^{-1} B, in the
// E-semi-inner product. `ports` selects the input columns (empty = all).
KrylovBasis krylov_iterate(const DescriptorSystem &sys, double s0, int levels, double tol,
                           const std::vector<Eigen::Index> &ports = {});

struct SplitBasis
{
  Matrix W1;        // M1-orthonormal basis of the pressure components
  Matrix W2;        // M2-orthonormal basis of the flux components
  Vector cosines;   // diagonal of C, descending
  Vector sines;     // diagonal of S matching `cosines`
};

// Splits a Krylov basis into pressure and flux bases through the cosine-sine
// decomposition of (R1 W_1, R2 W_2), with M_i = R_i^T R_i. Directions whose
// cosine (resp. sine) does not exceed tol are dropped.
SplitBasis cs_split(const Matrix &W, const SparseMatrix &M1, const SparseMatrix &M2, double tol);
SplitBasis cs_split(const Matrix &W, const FemSystem &sys, double tol);

// Block-wise re-orthogonalization without the cosine-sine step; kept for comparison.
SplitBasis naive_split(const Matrix &W, const SparseMatrix &M1, const SparseMatrix &M2,
                       double tol);

// M2-minimum-norm solution of G x2 = g1, N x2 = g3 (column-wise).
// Throws ErrorKind::SurjectivityViolation if [G; N] is not surjective.
Matrix min_norm_solve(const FemSystem &sys, const Matrix &g1, const Matrix &g3);

enum class BasisMode
{
  improved,
  standard
};

std::string_view to_string(BasisMode mode);
BasisMode basis_mode_from_string(std::string_view name);

struct ProjectionBasis
{
  Matrix V1;     // M1-orthonormal
  Matrix V2;     // M2-orthonormal
  Vector o1_hat; // reduced coordinates of the constant pressure
  BasisMode mode = BasisMode::improved;
};

// Adds the constant pressure, the per-pipe constant fluxes, and the
// minimum-norm flux preimages of M1 V1, so that the compatibility conditions
// hold by construction. The flux directions of W2 are contained in the result.
ProjectionBasis build_compatible_bases(const Matrix &W1, const Matrix &W2, const FemSystem &sys,
                                       double tol);

// V1 = W1, V2 = W2 without modification.
ProjectionBasis standard_bases(const Matrix &W1, const Matrix &W2, const FemSystem &sys,
                               double tol);

struct CompatibilityReport
{
  bool a1 = false;
  bool a2 = false;
  bool a3 = false;
  double a1_residual = 0.0;        // relative M1-norm distance of o1 from range(V1)
  double a2_residual = 0.0;        // worst relative residual of the two range inclusions
  double a3_residual = 0.0;        // worst relative M2-norm distance of 1^e from range(V2)
  double a3_sigma_min = 0.0;       // smallest singular value of N nullG (relative)
  double constraint_coupling = 0.0;  // max |N V2|

  bool passed() const { return a1 && a2 && a3; }
};

CompatibilityReport check_compatibility(const ProjectionBasis &basis, const FemSystem &sys,
                                        double tol);

// Galerkin-projected saddle-point blocks. The multiplier dimension k3 is not reduced.
struct ReducedSystem
{
  Matrix M1, M2, D, G, N, B2;
  Vector o1_hat;
  BasisMode mode = BasisMode::improved;
  // N V2 vanishes while junctions exist: the multiplier is eliminated and
  // cannot be recovered uniquely from the reduced solution.
  bool multiplier_eliminated = false;

  DescriptorSystem descriptor() const;
  // The system with the constraint and multiplier removed.
  DescriptorSystem ode_form() const;
  // ode_form() when the multiplier was eliminated, descriptor() otherwise.
  DescriptorSystem simulation_form() const;
};

ReducedSystem project(const FemSystem &sys, const ProjectionBasis &basis);

// Energy projection of (x1, x2) onto the reduced bases, optionally enforcing
// the full-order mass through one equality constraint.
std::pair<Vector, Vector> project_initial_reduced(const ProjectionBasis &basis,
                                                  const FemSystem &sys, const Vector &x1,
                                                  const Vector &x2, bool enforce_mass);

struct ReductionOptions
{
  double s0 = 0.0;
  int levels = 1;
  double tol = kDefaultDropTol;
  BasisMode mode = BasisMode::improved;
  std::vector<Eigen::Index> ports;  // Krylov input columns, empty = all
};

// The full pipeline: Krylov iteration, splitting, modification, projection.
struct Reduction
{
  KrylovBasis krylov;
  SplitBasis split;
  ProjectionBasis basis;
  ReducedSystem reduced;
};

Reduction reduce(const FemSystem &sys, const ReductionOptions &options);

}  // namespace phmor

#endif  // PHMOR_MOR_HPP
