// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_FEM_HPP
#define PHMOR_FEM_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "phmor/linalg.hpp"
#include "phmor/network.hpp"

namespace phmor
{

// Uniform mesh of every pipe; cells[e] subintervals of width length_e / cells[e].
struct Mesh
{
  std::vector<std::size_t> cells;

  static Mesh uniform(const Network &network, std::size_t cells_per_edge);

  double width(const Network &network, std::size_t e) const;
  double max_width(const Network &network) const;
};

// Mixed finite element discretization of the pipe network.
//
// Pressure: piecewise constants, one value per cell (k1 = sum of cells).
// Flux: continuous piecewise linears along each pipe, independent across
// junctions (k2 = sum of cells + 1 per pipe). Flux node 0 of a pipe sits at its
// tail, node cells[e] at its head. Junction balance rows in N follow the order
// of network.interior_vertices(); port columns of B2 follow boundary_vertices().
struct FemSystem
{
  std::shared_ptr<const Network> network;
  Mesh mesh;
  std::vector<std::size_t> pressure_offset;  // first pressure index of each pipe
  std::vector<std::size_t> flux_offset;      // first flux index of each pipe

  Eigen::Index k1 = 0;
  Eigen::Index k2 = 0;
  Eigen::Index k3 = 0;

  SparseMatrix M1;  // (a phi_j, phi_i), diagonal
  SparseMatrix M2;  // (b psi_j, psi_i)
  SparseMatrix D;   // (d psi_j, psi_i)
  SparseMatrix G;   // (d/dx psi_j, phi_i)
  SparseMatrix N;   // [n psi_j](v) at junctions
  Matrix B2;        // -n^e(v) psi_i(v) at ports
  Vector o1;        // coordinates of the constant pressure 1
  Matrix nullG;     // coordinates of the per-pipe indicator fluxes 1^e

  Eigen::Index ports() const { return B2.cols(); }
};

FemSystem assemble(const Network &network, const Mesh &mesh);

// Structural assumption on the saddle-point blocks: M1, M2, D symmetric
// positive definite and [G^T, N^T] injective.
struct A0Report
{
  double symmetry_m1 = 0.0;
  double symmetry_m2 = 0.0;
  double symmetry_d = 0.0;
  double min_eig_m1 = 0.0;
  double min_eig_m2 = 0.0;
  double min_eig_d = 0.0;
  double max_eig_m1 = 0.0;
  double max_eig_m2 = 0.0;
  double max_eig_d = 0.0;
  double stacked_sigma_min = 0.0;
  double stacked_sigma_max = 0.0;

  bool symmetric = false;
  bool m1_spd = false;
  bool m2_spd = false;
  bool d_spd = false;
  bool stacked_injective = false;

  bool passed() const { return symmetric && m1_spd && m2_spd && d_spd && stacked_injective; }
};

A0Report check_A0(const SparseMatrix &M1, const SparseMatrix &M2, const SparseMatrix &D,
                  const SparseMatrix &G, const SparseMatrix &N, double tol);
A0Report check_A0(const FemSystem &sys, double tol);

// Field on the network: value at local coordinate x in [0, length] of pipe e.
using NetworkField = std::function<double(std::size_t e, double x)>;

NetworkField constant_field(double value);

// Weighted L2 projection of initial pressure and flux onto the discrete spaces
// (loads integrated with two-point Gauss quadrature per cell).
std::pair<Vector, Vector> project_initial(const FemSystem &sys, const NetworkField &p0,
                                          const NetworkField &q0);

// Function-value sampling of discrete fields, used for plotting and
// mesh comparisons. Pressure evaluates the cell value; flux interpolates.
double evaluate_pressure(const FemSystem &sys, const Vector &x1, std::size_t e, double x);
double evaluate_flux(const FemSystem &sys, const Vector &x2, std::size_t e, double x);

}  // namespace phmor

#endif  // PHMOR_FEM_HPP
