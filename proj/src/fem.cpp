// SPDX-License-Identifier: Apache-2.0

#include "phmor/fem.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/SparseCholesky>

#include "phmor/error.hpp"

namespace phmor
{

Mesh Mesh::uniform(const Network &network, std::size_t cells_per_edge)
{
  if (cells_per_edge == 0)
  {
    throw Error(ErrorKind::Validation, "fem", "mesh needs at least one cell per pipe");
  }
  return Mesh{std::vector<std::size_t>(network.edge_count(), cells_per_edge)};
}

double Mesh::width(const Network &network, std::size_t e) const
{
  return network.edge(e).length / static_cast<double>(cells.at(e));
}

double Mesh::max_width(const Network &network) const
{
  double h = 0.0;
  for (std::size_t e = 0; e < cells.size(); ++e)
  {
    h = std::max(h, width(network, e));
  }
  return h;
}

FemSystem assemble(const Network &network, const Mesh &mesh)
{
  if (mesh.cells.size() != network.edge_count())
  {
    throw Error(ErrorKind::Validation, "fem", "mesh does not match the number of pipes");
  }
  for (std::size_t n : mesh.cells)
  {
    if (n == 0)
    {
      throw Error(ErrorKind::Validation, "fem", "empty mesh on a pipe");
    }
  }

  FemSystem sys;
  sys.network = std::make_shared<const Network>(network);
  sys.mesh = mesh;
  const std::size_t edges = network.edge_count();
  sys.pressure_offset.resize(edges);
  sys.flux_offset.resize(edges);
  std::size_t k1 = 0, k2 = 0;
  for (std::size_t e = 0; e < edges; ++e)
  {
    sys.pressure_offset[e] = k1;
    sys.flux_offset[e] = k2;
    k1 += mesh.cells[e];
    k2 += mesh.cells[e] + 1;
  }
  const auto &interior = network.interior_vertices();
  const auto &ports = network.boundary_vertices();
  sys.k1 = static_cast<Eigen::Index>(k1);
  sys.k2 = static_cast<Eigen::Index>(k2);
  sys.k3 = static_cast<Eigen::Index>(interior.size());

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> m1, m2, dd, g, nn;
  for (std::size_t e = 0; e < edges; ++e)
  {
    const Edge &edge = network.edge(e);
    if (!(edge.a > 0.0) || !(edge.b > 0.0) || !(edge.d > 0.0))
    {
      throw Error(ErrorKind::Validation, "fem", "non-positive coefficient");
    }
    const double h = mesh.width(network, e);
    for (std::size_t c = 0; c < mesh.cells[e]; ++c)
    {
      const auto i = static_cast<int>(sys.pressure_offset[e] + c);
      const auto left = static_cast<int>(sys.flux_offset[e] + c);
      const int right = left + 1;
      m1.emplace_back(i, i, edge.a * h);
      // Linear element mass: (w h / 6) [[2, 1], [1, 2]]
      for (auto [w, list] : {std::pair{edge.b, &m2}, std::pair{edge.d, &dd}})
      {
        const double s = w * h / 6.0;
        list->emplace_back(left, left, 2.0 * s);
        list->emplace_back(left, right, s);
        list->emplace_back(right, left, s);
        list->emplace_back(right, right, 2.0 * s);
      }
      g.emplace_back(i, left, -1.0);
      g.emplace_back(i, right, 1.0);
    }
  }
  for (std::size_t r = 0; r < interior.size(); ++r)
  {
    const std::size_t v = interior[r];
    for (std::size_t e : network.incident_edges(v))
    {
      const int sign = network.incidence_sign(e, v);
      const std::size_t node = sign > 0 ? sys.flux_offset[e] + mesh.cells[e] : sys.flux_offset[e];
      nn.emplace_back(static_cast<int>(r), static_cast<int>(node), static_cast<double>(sign));
    }
  }

  sys.M1.resize(sys.k1, sys.k1);
  sys.M1.setFromTriplets(m1.begin(), m1.end());
  sys.M2.resize(sys.k2, sys.k2);
  sys.M2.setFromTriplets(m2.begin(), m2.end());
  sys.D.resize(sys.k2, sys.k2);
  sys.D.setFromTriplets(dd.begin(), dd.end());
  sys.G.resize(sys.k1, sys.k2);
  sys.G.setFromTriplets(g.begin(), g.end());
  sys.N.resize(sys.k3, sys.k2);
  sys.N.setFromTriplets(nn.begin(), nn.end());

  sys.B2 = Matrix::Zero(sys.k2, static_cast<Eigen::Index>(ports.size()));
  for (std::size_t c = 0; c < ports.size(); ++c)
  {
    const std::size_t v = ports[c];
    const std::size_t e = network.incident_edges(v).front();
    const int sign = network.incidence_sign(e, v);
    const std::size_t node = sign > 0 ? sys.flux_offset[e] + mesh.cells[e] : sys.flux_offset[e];
    sys.B2(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(c)) = -sign;
  }

  sys.o1 = Vector::Ones(sys.k1);
  sys.nullG = Matrix::Zero(sys.k2, static_cast<Eigen::Index>(edges));
  for (std::size_t e = 0; e < edges; ++e)
  {
    sys.nullG.col(static_cast<Eigen::Index>(e))
      .segment(static_cast<Eigen::Index>(sys.flux_offset[e]),
               static_cast<Eigen::Index>(mesh.cells[e] + 1))
      .setOnes();
  }
  return sys;
}

A0Report check_A0(const SparseMatrix &M1, const SparseMatrix &M2, const SparseMatrix &D,
                  const SparseMatrix &G, const SparseMatrix &N, double tol)
{
  A0Report report;
  report.symmetry_m1 = symmetry_defect(M1);
  report.symmetry_m2 = symmetry_defect(M2);
  report.symmetry_d = symmetry_defect(D);

  const auto s1 = symmetric_spectrum_bounds(M1);
  const auto s2 = symmetric_spectrum_bounds(M2);
  const auto sd = symmetric_spectrum_bounds(D);
  report.min_eig_m1 = s1.min;
  report.max_eig_m1 = s1.max;
  report.min_eig_m2 = s2.min;
  report.max_eig_m2 = s2.max;
  report.min_eig_d = sd.min;
  report.max_eig_d = sd.max;

  report.symmetric = report.symmetry_m1 <= tol * std::max(s1.max, 1e-300) &&
                     report.symmetry_m2 <= tol * std::max(s2.max, 1e-300) &&
                     report.symmetry_d <= tol * std::max(sd.max, 1e-300);
  auto spd = [tol](const SymmetricSpectrumBounds &s, Eigen::Index n)
  { return n == 0 || (s.max > 0.0 && s.min > tol * s.max); };
  report.m1_spd = spd(s1, M1.rows());
  report.m2_spd = spd(s2, M2.rows());
  report.d_spd = spd(sd, D.rows());

  // Singular values of the stacked map [G; N] (full row rank <=> [G^T, N^T] injective).
  const Eigen::Index rows = G.rows() + N.rows();
  if (rows == 0)
  {
    report.stacked_injective = true;
    return report;
  }
  SparseMatrix stacked(rows, G.cols());
  {
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index k = 0; k < G.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(G, k); it; ++it)
        t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (Eigen::Index k = 0; k < N.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(N, k); it; ++it)
        t.emplace_back(static_cast<int>(G.rows() + it.row()), static_cast<int>(it.col()), it.value());
    stacked.setFromTriplets(t.begin(), t.end());
  }
  if (rows > stacked.cols())
  {
    report.stacked_sigma_min = 0.0;
    report.stacked_sigma_max = 1.0;
    report.stacked_injective = false;
    return report;
  }
  if (rows <= 2 * kDenseLimit)
  {
    const Matrix dense = Matrix(stacked);
    Eigen::BDCSVD<Matrix> svd(dense);
    const auto &sigma = svd.singularValues();
    report.stacked_sigma_max = sigma(0);
    report.stacked_sigma_min = sigma(sigma.size() - 1);
  }
  else
  {
    SparseMatrix gram = stacked * SparseMatrix(stacked.transpose());
    const auto sg = symmetric_spectrum_bounds(gram);
    report.stacked_sigma_max = std::sqrt(std::max(sg.max, 0.0));
    report.stacked_sigma_min = std::sqrt(std::max(sg.min, 0.0));
  }
  report.stacked_injective = report.stacked_sigma_min > tol * report.stacked_sigma_max;
  return report;
}

A0Report check_A0(const FemSystem &sys, double tol)
{
  return check_A0(sys.M1, sys.M2, sys.D, sys.G, sys.N, tol);
}

NetworkField constant_field(double value)
{
  return [value](std::size_t, double) { return value; };
}

std::pair<Vector, Vector> project_initial(const FemSystem &sys, const NetworkField &p0,
                                          const NetworkField &q0)
{
  const Network &network = *sys.network;
  const double gauss = 0.5 / std::sqrt(3.0);
  Vector x1(sys.k1);
  Vector rhs2 = Vector::Zero(sys.k2);
  for (std::size_t e = 0; e < network.edge_count(); ++e)
  {
    const Edge &edge = network.edge(e);
    const double h = sys.mesh.width(network, e);
    for (std::size_t c = 0; c < sys.mesh.cells[e]; ++c)
    {
      const double x0 = static_cast<double>(c) * h;
      const double xs[2] = {x0 + h * (0.5 - gauss), x0 + h * (0.5 + gauss)};
      // Pressure: M1 is diagonal with a*h, so the projection is the cell mean.
      double load = 0.0;
      for (double x : xs)
      {
        load += 0.5 * h * edge.a * p0(e, x);
      }
      x1(static_cast<Eigen::Index>(sys.pressure_offset[e] + c)) = load / (edge.a * h);

      const auto left = static_cast<Eigen::Index>(sys.flux_offset[e] + c);
      for (double x : xs)
      {
        const double t = (x - x0) / h;
        const double w = 0.5 * h * edge.b * q0(e, x);
        rhs2(left) += w * (1.0 - t);
        rhs2(left + 1) += w * t;
      }
    }
  }
  Vector x2 = Vector::Zero(sys.k2);
  if (rhs2.lpNorm<Eigen::Infinity>() > 0.0)
  {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(sys.M2);
    if (ldlt.info() != Eigen::Success)
    {
      throw Error(ErrorKind::Internal, "fem", "flux mass matrix factorization failed");
    }
    x2 = ldlt.solve(rhs2);
  }
  return {x1, x2};
}

double evaluate_pressure(const FemSystem &sys, const Vector &x1, std::size_t e, double x)
{
  const double h = sys.mesh.width(*sys.network, e);
  const std::size_t n = sys.mesh.cells.at(e);
  auto c = static_cast<std::size_t>(std::max(0.0, std::floor(x / h)));
  c = std::min(c, n - 1);
  return x1(static_cast<Eigen::Index>(sys.pressure_offset[e] + c));
}

double evaluate_flux(const FemSystem &sys, const Vector &x2, std::size_t e, double x)
{
  const double h = sys.mesh.width(*sys.network, e);
  const std::size_t n = sys.mesh.cells.at(e);
  auto c = static_cast<std::size_t>(std::max(0.0, std::floor(x / h)));
  c = std::min(c, n - 1);
  const double t = std::clamp(x / h - static_cast<double>(c), 0.0, 1.0);
  const auto left = static_cast<Eigen::Index>(sys.flux_offset[e] + c);
  return (1.0 - t) * x2(left) + t * x2(left + 1);
}

}  // namespace phmor
