// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_DIAGNOSTICS_HPP
#define PHMOR_DIAGNOSTICS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "phmor/descriptor.hpp"
#include "phmor/fem.hpp"
#include "phmor/mor.hpp"
#include "phmor/timeint.hpp"

namespace phmor
{

struct MomentReport
{
  double s0 = 0.0;
  double tol = 0.0;
  std::vector<double> errors;  // ||m_hat_l - m_l|| / ||m_l||, l = 0..2L-1
  std::vector<bool> passed;
  bool structural_failure = false;  // a pencil was singular at s0
  std::string failure;

  bool all_passed() const;
};

// Never throws on a singular pencil; that is reported as a structural failure.
MomentReport verify_moment_matching(const DescriptorSystem &full,
                                    const DescriptorSystem &reduced, double s0, int L,
                                    double tol);

struct DecayFit
{
  double gamma = 0.0;
  double r_squared = 0.0;
  bool truncated = false;  // window cut where the energy stopped being positive
  std::size_t samples = 0;
};

// Least-squares line through log E_h on [t_start, t_end], decimated to at most
// 500 samples; gamma = -slope.
DecayFit fit_decay_rate(const SimulationTrace &trace, double t_start, double t_end);

// Settings for the single-pipe tables: homogeneous data p0 = 1, q0 = 0, Krylov
// space from the left input only.
struct TableConfig
{
  std::size_t mesh_cells = 200;
  std::vector<int> levels{1, 3, 10};
  double s0 = 0.0;
  double tol = kDefaultDropTol;
  double d = 1.0;
  double tau = 1e-3;
  double theta = 0.5 + 1e-3;
  std::vector<double> times{0.0, 1.0, 2.0, 3.0, 4.0};
};

struct MassEnergy
{
  double mass = 0.0;
  double energy = 0.0;
};

struct MassTable
{
  std::vector<int> levels;
  MassEnergy exact;
  std::vector<MassEnergy> standard_projection;
  std::vector<MassEnergy> standard_constraint;
  std::vector<MassEnergy> improved_projection;
  std::vector<MassEnergy> improved_constraint;
};

MassTable reproduce_table_mass(const TableConfig &config);

struct EnergyTable
{
  std::vector<int> levels;
  std::vector<double> times;
  std::vector<double> exact;
  std::vector<std::vector<double>> standard;  // [level][time]
  std::vector<std::vector<double>> improved;
};

EnergyTable reproduce_table_energy(const TableConfig &config);

// Energy at the requested times, read from the trace grid.
std::vector<double> sample_energy(const SimulationTrace &trace, const std::vector<double> &times);

// Output series of the full model and of reduced models for the hat input at
// the first port, observed as -y at the last port. The Krylov space uses all
// inputs; initial state zero.
struct OutputComparison
{
  std::vector<int> levels;
  std::vector<double> times;
  std::vector<double> full;
  std::vector<std::vector<double>> reduced;  // [level][time]
  std::vector<double> relative_errors;       // discrete L2-in-time
  std::vector<Eigen::Index> dim_v1, dim_v2;
};

OutputComparison compare_outputs(const FemSystem &sys, const std::vector<int> &levels,
                                 double s0, BasisMode mode, const ThetaScheme &scheme,
                                 double tol = kDefaultDropTol);

// sqrt(sum (a-b)^2 / sum b^2) over equal-length series.
double relative_l2_error(const std::vector<double> &a, const std::vector<double> &b);

// Pressure basis column sampled as a piecewise constant on `fine_cells` cells
// per pipe, for comparisons across meshes. Requires fine_cells to be a
// multiple of the mesh's cells per pipe.
Vector inject_pressure(const FemSystem &sys, const Vector &x1, std::size_t fine_cells);

// L2 distance of two injected pressure fields on a uniform fine grid of the network.
double pressure_l2_distance(const Network &network, const Vector &a, const Vector &b,
                            std::size_t fine_cells);

}  // namespace phmor

#endif  // PHMOR_DIAGNOSTICS_HPP
