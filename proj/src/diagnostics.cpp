// SPDX-License-Identifier: Apache-2.0

#include "phmor/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "phmor/error.hpp"
#include "phmor/network.hpp"

namespace phmor
{

namespace
{

constexpr const char *kModule = "diagnostics";

double relative_difference(const Matrix &approx, const Matrix &exact)
{
  const double scale = exact.norm();
  const double diff = (approx - exact).norm();
  return scale > 0.0 ? diff / scale : diff;
}

MassEnergy evaluate_reduced_initial(const ProjectionBasis &basis, const ReducedSystem &red,
                                    const std::pair<Vector, Vector> &z)
{
  MassEnergy out;
  out.mass = basis.o1_hat.size() ? basis.o1_hat.dot(red.M1 * z.first) : 0.0;
  out.energy = 0.5 * (z.first.dot(red.M1 * z.first) + z.second.dot(red.M2 * z.second));
  return out;
}

}  // namespace

bool MomentReport::all_passed() const
{
  return !structural_failure && !passed.empty() &&
         std::all_of(passed.begin(), passed.end(), [](bool b) { return b; });
}

MomentReport verify_moment_matching(const DescriptorSystem &full,
                                    const DescriptorSystem &reduced, double s0, int L,
                                    double tol)
{
  MomentReport rep;
  rep.s0 = s0;
  rep.tol = tol;
  const int count = 2 * L;
  MomentSequence mf, mr;
  try
  {
    mf = moments(full, s0, count);
    mr = moments(reduced, s0, count);
  }
  catch (const Error &e)
  {
    if (e.kind() != ErrorKind::SingularPencil)
      throw;
    rep.structural_failure = true;
    rep.failure = e.what();
    rep.errors.assign(static_cast<std::size_t>(count), std::numeric_limits<double>::infinity());
    rep.passed.assign(static_cast<std::size_t>(count), false);
    return rep;
  }
  for (int l = 0; l < count; ++l)
  {
    const double err = relative_difference(mr.moments[l], mf.moments[l]);
    rep.errors.push_back(err);
    rep.passed.push_back(err <= tol);
  }
  return rep;
}

DecayFit fit_decay_rate(const SimulationTrace &trace, double t_start, double t_end)
{
  if (!(t_end > t_start))
    throw Error(ErrorKind::Precondition, kModule, "fit window is empty");
  std::vector<std::size_t> window;
  DecayFit fit;
  for (std::size_t k = 0; k < trace.size(); ++k)
  {
    const double t = trace.times[k];
    if (t < t_start - 1e-12 || t > t_end + 1e-12)
      continue;
    if (!(trace.energy[k] > 0.0))
    {
      fit.truncated = true;
      break;
    }
    window.push_back(k);
  }
  if (window.size() < 2)
    throw Error(ErrorKind::Precondition, kModule, "fit window holds fewer than two samples");

  const std::size_t stride = (window.size() + 499) / 500;
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < window.size(); i += stride)
  {
    ts.push_back(trace.times[window[i]]);
    ls.push_back(std::log(trace.energy[window[i]]));
  }
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
  {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= n;
  ml /= n;
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
  {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stl += (ts[i] - mt) * (ls[i] - ml);
    sll += (ls[i] - ml) * (ls[i] - ml);
  }
  const double slope = stl / stt;
  fit.gamma = -slope;
  // A flat log-energy is fitted perfectly.
  fit.r_squared = sll > 0.0 ? (stl * stl) / (stt * sll) : 1.0;
  fit.samples = ts.size();
  return fit;
}

std::vector<double> sample_energy(const SimulationTrace &trace, const std::vector<double> &times)
{
  std::vector<double> out;
  for (double t : times)
  {
    const auto it = std::lower_bound(trace.times.begin(), trace.times.end(), t - 1e-9);
    if (it == trace.times.end() || std::abs(*it - t) > 1e-9)
      throw Error(ErrorKind::Precondition, kModule, "sample time is not on the trace grid", t);
    out.push_back(trace.energy[static_cast<std::size_t>(it - trace.times.begin())]);
  }
  return out;
}

MassTable reproduce_table_mass(const TableConfig &config)
{
  const Network net = make_tp1(config.d);
  const FemSystem sys = assemble(net, Mesh::uniform(net, config.mesh_cells));
  const Vector x1 = sys.o1;
  const Vector x2 = Vector::Zero(sys.k2);

  MassTable table;
  table.levels = config.levels;
  table.exact.mass = sys.o1.dot(sys.M1 * x1);
  table.exact.energy = 0.5 * x1.dot(sys.M1 * x1);

  for (int L : config.levels)
  {
    for (BasisMode mode : {BasisMode::standard, BasisMode::improved})
    {
      ReductionOptions opt;
      opt.s0 = config.s0;
      opt.levels = L;
      opt.tol = config.tol;
      opt.mode = mode;
      opt.ports = {0};
      const Reduction r = reduce(sys, opt);
      const MassEnergy proj = evaluate_reduced_initial(
          r.basis, r.reduced, project_initial_reduced(r.basis, sys, x1, x2, false));
      const MassEnergy cons = evaluate_reduced_initial(
          r.basis, r.reduced, project_initial_reduced(r.basis, sys, x1, x2, true));
      if (mode == BasisMode::standard)
      {
        table.standard_projection.push_back(proj);
        table.standard_constraint.push_back(cons);
      }
      else
      {
        table.improved_projection.push_back(proj);
        table.improved_constraint.push_back(cons);
      }
    }
  }
  return table;
}

EnergyTable reproduce_table_energy(const TableConfig &config)
{
  const Network net = make_tp1(config.d);
  const FemSystem sys = assemble(net, Mesh::uniform(net, config.mesh_cells));
  const Vector x1 = sys.o1;
  const Vector x2 = Vector::Zero(sys.k2);
  const double T = config.times.empty()
                       ? config.tau
                       : *std::max_element(config.times.begin(), config.times.end());
  const ThetaScheme scheme{config.theta, config.tau, std::max(T, config.tau)};
  const SimulateOptions no_states{false};

  EnergyTable table;
  table.levels = config.levels;
  table.times = config.times;
  const DescriptorSystem full = from_fem(sys);
  const Vector x0 = full.state(x1, x2);
  table.exact =
      sample_energy(simulate(full, x0, zero_input(full.inputs()), scheme, no_states),
                    config.times);

  for (int L : config.levels)
  {
    for (BasisMode mode : {BasisMode::standard, BasisMode::improved})
    {
      ReductionOptions opt;
      opt.s0 = config.s0;
      opt.levels = L;
      opt.tol = config.tol;
      opt.mode = mode;
      opt.ports = {0};
      const Reduction r = reduce(sys, opt);
      const auto z = project_initial_reduced(r.basis, sys, x1, x2, false);
      const DescriptorSystem red = r.reduced.simulation_form();
      const SimulationTrace tr =
          simulate(red, red.state(z.first, z.second), zero_input(red.inputs()), scheme,
                   no_states);
      (mode == BasisMode::standard ? table.standard : table.improved)
          .push_back(sample_energy(tr, config.times));
    }
  }
  return table;
}

double relative_l2_error(const std::vector<double> &a, const std::vector<double> &b)
{
  if (a.size() != b.size())
    throw Error(ErrorKind::Precondition, kModule, "series lengths differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

OutputComparison compare_outputs(const FemSystem &sys, const std::vector<int> &levels,
                                 double s0, BasisMode mode, const ThetaScheme &scheme,
                                 double tol)
{
  const Eigen::Index m = sys.ports();
  if (m < 1)
    throw Error(ErrorKind::Precondition, kModule, "system has no ports");
  const InputSignal u = [m](double t) {
    Vector v = Vector::Zero(m);
    v(0) = hat_input(t);
    return v;
  };
  const SimulateOptions no_states{false};
  const auto observed = [m](const SimulationTrace &tr) {
    std::vector<double> y;
    y.reserve(tr.size());
    for (const Vector &out : tr.outputs)
      y.push_back(-out(m - 1));
    return y;
  };

  OutputComparison cmp;
  cmp.levels = levels;
  const DescriptorSystem full = from_fem(sys);
  const SimulationTrace ft = simulate(full, Vector::Zero(full.size()), u, scheme, no_states);
  cmp.times = ft.times;
  cmp.full = observed(ft);

  for (int L : levels)
  {
    ReductionOptions opt;
    opt.s0 = s0;
    opt.levels = L;
    opt.tol = tol;
    opt.mode = mode;
    const Reduction r = reduce(sys, opt);
    const DescriptorSystem red = r.reduced.simulation_form();
    const SimulationTrace rt = simulate(red, Vector::Zero(red.size()), u, scheme, no_states);
    cmp.reduced.push_back(observed(rt));
    cmp.relative_errors.push_back(relative_l2_error(cmp.reduced.back(), cmp.full));
    cmp.dim_v1.push_back(r.basis.V1.cols());
    cmp.dim_v2.push_back(r.basis.V2.cols());
  }
  return cmp;
}

Vector inject_pressure(const FemSystem &sys, const Vector &x1, std::size_t fine_cells)
{
  const Network &net = *sys.network;
  if (x1.size() != sys.k1)
    throw Error(ErrorKind::Precondition, kModule, "pressure vector has the wrong size");
  Vector out(static_cast<Eigen::Index>(fine_cells * net.edge_count()));
  for (std::size_t e = 0; e < net.edge_count(); ++e)
  {
    const std::size_t n = sys.mesh.cells[e];
    if (n == 0 || fine_cells % n != 0)
      throw Error(ErrorKind::Precondition, kModule,
                  "fine grid is not a refinement of the mesh");
    const std::size_t ratio = fine_cells / n;
    for (std::size_t j = 0; j < fine_cells; ++j)
      out(static_cast<Eigen::Index>(e * fine_cells + j)) =
          x1(static_cast<Eigen::Index>(sys.pressure_offset[e] + j / ratio));
  }
  return out;
}

double pressure_l2_distance(const Network &network, const Vector &a, const Vector &b,
                            std::size_t fine_cells)
{
  const auto expected = static_cast<Eigen::Index>(fine_cells * network.edge_count());
  if (a.size() != expected || b.size() != expected)
    throw Error(ErrorKind::Precondition, kModule, "injected fields have the wrong size");
  double sum = 0.0;
  for (std::size_t e = 0; e < network.edge_count(); ++e)
  {
    const double h = network.edge(e).length / static_cast<double>(fine_cells);
    const auto seg = static_cast<Eigen::Index>(e * fine_cells);
    const auto len = static_cast<Eigen::Index>(fine_cells);
    sum += h * (a.segment(seg, len) - b.segment(seg, len)).squaredNorm();
  }
  return std::sqrt(sum);
}

}  // namespace phmor
