// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "phmor/diagnostics.hpp"
#include "phmor/error.hpp"

using namespace phmor;

namespace
{

FemSystem build(const Network &net, std::size_t cells)
{
  return assemble(net, Mesh::uniform(net, cells));
}

SimulationTrace synthetic_trace(double rate, double T, double dt)
{
  SimulationTrace tr;
  for (double t = 0.0; t <= T + 1e-12; t += dt)
  {
    tr.times.push_back(t);
    tr.energy.push_back(0.5 * std::exp(-rate * t));
  }
  return tr;
}

// Free decay from p = 1, q = 0 with the ports held at zero.
SimulationTrace free_decay(const DescriptorSystem &sys, const Vector &x1, const Vector &x2,
                           const ThetaScheme &scheme)
{
  return simulate(sys, sys.state(x1, x2), zero_input(sys.inputs()), scheme,
                  SimulateOptions{false});
}

}  // namespace

TEST_CASE("moment check of an exact projection")
{
  const FemSystem s = build(make_tp2(), 6);
  const DescriptorSystem full = from_fem(s);
  const MomentReport rep = verify_moment_matching(full, full, 0.5, 3, 1e-10);
  CHECK(rep.all_passed());
  CHECK_FALSE(rep.structural_failure);
  REQUIRE(rep.errors.size() == 6);
  for (double e : rep.errors)
    CHECK(e == 0.0);
}

TEST_CASE("moment check detects an insufficient model")
{
  const FemSystem s = build(make_tp1(), 40);
  const DescriptorSystem full = from_fem(s);
  ReductionOptions opt;
  opt.levels = 2;
  opt.s0 = 1.0;
  const Reduction r = reduce(s, opt);
  const DescriptorSystem red = r.reduced.descriptor();
  CHECK(verify_moment_matching(full, red, 1.0, 2, 1e-8).all_passed());
  const MomentReport more = verify_moment_matching(full, red, 1.0, 4, 1e-8);
  CHECK_FALSE(more.all_passed());
  CHECK_FALSE(more.structural_failure);
  for (int l = 0; l < 4; ++l)
    CHECK(more.passed[l]);
}

TEST_CASE("singular reduced pencil is a structural failure")
{
  const FemSystem s = build(make_tp1(), 50);
  ReductionOptions opt;
  opt.levels = 1;
  opt.s0 = 0.0;
  opt.mode = BasisMode::standard;
  opt.ports = {0};
  const Reduction r = reduce(s, opt);
  const MomentReport rep =
      verify_moment_matching(from_fem(s), r.reduced.descriptor(), 0.0, 1, 1e-8);
  CHECK(rep.structural_failure);
  CHECK_FALSE(rep.all_passed());
  CHECK_FALSE(rep.failure.empty());
}

TEST_CASE("decay fit of an exact exponential")
{
  const DecayFit fit = fit_decay_rate(synthetic_trace(2.0, 4.0, 1e-3), 1.0, 4.0);
  CHECK(fit.gamma == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.samples <= 500);
  CHECK_FALSE(fit.truncated);
}

TEST_CASE("decay fit stops at nonpositive energy")
{
  SimulationTrace tr = synthetic_trace(1.0, 2.0, 0.01);
  for (std::size_t k = 150; k < tr.size(); ++k)
    tr.energy[k] = 0.0;
  const DecayFit fit = fit_decay_rate(tr, 0.0, 2.0);
  CHECK(fit.truncated);
  CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS((void)fit_decay_rate(tr, 1.0, 1.0), Error);
}

TEST_CASE("decay rates of the full and the lowest standard model")
{
  const FemSystem s = build(make_tp1(), 40);
  const ThetaScheme scheme = ThetaScheme::damped_trapezoid(1e-3, 4.0);
  const Vector x2 = Vector::Zero(s.k2);

  const DecayFit full = fit_decay_rate(free_decay(from_fem(s), s.o1, x2, scheme), 1.0, 4.0);
  CHECK(full.gamma == doctest::Approx(1.08).epsilon(0.15));

  ReductionOptions opt;
  opt.levels = 1;
  opt.mode = BasisMode::standard;
  opt.ports = {0};
  const Reduction r = reduce(s, opt);
  const auto z = project_initial_reduced(r.basis, s, s.o1, x2, false);
  const DescriptorSystem red = r.reduced.simulation_form();
  const SimulationTrace tr = free_decay(red, z.first, z.second, scheme);
  const DecayFit flat = fit_decay_rate(tr, 1.0, 4.0);
  CHECK(std::abs(flat.gamma) <= 1e-6);
  CHECK(tr.energy.back() == doctest::Approx(0.375).epsilon(1e-3));
}

TEST_CASE("energy sampling reads the grid")
{
  const SimulationTrace tr = synthetic_trace(1.0, 2.0, 0.25);
  const std::vector<double> e = sample_energy(tr, {0.0, 1.0, 2.0});
  REQUIRE(e.size() == 3);
  CHECK(e[0] == 0.5);
  CHECK(e[1] == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(e[2] == doctest::Approx(0.5 * std::exp(-2.0)));
}

TEST_CASE("mass table on a coarse mesh")
{
  TableConfig cfg;
  cfg.mesh_cells = 50;
  cfg.levels = {1, 3};
  const MassTable t = reproduce_table_mass(cfg);
  CHECK(t.exact.mass == doctest::Approx(1.0));
  CHECK(t.exact.energy == doctest::Approx(0.5));
  REQUIRE(t.standard_projection.size() == 2);
  CHECK(t.standard_projection[0].mass == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(t.standard_projection[0].energy == doctest::Approx(0.375).epsilon(1e-3));
  CHECK(t.standard_constraint[0].mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.standard_constraint[0].energy == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
  for (std::size_t i = 0; i < 2; ++i)
  {
    CHECK(t.improved_projection[i].mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t.improved_projection[i].energy == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(t.improved_constraint[i].mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t.improved_constraint[i].energy == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(t.standard_projection[i].mass <= 1.0 + 1e-12);
  }
  CHECK(t.standard_projection[1].mass > t.standard_projection[0].mass);
}

TEST_CASE("energy table on a coarse grid")
{
  TableConfig cfg;
  cfg.mesh_cells = 20;
  cfg.levels = {1, 3};
  cfg.tau = 1e-2;
  cfg.theta = 0.5 + cfg.tau;
  cfg.times = {0.0, 1.0, 2.0};
  const EnergyTable t = reproduce_table_energy(cfg);
  REQUIRE(t.exact.size() == 3);
  CHECK(t.exact[0] == doctest::Approx(0.5));
  CHECK(t.exact[1] < t.exact[0]);
  CHECK(t.exact[2] < t.exact[1]);
  REQUIRE(t.standard.size() == 2);
  REQUIRE(t.improved.size() == 2);
  for (double e : t.standard[0])
    CHECK(e == doctest::Approx(0.375).epsilon(1e-3));
  for (std::size_t i = 0; i < 2; ++i)
  {
    CHECK(t.improved[i][0] == doctest::Approx(0.5).epsilon(1e-10));
    for (std::size_t k = 1; k < 3; ++k)
      CHECK(t.improved[i][k] <= t.improved[i][k - 1]);
  }
}

TEST_CASE("relative error of series")
{
  CHECK(relative_l2_error({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(relative_l2_error({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(1.0));
  CHECK(relative_l2_error({1.0}, {0.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)relative_l2_error({1.0}, {1.0, 2.0}), Error);
}

TEST_CASE("reduced outputs approach the full response")
{
  const FemSystem s = build(make_tp1(), 30);
  const ThetaScheme scheme = ThetaScheme::damped_trapezoid(1e-2, 6.0);
  const OutputComparison a = compare_outputs(s, {2, 6}, 0.0, BasisMode::improved, scheme);
  REQUIRE(a.reduced.size() == 2);
  CHECK(a.times.size() == a.full.size());
  CHECK(a.relative_errors[1] < a.relative_errors[0]);
  CHECK(a.relative_errors[1] < 5e-2);
  CHECK(a.dim_v1[1] >= a.dim_v1[0]);

  const OutputComparison b = compare_outputs(s, {2, 6}, 0.0, BasisMode::improved, scheme);
  CHECK(a.full == b.full);
  CHECK(a.reduced == b.reduced);
}

TEST_CASE("pressure injection and distance")
{
  const Network net = make_tp2();
  const FemSystem coarse = build(net, 5);
  const Vector ones = inject_pressure(coarse, coarse.o1, 20);
  CHECK(ones.size() == 40);
  CHECK((ones - Vector::Ones(40)).norm() == 0.0);
  CHECK(pressure_l2_distance(net, ones, ones, 20) == 0.0);
  CHECK(pressure_l2_distance(net, ones, Vector::Zero(40), 20) == doctest::Approx(1.0));

  const Vector ramp = Vector::LinSpaced(coarse.k1, 1.0, 10.0);
  const Vector fine = inject_pressure(coarse, ramp, 10);
  CHECK(fine(0) == ramp(0));
  CHECK(fine(3) == ramp(1));
  CHECK_THROWS_AS((void)inject_pressure(coarse, ramp, 7), Error);
}
