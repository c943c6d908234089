// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_TIMEINT_HPP
#define PHMOR_TIMEINT_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "phmor/descriptor.hpp"
#include "phmor/linalg.hpp"

namespace phmor
{

// theta in [1/2, 1]; theta = 1 is implicit Euler, theta = 1/2 the trapezoidal rule.
struct ThetaScheme
{
  double theta = 1.0;
  double tau = 1e-3;
  double T = 1.0;

  // theta = 1/2 + tau: second order with a little numerical damping.
  static ThetaScheme damped_trapezoid(double tau, double T);

  void validate() const;
  std::size_t steps() const;
};

using InputSignal = std::function<Vector(double t)>;

InputSignal zero_input(Eigen::Index inputs);
InputSignal constant_input(const Vector &value);

// t on [0, 1), 2 - t on [1, 2), 0 afterwards.
double hat_input(double t);

struct SimulationTrace
{
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> dissipation;  // x2^T D x2
  std::vector<Vector> outputs;
  std::vector<Vector> inputs;
  std::vector<Vector> states;       // empty unless retained
  Vector final_state;

  std::size_t size() const { return times.size(); }
  bool has_states() const { return !states.empty(); }
};

struct SimulateOptions
{
  bool keep_states = true;
};

// Integrates E x' + A x = B u from x0. x0 may omit the multiplier block, which
// then starts at zero; the first implicit step makes it consistent.
// Throws ErrorKind::SingularStep if E + tau theta A is singular.
SimulationTrace simulate(const DescriptorSystem &sys, const Vector &x0, const InputSignal &u,
                         const ThetaScheme &scheme, const SimulateOptions &options = {});

// Per step: (m^{k+1} - m^k) - tau * sum(y^theta). Needs no stored states.
std::vector<double> mass_residuals(const SimulationTrace &trace, const ThetaScheme &scheme);

struct BalanceResiduals
{
  std::vector<double> mass;
  // (E^{k+1} - E^k) + tau D(x^theta) - tau (y^theta)^T u^theta
  std::vector<double> energy;
  // (theta - 1/2) dx^T E dx; energy + numerical_dissipation vanishes per step.
  std::vector<double> numerical_dissipation;
};

// Throws ErrorKind::Unavailable if the trace did not retain its states.
BalanceResiduals balance_residuals(const SimulationTrace &trace, const ThetaScheme &scheme,
                                   const DescriptorSystem &sys);

}  // namespace phmor

#endif  // PHMOR_TIMEINT_HPP
