// SPDX-License-Identifier: Apache-2.0

#include "phmor/timeint.hpp"

#include <cmath>
#include <sstream>

#include "phmor/error.hpp"

namespace phmor
{

namespace
{
constexpr const char *kModule = "timeint";
}

ThetaScheme ThetaScheme::damped_trapezoid(double tau, double T)
{
  return ThetaScheme{0.5 + tau, tau, T};
}

void ThetaScheme::validate() const
{
  if (!(theta >= 0.5 && theta <= 1.0))
    throw Error(ErrorKind::Validation, kModule, "theta must lie in [1/2, 1]", theta);
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw Error(ErrorKind::Validation, kModule, "tau must be positive", tau);
  if (!(T >= tau) || !std::isfinite(T))
    throw Error(ErrorKind::Validation, kModule, "T must be at least tau", T);
}

std::size_t ThetaScheme::steps() const
{
  return static_cast<std::size_t>(std::llround(T / tau));
}

InputSignal zero_input(Eigen::Index inputs)
{
  return [inputs](double) { return Vector::Zero(inputs).eval(); };
}

InputSignal constant_input(const Vector &value)
{
  return [value](double) { return value; };
}

double hat_input(double t)
{
  if (t < 0.0)
    return 0.0;
  if (t < 1.0)
    return t;
  if (t < 2.0)
    return 2.0 - t;
  return 0.0;
}

SimulationTrace simulate(const DescriptorSystem &sys, const Vector &x0, const InputSignal &u,
                         const ThetaScheme &scheme, const SimulateOptions &options)
{
  scheme.validate();
  const BlockDims &dims = sys.dims();
  Vector x;
  if (x0.size() == sys.size())
    x = x0;
  else if (x0.size() == dims.k1 + dims.k2)
    x = sys.state(x0.head(dims.k1), x0.tail(dims.k2));
  else
    throw Error(ErrorKind::Precondition, kModule, "initial state has the wrong size");

  const double tau = scheme.tau;
  const double theta = scheme.theta;
  const SparseMatrix lhs = (sys.E() + (tau * theta) * sys.A()).pruned();
  const SparseMatrix rhs_map = (sys.E() - (tau * (1.0 - theta)) * sys.A()).pruned();
  const LuSolver lu(lhs);
  if (lu.singular())
  {
    std::ostringstream msg;
    msg << "step matrix singular for tau=" << tau << ", theta=" << theta;
    throw Error(ErrorKind::SingularStep, kModule, msg.str(), lu.rcond());
  }

  const std::size_t K = scheme.steps();
  SimulationTrace trace;
  trace.times.reserve(K + 1);
  trace.mass.reserve(K + 1);
  trace.energy.reserve(K + 1);
  trace.dissipation.reserve(K + 1);
  trace.outputs.reserve(K + 1);
  trace.inputs.reserve(K + 1);
  if (options.keep_states)
    trace.states.reserve(K + 1);

  const auto record = [&](double t, const Vector &state, const Vector &input) {
    trace.times.push_back(t);
    trace.mass.push_back(sys.mass(state));
    trace.energy.push_back(sys.energy(state));
    trace.dissipation.push_back(sys.dissipation_rate(state));
    trace.outputs.push_back(sys.output(state));
    trace.inputs.push_back(input);
    if (options.keep_states)
      trace.states.push_back(state);
  };

  Vector u_prev = u(0.0);
  if (u_prev.size() != sys.inputs())
    throw Error(ErrorKind::Precondition, kModule, "input signal has the wrong size");
  record(0.0, x, u_prev);
  for (std::size_t k = 0; k < K; ++k)
  {
    const double t_next = static_cast<double>(k + 1) * tau;
    const Vector u_next = u(t_next);
    const Vector rhs =
        rhs_map * x + sys.B() * (tau * (theta * u_next + (1.0 - theta) * u_prev));
    x = lu.solve(rhs);
    record(t_next, x, u_next);
    u_prev = u_next;
  }
  trace.final_state = x;
  return trace;
}

std::vector<double> mass_residuals(const SimulationTrace &trace, const ThetaScheme &scheme)
{
  const double theta = scheme.theta;
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k)
  {
    const Vector y_theta = theta * trace.outputs[k + 1] + (1.0 - theta) * trace.outputs[k];
    out.push_back((trace.mass[k + 1] - trace.mass[k]) - scheme.tau * y_theta.sum());
  }
  return out;
}

BalanceResiduals balance_residuals(const SimulationTrace &trace, const ThetaScheme &scheme,
                                   const DescriptorSystem &sys)
{
  if (!trace.has_states())
    throw Error(ErrorKind::Unavailable, kModule, "trace does not retain states");
  const double theta = scheme.theta;
  const double tau = scheme.tau;
  BalanceResiduals out;
  out.mass = mass_residuals(trace, scheme);
  for (std::size_t k = 0; k + 1 < trace.size(); ++k)
  {
    const Vector x_theta = theta * trace.states[k + 1] + (1.0 - theta) * trace.states[k];
    const Vector u_theta = theta * trace.inputs[k + 1] + (1.0 - theta) * trace.inputs[k];
    const Vector dx = trace.states[k + 1] - trace.states[k];
    const double flow = sys.output(x_theta).dot(u_theta);
    out.energy.push_back((trace.energy[k + 1] - trace.energy[k]) +
                         tau * sys.dissipation_rate(x_theta) - tau * flow);
    out.numerical_dissipation.push_back((theta - 0.5) * dx.dot(sys.E() * dx));
  }
  return out;
}

}  // namespace phmor
