// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_ERROR_HPP
#define PHMOR_ERROR_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phmor
{

enum class ErrorKind
{
  Validation,            // malformed network, mesh, or coefficients
  Precondition,          // caller violated an operation's precondition
  Schema,                // configuration document does not match the schema
  SingularPencil,        // s*E + A numerically singular at the requested shift
  NoSteadyState,         // A singular, stationary problem has no unique solution
  SurjectivityViolation, // [G; N] not surjective in the minimum-norm solve
  AssemblyInvariant,     // mass matrix not SPD (Cholesky failure)
  ConstraintInfeasible,  // degenerate mass constraint in the reduced projection
  SingularStep,          // theta-scheme step matrix not invertible
  Unavailable,           // requested data was not retained
  Io,
  Internal
};

std::string_view to_string(ErrorKind kind);

// Exception type thrown by every module. The optional value carries a
// numeric detail, e.g. the reciprocal condition estimate of a singular solve;
// NaN when there is none.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, std::string module, const std::string &message,
        double value = std::numeric_limits<double>::quiet_NaN());

  ErrorKind kind() const { return kind_; }
  const std::string &module() const { return module_; }
  double value() const { return value_; }

private:
  ErrorKind kind_;
  std::string module_;
  double value_;
};

}  // namespace phmor

#endif  // PHMOR_ERROR_HPP
