// SPDX-License-Identifier: Apache-2.0

#include "phmor/error.hpp"

#include <utility>

namespace phmor
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::Validation:
      return "validation";
    case ErrorKind::Precondition:
      return "precondition";
    case ErrorKind::Schema:
      return "schema";
    case ErrorKind::SingularPencil:
      return "singular_pencil";
    case ErrorKind::NoSteadyState:
      return "no_steady_state";
    case ErrorKind::SurjectivityViolation:
      return "surjectivity_violation";
    case ErrorKind::AssemblyInvariant:
      return "assembly_invariant";
    case ErrorKind::ConstraintInfeasible:
      return "constraint_infeasible";
    case ErrorKind::SingularStep:
      return "singular_step";
    case ErrorKind::Unavailable:
      return "unavailable";
    case ErrorKind::Io:
      return "io";
    case ErrorKind::Internal:
      return "internal";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string &message, double value)
  : std::runtime_error(message), kind_(kind), module_(std::move(module)), value_(value)
{
}

}  // namespace phmor
