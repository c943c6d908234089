// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_CLI_COMMANDS_HPP
#define PHMOR_CLI_COMMANDS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "phmor/cli/io.hpp"
#include "phmor/cli/scenario.hpp"
#include "phmor/error.hpp"

namespace phmor::cli
{

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

// Command-line values that take precedence over the scenario document.
struct Overrides
{
  std::optional<std::size_t> mesh_cells;
  std::optional<double> s0;
  std::optional<int> L;
  std::optional<std::string> mode;
  std::optional<double> theta;
  std::optional<double> tau;
  std::optional<double> T;
  std::optional<double> d0;
  std::optional<double> tol;
};

// Builtin name or path to a JSON document, with overrides applied.
ScenarioConfig resolve_scenario(const std::string &scenario, const Overrides &overrides);
void apply_overrides(ScenarioConfig &config, const Overrides &overrides);

struct CommandOutput
{
  OutputBundle files;
  nlohmann::json summary;  // printed to stdout
};

CommandOutput command_simulate(const ScenarioConfig &config);
CommandOutput command_reduce(const ScenarioConfig &config);
CommandOutput command_compare(const ScenarioConfig &config);
CommandOutput command_check(const ScenarioConfig &config);
CommandOutput command_table_mass(const ScenarioConfig &config, bool mesh_given);
CommandOutput command_table_energy(const ScenarioConfig &config, bool mesh_given);
CommandOutput command_run(const ScenarioConfig &config);

// Report with the keys a0, compatibility, pencil, moments, decay, versions.
nlohmann::json build_report(const ScenarioConfig &config, const SimulationTrace *full_trace,
                            const SimulationTrace *reduced_trace);

int exit_code_for(ErrorKind kind);
nlohmann::json error_to_json(const Error &error);

// Entry point of the executable.
int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err);

}  // namespace phmor::cli

#endif  // PHMOR_CLI_COMMANDS_HPP
