// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_CLI_SCENARIO_HPP
#define PHMOR_CLI_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phmor/fem.hpp"
#include "phmor/mor.hpp"
#include "phmor/network.hpp"
#include "phmor/timeint.hpp"

namespace phmor::cli
{

enum class SignalKind
{
  zero,
  constant,
  hat,
  table
};

struct SignalSpec
{
  SignalKind kind = SignalKind::zero;
  double value = 0.0;                              // constant
  std::vector<std::pair<double, double>> points;   // table, linear interpolation
};

struct ReductionSpec
{
  double s0 = 0.0;
  int L = 3;
  BasisMode mode = BasisMode::improved;
  double tol = kDefaultDropTol;
};

struct ScenarioConfig
{
  // Builtin name (tp1, tp2, net7) or an inline network.
  std::string builtin = "tp1";
  std::optional<nlohmann::json> inline_network;
  double d0 = 1.0;
  std::size_t mesh_cells = 50;
  std::optional<ReductionSpec> reduction;
  ThetaScheme time{0.5 + 1e-3, 1e-3, 4.0};
  double p0 = 0.0;
  double q0 = 0.0;
  std::map<std::string, SignalSpec> inputs;  // keyed by port vertex id
  std::vector<std::string> outputs{"trace", "report"};
};

// Throws Error(ErrorKind::Schema) on any structural or range violation.
ScenarioConfig parse_config(const nlohmann::json &doc);
ScenarioConfig load_config(const std::string &path);

nlohmann::json to_json(const ScenarioConfig &config);

// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ScenarioConfig &config);

Network build_network(const ScenarioConfig &config);
Network parse_network(const nlohmann::json &doc);

// Input signal over the network's ports; ports without an entry receive zero.
InputSignal make_input_signal(const ScenarioConfig &config, const Network &network);

double evaluate_signal(const SignalSpec &spec, double t);

// Checks that referenced ports exist. Throws Error(ErrorKind::Schema).
void validate_against_network(const ScenarioConfig &config, const Network &network);

}  // namespace phmor::cli

#endif  // PHMOR_CLI_SCENARIO_HPP
