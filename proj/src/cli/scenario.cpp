// SPDX-License-Identifier: Apache-2.0

#include "phmor/cli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "phmor/error.hpp"

namespace phmor::cli
{

using nlohmann::json;

namespace
{

constexpr const char *kModule = "cli";

[[noreturn]] void schema_error(const std::string &message)
{
  throw Error(ErrorKind::Schema, kModule, message);
}

void reject_unknown_keys(const json &obj, const std::set<std::string> &allowed,
                         const std::string &where)
{
  for (const auto &item : obj.items())
    if (!allowed.count(item.key()))
      schema_error("unknown key '" + item.key() + "' in " + where);
}

const json &require_object(const json &value, const std::string &where)
{
  if (!value.is_object())
    schema_error(where + " must be an object");
  return value;
}

double number(const json &obj, const char *key, const std::string &where)
{
  const auto it = obj.find(key);
  if (it == obj.end())
    schema_error("missing '" + std::string(key) + "' in " + where);
  if (!it->is_number())
    schema_error("'" + std::string(key) + "' in " + where + " must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v))
    schema_error("'" + std::string(key) + "' in " + where + " must be finite");
  return v;
}

double number_or(const json &obj, const char *key, double fallback, const std::string &where)
{
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

long long integer(const json &obj, const char *key, const std::string &where)
{
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer())
    schema_error("'" + std::string(key) + "' in " + where + " must be an integer");
  return it->get<long long>();
}

SignalSpec parse_signal(const json &value, const std::string &where)
{
  require_object(value, where);
  reject_unknown_keys(value, {"kind", "value", "points"}, where);
  if (!value.contains("kind") || !value["kind"].is_string())
    schema_error("missing string 'kind' in " + where);
  const std::string kind = value["kind"].get<std::string>();
  SignalSpec spec;
  if (kind == "zero")
    spec.kind = SignalKind::zero;
  else if (kind == "hat")
    spec.kind = SignalKind::hat;
  else if (kind == "constant")
  {
    spec.kind = SignalKind::constant;
    spec.value = number(value, "value", where);
  }
  else if (kind == "table")
  {
    spec.kind = SignalKind::table;
    if (!value.contains("points") || !value["points"].is_array() || value["points"].empty())
      schema_error("table signal in " + where + " needs a non-empty 'points' array");
    for (const json &p : value["points"])
    {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        schema_error("table points in " + where + " must be [t, value] pairs");
      spec.points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    for (std::size_t i = 1; i < spec.points.size(); ++i)
      if (!(spec.points[i].first > spec.points[i - 1].first))
        schema_error("table times in " + where + " must increase strictly");
  }
  else
    schema_error("unknown signal kind '" + kind + "' in " + where);
  return spec;
}

json signal_to_json(const SignalSpec &spec)
{
  switch (spec.kind)
  {
  case SignalKind::zero:
    return {{"kind", "zero"}};
  case SignalKind::hat:
    return {{"kind", "hat"}};
  case SignalKind::constant:
    return {{"kind", "constant"}, {"value", spec.value}};
  case SignalKind::table:
  {
    json pts = json::array();
    for (const auto &[t, v] : spec.points)
      pts.push_back({t, v});
    return {{"kind", "table"}, {"points", pts}};
  }
  }
  return {};
}

}  // namespace

Network parse_network(const json &doc)
{
  require_object(doc, "network");
  reject_unknown_keys(doc, {"vertices", "edges"}, "network");
  if (!doc.contains("vertices") || !doc["vertices"].is_array())
    schema_error("network needs a 'vertices' array");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    schema_error("network needs an 'edges' array");
  std::vector<std::string> ids;
  for (const json &v : doc["vertices"])
  {
    if (!v.is_string())
      schema_error("vertex ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  std::vector<Edge> edges;
  std::size_t k = 0;
  for (const json &e : doc["edges"])
  {
    const std::string where = "edges[" + std::to_string(k++) + "]";
    require_object(e, where);
    reject_unknown_keys(e, {"from", "to", "length", "a", "b", "d"}, where);
    if (!e.contains("from") || !e["from"].is_string() || !e.contains("to") ||
        !e["to"].is_string())
      schema_error(where + " needs string 'from' and 'to'");
    const auto find = [&](const std::string &id) {
      const auto it = std::find(ids.begin(), ids.end(), id);
      if (it == ids.end())
        schema_error(where + " references unknown vertex '" + id + "'");
      return static_cast<std::size_t>(it - ids.begin());
    };
    Edge edge;
    edge.tail = find(e["from"].get<std::string>());
    edge.head = find(e["to"].get<std::string>());
    edge.length = number(e, "length", where);
    edge.a = number(e, "a", where);
    edge.b = number(e, "b", where);
    edge.d = number(e, "d", where);
    edges.push_back(edge);
  }
  try
  {
    return Network(std::move(ids), std::move(edges));
  }
  catch (const Error &err)
  {
    if (err.kind() == ErrorKind::Validation)
      schema_error(std::string("invalid network: ") + err.what());
    throw;
  }
}

ScenarioConfig parse_config(const json &doc)
{
  require_object(doc, "config");
  reject_unknown_keys(doc, {"network", "d0", "mesh", "reduction", "time", "initial", "inputs",
                            "outputs"},
                      "config");
  ScenarioConfig cfg;

  if (doc.contains("network"))
  {
    const json &net = doc["network"];
    if (net.is_string())
    {
      cfg.builtin = net.get<std::string>();
      if (cfg.builtin != "tp1" && cfg.builtin != "tp2" && cfg.builtin != "net7")
        schema_error("unknown builtin network '" + cfg.builtin + "'");
    }
    else
    {
      parse_network(net);
      cfg.builtin.clear();
      cfg.inline_network = net;
    }
  }
  cfg.d0 = number_or(doc, "d0", cfg.d0, "config");
  if (!(cfg.d0 > 0.0))
    schema_error("d0 must be positive");

  if (doc.contains("mesh"))
  {
    const long long cells = integer(doc, "mesh", "config");
    if (cells < 1)
      schema_error("mesh must be at least one cell per pipe");
    cfg.mesh_cells = static_cast<std::size_t>(cells);
  }

  if (doc.contains("reduction") && !doc["reduction"].is_null())
  {
    const json &r = require_object(doc["reduction"], "reduction");
    reject_unknown_keys(r, {"s0", "L", "mode", "tol"}, "reduction");
    ReductionSpec spec;
    spec.s0 = number_or(r, "s0", spec.s0, "reduction");
    if (r.contains("L"))
      spec.L = static_cast<int>(integer(r, "L", "reduction"));
    if (r.contains("mode"))
    {
      if (!r["mode"].is_string())
        schema_error("reduction.mode must be a string");
      const std::string mode = r["mode"].get<std::string>();
      if (mode != "improved" && mode != "standard")
        schema_error("reduction.mode must be 'improved' or 'standard'");
      spec.mode = basis_mode_from_string(mode);
    }
    spec.tol = number_or(r, "tol", spec.tol, "reduction");
    if (spec.L < 1)
      schema_error("reduction.L must be at least 1");
    if (!(spec.s0 >= 0.0))
      schema_error("reduction.s0 must be non-negative");
    if (!(spec.tol > 0.0))
      schema_error("reduction.tol must be positive");
    cfg.reduction = spec;
  }

  if (doc.contains("time"))
  {
    const json &t = require_object(doc["time"], "time");
    reject_unknown_keys(t, {"theta", "tau", "T"}, "time");
    cfg.time.tau = number_or(t, "tau", cfg.time.tau, "time");
    cfg.time.T = number_or(t, "T", cfg.time.T, "time");
    cfg.time.theta = number_or(t, "theta", 0.5 + cfg.time.tau, "time");
  }
  if (!(cfg.time.tau > 0.0))
    schema_error("time.tau must be positive");
  if (!(cfg.time.T >= cfg.time.tau))
    schema_error("time.T must be at least tau");
  if (!(cfg.time.theta >= 0.5 && cfg.time.theta <= 1.0))
    schema_error("time.theta must lie in [1/2, 1]");

  if (doc.contains("initial"))
  {
    const json &init = require_object(doc["initial"], "initial");
    reject_unknown_keys(init, {"p0", "q0"}, "initial");
    cfg.p0 = number_or(init, "p0", cfg.p0, "initial");
    cfg.q0 = number_or(init, "q0", cfg.q0, "initial");
  }

  if (doc.contains("inputs"))
  {
    const json &in = require_object(doc["inputs"], "inputs");
    for (const auto &item : in.items())
      cfg.inputs[item.key()] = parse_signal(item.value(), "inputs." + item.key());
  }

  if (doc.contains("outputs"))
  {
    if (!doc["outputs"].is_array())
      schema_error("outputs must be an array");
    cfg.outputs.clear();
    for (const json &o : doc["outputs"])
    {
      if (!o.is_string())
        schema_error("outputs entries must be strings");
      const std::string name = o.get<std::string>();
      if (name != "trace" && name != "tables" && name != "bases" && name != "report")
        schema_error("unknown output '" + name + "'");
      cfg.outputs.push_back(name);
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Io, kModule, "cannot read config '" + path + "'");
  json doc;
  try
  {
    doc = json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ScenarioConfig &config)
{
  json doc;
  if (config.inline_network)
    doc["network"] = *config.inline_network;
  else
    doc["network"] = config.builtin;
  doc["d0"] = config.d0;
  doc["mesh"] = config.mesh_cells;
  if (config.reduction)
  {
    const ReductionSpec &r = *config.reduction;
    doc["reduction"] = {{"s0", r.s0},
                        {"L", r.L},
                        {"mode", std::string(to_string(r.mode))},
                        {"tol", r.tol}};
  }
  else
    doc["reduction"] = nullptr;
  doc["time"] = {{"theta", config.time.theta}, {"tau", config.time.tau}, {"T", config.time.T}};
  doc["initial"] = {{"p0", config.p0}, {"q0", config.q0}};
  json inputs = json::object();
  for (const auto &[port, spec] : config.inputs)
    inputs[port] = signal_to_json(spec);
  doc["inputs"] = inputs;
  doc["outputs"] = config.outputs;
  return doc;
}

std::string config_hash(const ScenarioConfig &config)
{
  const std::string text = to_json(config).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text)
  {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Network build_network(const ScenarioConfig &config)
{
  if (config.inline_network)
    return parse_network(*config.inline_network);
  if (config.builtin == "tp1")
    return make_tp1(config.d0);
  if (config.builtin == "tp2")
    return make_tp2(config.d0);
  if (config.builtin == "net7")
    return make_net7(config.d0);
  schema_error("unknown builtin network '" + config.builtin + "'");
}

void validate_against_network(const ScenarioConfig &config, const Network &network)
{
  const auto &ids = network.vertex_ids();
  for (const auto &[port, spec] : config.inputs)
  {
    (void)spec;
    const auto it = std::find(ids.begin(), ids.end(), port);
    if (it == ids.end())
      schema_error("input references unknown vertex '" + port + "'");
    if (!network.is_boundary(static_cast<std::size_t>(it - ids.begin())))
      schema_error("input vertex '" + port + "' is not a port");
  }
}

double evaluate_signal(const SignalSpec &spec, double t)
{
  switch (spec.kind)
  {
  case SignalKind::zero:
    return 0.0;
  case SignalKind::constant:
    return spec.value;
  case SignalKind::hat:
    return hat_input(t);
  case SignalKind::table:
  {
    const auto &p = spec.points;
    if (t <= p.front().first)
      return p.front().second;
    if (t >= p.back().first)
      return p.back().second;
    const auto it = std::upper_bound(p.begin(), p.end(), t,
                                     [](double x, const auto &pt) { return x < pt.first; });
    const auto &[t1, v1] = *it;
    const auto &[t0, v0] = *(it - 1);
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
  }
  }
  return 0.0;
}

InputSignal make_input_signal(const ScenarioConfig &config, const Network &network)
{
  validate_against_network(config, network);
  const auto &boundary = network.boundary_vertices();
  std::vector<SignalSpec> per_port(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i)
  {
    const auto it = config.inputs.find(network.vertex_ids()[boundary[i]]);
    if (it != config.inputs.end())
      per_port[i] = it->second;
  }
  return [per_port](double t) {
    Vector u(static_cast<Eigen::Index>(per_port.size()));
    for (std::size_t i = 0; i < per_port.size(); ++i)
      u(static_cast<Eigen::Index>(i)) = evaluate_signal(per_port[i], t);
    return u;
  };
}

}  // namespace phmor::cli
