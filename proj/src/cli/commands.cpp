// SPDX-License-Identifier: Apache-2.0

#include "phmor/cli/commands.hpp"

#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "phmor/descriptor.hpp"
#include "phmor/diagnostics.hpp"
#include "phmor/error.hpp"

namespace phmor::cli
{

using nlohmann::json;

namespace
{

constexpr const char *kVersion = "0.1.0";
constexpr double kSpdTol = 1e-12;
constexpr double kMomentTol = 1e-8;
const double kPencilShifts[] = {0.0, 0.1, 1.0, 10.0};

// Everything a command needs about the scenario, computed once.
struct Context
{
  ScenarioConfig config;
  std::string hash;
  std::shared_ptr<const Network> network;
  FemSystem fem;
  DescriptorSystem full;
  InputSignal input;
  Vector x0;
  std::vector<std::string> ports;

  explicit Context(const ScenarioConfig &cfg) : config(cfg), hash(config_hash(cfg))
  {
    network = std::make_shared<const Network>(build_network(config));
    input = make_input_signal(config, *network);
    fem = assemble(*network, Mesh::uniform(*network, config.mesh_cells));
    full = from_fem(fem);
    const auto [x1, x2] =
        project_initial(fem, constant_field(config.p0), constant_field(config.q0));
    x0 = full.state(x1, x2);
    for (std::size_t v : network->boundary_vertices())
      ports.push_back(network->vertex_ids()[v]);
  }

  ReductionOptions reduction_options() const
  {
    const ReductionSpec spec = config.reduction.value_or(ReductionSpec{});
    ReductionOptions opt;
    opt.s0 = spec.s0;
    opt.levels = spec.L;
    opt.tol = spec.tol;
    opt.mode = spec.mode;
    return opt;
  }
};

json number_or_null(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json a0_json(const A0Report &r)
{
  return {{"passed", r.passed()},
          {"symmetric", r.symmetric},
          {"m1_spd", r.m1_spd},
          {"m2_spd", r.m2_spd},
          {"d_spd", r.d_spd},
          {"stacked_injective", r.stacked_injective},
          {"min_eig_m1", r.min_eig_m1},
          {"min_eig_m2", r.min_eig_m2},
          {"min_eig_d", r.min_eig_d},
          {"stacked_sigma_min", r.stacked_sigma_min},
          {"stacked_sigma_max", r.stacked_sigma_max}};
}

json pencil_json(const DescriptorSystem &sys)
{
  json rows = json::array();
  for (double s : kPencilShifts)
  {
    const LuSolver lu(sys.pencil(s));
    rows.push_back({{"s", s}, {"rcond", lu.rcond()}, {"regular", !lu.singular()}});
  }
  return rows;
}

json decay_json(const SimulationTrace *trace, double t0, double t1)
{
  if (!trace)
    return nullptr;
  try
  {
    const DecayFit fit = fit_decay_rate(*trace, t0, t1);
    return {{"gamma", fit.gamma},
            {"r_squared", fit.r_squared},
            {"truncated", fit.truncated},
            {"samples", fit.samples}};
  }
  catch (const Error &)
  {
    return nullptr;
  }
}

SimulationTrace simulate_reduced(const Context &ctx, const Reduction &r, bool keep_states)
{
  const DescriptorSystem red = r.reduced.simulation_form();
  const auto [z1, z2] = project_initial_reduced(r.basis, ctx.fem, ctx.full.pressure(ctx.x0),
                                                ctx.full.flux(ctx.x0), false);
  return simulate(red, red.state(z1, z2), ctx.input, ctx.config.time,
                  SimulateOptions{keep_states});
}

json report_for(const Context &ctx, const Reduction *r, const SimulationTrace *full_trace,
                const SimulationTrace *reduced_trace)
{
  json rep;
  rep["a0"] = a0_json(check_A0(ctx.fem, kSpdTol));
  rep["pencil"] = {{"full", pencil_json(ctx.full)}};
  if (r)
  {
    const ReductionOptions opt = ctx.reduction_options();
    const CompatibilityReport c = check_compatibility(r->basis, ctx.fem, opt.tol);
    rep["compatibility"] = {{"mode", std::string(to_string(r->basis.mode))},
                            {"A1", c.a1},
                            {"A2", c.a2},
                            {"A3", c.a3},
                            {"a1_residual", c.a1_residual},
                            {"a2_residual", c.a2_residual},
                            {"a3_residual", c.a3_residual},
                            {"a3_sigma_min", c.a3_sigma_min},
                            {"constraint_coupling", c.constraint_coupling},
                            {"ode_elimination", r->reduced.multiplier_eliminated},
                            {"dim_v1", r->basis.V1.cols()},
                            {"dim_v2", r->basis.V2.cols()}};
    const DescriptorSystem red = r->reduced.simulation_form();
    rep["pencil"]["reduced"] = pencil_json(red);
    const MomentReport m = verify_moment_matching(ctx.full, red, opt.s0, opt.levels, kMomentTol);
    json errors = json::array();
    for (double e : m.errors)
      errors.push_back(number_or_null(e));
    rep["moments"] = {{"s0", opt.s0},
                      {"L", opt.levels},
                      {"tol", kMomentTol},
                      {"errors", errors},
                      {"passed", m.all_passed()},
                      {"structural_failure", m.structural_failure},
                      {"failure", m.failure}};
  }
  else
  {
    rep["compatibility"] = nullptr;
    rep["moments"] = nullptr;
  }

  const double T = ctx.config.time.T;
  if (full_trace || reduced_trace)
    rep["decay"] = {{"window", {0.25 * T, T}},
                    {"full", decay_json(full_trace, 0.25 * T, T)},
                    {"reduced", decay_json(reduced_trace, 0.25 * T, T)}};
  else
    rep["decay"] = nullptr;

  rep["versions"] = {{"phmor", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                           std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                     {"config_hash", ctx.hash}};
  return rep;
}

std::string outputs_csv(const Context &ctx, const SimulationTrace &full,
                        const SimulationTrace &reduced)
{
  std::ostringstream out;
  out << "# config_hash=" << ctx.hash << "\n";
  out << "t";
  for (const auto &p : ctx.ports)
    out << ",y_full_" << p;
  for (const auto &p : ctx.ports)
    out << ",y_reduced_" << p;
  out << "\n";
  for (std::size_t k = 0; k < full.size(); ++k)
  {
    out << format_double(full.times[k]);
    for (Eigen::Index i = 0; i < full.outputs[k].size(); ++i)
      out << ',' << format_double(full.outputs[k](i));
    for (Eigen::Index i = 0; i < reduced.outputs[k].size(); ++i)
      out << ',' << format_double(reduced.outputs[k](i));
    out << "\n";
  }
  return out.str();
}

void add_bases(OutputBundle &files, const Context &ctx, const Reduction &r)
{
  files.add("V1.csv", matrix_to_csv(r.basis.V1, ctx.hash));
  files.add("V2.csv", matrix_to_csv(r.basis.V2, ctx.hash));
  add_reduced_system(files, r.reduced, ctx.hash);
}

TableConfig table_config(const ScenarioConfig &config, bool mesh_given)
{
  TableConfig tc;
  if (mesh_given)
    tc.mesh_cells = config.mesh_cells;
  tc.d = config.d0;
  tc.tau = config.time.tau;
  tc.theta = config.time.theta;
  if (config.reduction)
    tc.tol = config.reduction->tol;
  return tc;
}

std::string mass_table_csv(const MassTable &t, const std::string &hash)
{
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  out << "strategy,quantity,exact";
  for (const char *mode : {"standard", "improved"})
    for (int L : t.levels)
      out << ',' << mode << "_L" << L;
  out << "\n";
  const auto row = [&](const char *strategy, bool mass, const std::vector<MassEnergy> &std_,
                       const std::vector<MassEnergy> &imp) {
    out << strategy << ',' << (mass ? "m_h" : "E_h") << ','
        << format_double(mass ? t.exact.mass : t.exact.energy);
    for (const auto *col : {&std_, &imp})
      for (const MassEnergy &me : *col)
        out << ',' << format_double(mass ? me.mass : me.energy);
    out << "\n";
  };
  row("projection", true, t.standard_projection, t.improved_projection);
  row("projection", false, t.standard_projection, t.improved_projection);
  row("mass_constraint", true, t.standard_constraint, t.improved_constraint);
  row("mass_constraint", false, t.standard_constraint, t.improved_constraint);
  return out.str();
}

std::string energy_table_csv(const EnergyTable &t, const std::string &hash)
{
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  out << "t,exact";
  for (const char *mode : {"standard", "improved"})
    for (int L : t.levels)
      out << ',' << mode << "_L" << L;
  out << "\n";
  for (std::size_t i = 0; i < t.times.size(); ++i)
  {
    out << format_double(t.times[i]) << ',' << format_double(t.exact[i]);
    for (const auto *col : {&t.standard, &t.improved})
      for (const auto &series : *col)
        out << ',' << format_double(series[i]);
    out << "\n";
  }
  return out.str();
}

json file_list(const OutputBundle &files)
{
  json names = json::array();
  for (const auto &[name, content] : files.files())
    names.push_back(name);
  return names;
}

}  // namespace

void apply_overrides(ScenarioConfig &config, const Overrides &o)
{
  if (o.mesh_cells)
  {
    if (*o.mesh_cells < 1)
      throw Error(ErrorKind::Schema, "cli", "--mesh-cells must be positive");
    config.mesh_cells = *o.mesh_cells;
  }
  if (o.d0)
  {
    if (!(*o.d0 > 0.0))
      throw Error(ErrorKind::Schema, "cli", "--d0 must be positive");
    config.d0 = *o.d0;
  }
  if (o.s0 || o.L || o.mode || o.tol)
  {
    ReductionSpec spec = config.reduction.value_or(ReductionSpec{});
    if (o.s0)
      spec.s0 = *o.s0;
    if (o.L)
      spec.L = *o.L;
    if (o.mode)
      spec.mode = basis_mode_from_string(*o.mode);
    if (o.tol)
      spec.tol = *o.tol;
    if (spec.L < 1 || !(spec.s0 >= 0.0) || !(spec.tol > 0.0))
      throw Error(ErrorKind::Schema, "cli", "reduction settings out of range");
    config.reduction = spec;
  }
  if (o.tau)
  {
    config.time.tau = *o.tau;
    if (!o.theta)
      config.time.theta = 0.5 + *o.tau;
  }
  if (o.theta)
    config.time.theta = *o.theta;
  if (o.T)
    config.time.T = *o.T;
  if (!(config.time.tau > 0.0) || !(config.time.T >= config.time.tau) ||
      !(config.time.theta >= 0.5 && config.time.theta <= 1.0))
    throw Error(ErrorKind::Schema, "cli", "time settings out of range");
}

ScenarioConfig resolve_scenario(const std::string &scenario, const Overrides &overrides)
{
  ScenarioConfig config;
  if (scenario == "tp1" || scenario == "tp2" || scenario == "net7")
  {
    config.builtin = scenario;
    // Default experiment: hat input at the first port.
    const Network net = build_network(config);
    config.inputs[net.vertex_ids()[net.boundary_vertices().front()]] =
        SignalSpec{SignalKind::hat, 0.0, {}};
  }
  else
  {
    if (!std::filesystem::exists(scenario))
      throw Error(ErrorKind::Schema, "cli",
                  "'" + scenario + "' is neither a builtin scenario nor a readable file");
    config = load_config(scenario);
  }
  apply_overrides(config, overrides);
  return config;
}

CommandOutput command_simulate(const ScenarioConfig &config)
{
  const Context ctx(config);
  const SimulationTrace tr = simulate(ctx.full, ctx.x0, ctx.input, config.time,
                                      SimulateOptions{false});
  CommandOutput out;
  out.files.add("trace.csv", trace_to_csv(tr, ctx.ports, ctx.hash));
  out.summary = {{"command", "simulate"}, {"steps", tr.size() - 1}};
  return out;
}

CommandOutput command_reduce(const ScenarioConfig &config)
{
  const Context ctx(config);
  const Reduction r = reduce(ctx.fem, ctx.reduction_options());
  CommandOutput out;
  add_bases(out.files, ctx, r);
  out.summary = {{"command", "reduce"},
                 {"mode", std::string(to_string(r.basis.mode))},
                 {"dim_v1", r.basis.V1.cols()},
                 {"dim_v2", r.basis.V2.cols()},
                 {"multiplier_eliminated", r.reduced.multiplier_eliminated}};
  return out;
}

CommandOutput command_compare(const ScenarioConfig &config)
{
  const Context ctx(config);
  const Reduction r = reduce(ctx.fem, ctx.reduction_options());
  const SimulationTrace ft = simulate(ctx.full, ctx.x0, ctx.input, config.time,
                                      SimulateOptions{false});
  const SimulationTrace rt = simulate_reduced(ctx, r, false);
  CommandOutput out;
  out.files.add("outputs.csv", outputs_csv(ctx, ft, rt));
  out.files.add("trace_full.csv", trace_to_csv(ft, ctx.ports, ctx.hash));
  out.files.add("trace_reduced.csv", trace_to_csv(rt, ctx.ports, ctx.hash));
  const json rep = report_for(ctx, &r, &ft, &rt);
  out.files.add("report.json", rep.dump(2) + "\n");

  json errors = json::array();
  for (std::size_t i = 0; i < ctx.ports.size(); ++i)
  {
    std::vector<double> yf, yr;
    for (std::size_t k = 0; k < ft.size(); ++k)
    {
      yf.push_back(ft.outputs[k](static_cast<Eigen::Index>(i)));
      yr.push_back(rt.outputs[k](static_cast<Eigen::Index>(i)));
    }
    errors.push_back({{"port", ctx.ports[i]}, {"relative_l2", relative_l2_error(yr, yf)}});
  }
  out.summary = {{"command", "compare"},
                 {"dim_v1", r.basis.V1.cols()},
                 {"dim_v2", r.basis.V2.cols()},
                 {"output_errors", errors}};
  return out;
}

CommandOutput command_check(const ScenarioConfig &config)
{
  const Context ctx(config);
  const Reduction r = reduce(ctx.fem, ctx.reduction_options());
  const json rep = report_for(ctx, &r, nullptr, nullptr);
  CommandOutput out;
  out.files.add("report.json", rep.dump(2) + "\n");
  out.summary = rep;
  return out;
}

CommandOutput command_table_mass(const ScenarioConfig &config, bool mesh_given)
{
  const std::string hash = config_hash(config);
  const MassTable t = reproduce_table_mass(table_config(config, mesh_given));
  CommandOutput out;
  out.files.add("table_mass.csv", mass_table_csv(t, hash));
  out.summary = {{"command", "table-mass"}};
  return out;
}

CommandOutput command_table_energy(const ScenarioConfig &config, bool mesh_given)
{
  const std::string hash = config_hash(config);
  const EnergyTable t = reproduce_table_energy(table_config(config, mesh_given));
  CommandOutput out;
  out.files.add("table_energy.csv", energy_table_csv(t, hash));
  out.summary = {{"command", "table-energy"}};
  return out;
}

CommandOutput command_run(const ScenarioConfig &config)
{
  const Context ctx(config);
  const auto wants = [&](const char *name) {
    return std::find(config.outputs.begin(), config.outputs.end(), name) !=
           config.outputs.end();
  };
  std::optional<Reduction> r;
  if (config.reduction)
    r = reduce(ctx.fem, ctx.reduction_options());

  const SimulationTrace ft = simulate(ctx.full, ctx.x0, ctx.input, config.time,
                                      SimulateOptions{false});
  std::optional<SimulationTrace> rt;
  if (r)
    rt = simulate_reduced(ctx, *r, false);

  CommandOutput out;
  if (wants("trace"))
  {
    out.files.add("trace.csv", trace_to_csv(ft, ctx.ports, ctx.hash));
    if (rt)
      out.files.add("trace_reduced.csv", trace_to_csv(*rt, ctx.ports, ctx.hash));
  }
  if (wants("bases") && r)
    add_bases(out.files, ctx, *r);
  if (wants("tables"))
  {
    TableConfig tc = table_config(config, true);
    out.files.add("table_mass.csv", mass_table_csv(reproduce_table_mass(tc), ctx.hash));
    out.files.add("table_energy.csv", energy_table_csv(reproduce_table_energy(tc), ctx.hash));
  }
  if (wants("report"))
  {
    const json rep = report_for(ctx, r ? &*r : nullptr, &ft, rt ? &*rt : nullptr);
    out.files.add("report.json", rep.dump(2) + "\n");
  }
  out.summary = {{"command", "run"}};
  return out;
}

json build_report(const ScenarioConfig &config, const SimulationTrace *full_trace,
                  const SimulationTrace *reduced_trace)
{
  const Context ctx(config);
  if (!config.reduction)
    return report_for(ctx, nullptr, full_trace, reduced_trace);
  const Reduction r = reduce(ctx.fem, ctx.reduction_options());
  return report_for(ctx, &r, full_trace, reduced_trace);
}

int exit_code_for(ErrorKind kind)
{
  switch (kind)
  {
  case ErrorKind::Schema:
  case ErrorKind::Validation:
    return kExitSchema;
  case ErrorKind::Io:
    return kExitIo;
  default:
    return kExitNumerical;
  }
}

json error_to_json(const Error &error)
{
  return {{"error",
           {{"kind", std::string(to_string(error.kind()))},
            {"module", error.module()},
            {"message", error.what()},
            {"value", number_or_null(error.value())}}}};
}

int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Structure-preserving reduction of gas pipeline network models", "phmor"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string scenario = "tp1";
  std::string out_dir = "out";
  std::string config_path;

  const auto add_common = [&](CLI::App *sub) {
    sub->add_option("--scenario", scenario, "Builtin scenario (tp1, tp2, net7) or config path");
    sub->add_option("--mesh-cells", overrides.mesh_cells, "Cells per pipe");
    sub->add_option("--s0", overrides.s0, "Krylov shift");
    sub->add_option("--L", overrides.L, "Krylov levels");
    sub->add_option("--mode", overrides.mode, "Basis construction")
        ->check(CLI::IsMember({"improved", "standard"}));
    sub->add_option("--theta", overrides.theta, "Theta of the time scheme");
    sub->add_option("--tau", overrides.tau, "Time step");
    sub->add_option("--T", overrides.T, "Final time");
    sub->add_option("--d0", overrides.d0, "Damping factor of builtin scenarios");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--tol", overrides.tol, "Drop tolerance");
  };

  std::vector<std::pair<std::string, CLI::App *>> subs;
  const std::pair<const char *, const char *> commands[] = {
      {"simulate", "Simulate the full model and write trace.csv"},
      {"reduce", "Build the reduced model and write its bases and matrices"},
      {"compare", "Simulate full and reduced models side by side"},
      {"table-mass", "Mass and energy of projected initial data on the single pipe"},
      {"table-energy", "Energy decay of full and reduced single-pipe models"},
      {"check", "Print structural diagnostics as JSON"},
  };
  for (const auto &[name, description] : commands)
  {
    CLI::App *sub = app.add_subcommand(name, description);
    add_common(sub);
    subs.emplace_back(name, sub);
  }
  CLI::App *run = app.add_subcommand("run", "Run the pipeline described by a config file");
  add_common(run);
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  subs.emplace_back("run", run);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e, out, err);
  }
  catch (const CLI::ParseError &e)
  {
    if (e.get_exit_code() == 0)
      return app.exit(e, out, err);
    err << json{{"error", {{"kind", "schema"}, {"module", "cli"}, {"message", e.what()}}}}.dump()
        << "\n";
    return kExitSchema;
  }

  try
  {
    std::string command;
    for (const auto &[name, sub] : subs)
      if (sub->parsed())
        command = name;

    const ScenarioConfig config =
        resolve_scenario(command == "run" ? config_path : scenario, overrides);
    CommandOutput result;
    if (command == "simulate")
      result = command_simulate(config);
    else if (command == "reduce")
      result = command_reduce(config);
    else if (command == "compare")
      result = command_compare(config);
    else if (command == "check")
      result = command_check(config);
    else if (command == "table-mass")
      result = command_table_mass(config, overrides.mesh_cells.has_value());
    else if (command == "table-energy")
      result = command_table_energy(config, overrides.mesh_cells.has_value());
    else
      result = command_run(config);

    result.files.commit(out_dir);
    if (command != "check")
    {
      result.summary["out"] = out_dir;
      result.summary["files"] = file_list(result.files);
      result.summary["config_hash"] = config_hash(config);
    }
    out << result.summary.dump(2) << "\n";
    return kExitOk;
  }
  catch (const Error &e)
  {
    err << error_to_json(e).dump() << "\n";
    return exit_code_for(e.kind());
  }
  catch (const std::exception &e)
  {
    err << json{{"error", {{"kind", "internal"}, {"module", "cli"}, {"message", e.what()}}}}
               .dump()
        << "\n";
    return kExitNumerical;
  }
}

}  // namespace phmor::cli
