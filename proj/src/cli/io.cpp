// SPDX-License-Identifier: Apache-2.0

#include "phmor/cli/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "phmor/error.hpp"

namespace phmor::cli
{

namespace fs = std::filesystem;

namespace
{

constexpr const char *kModule = "cli";

const char *const kReducedBlocks[] = {"M1", "M2", "D", "G", "N", "B2", "o1_hat"};

}  // namespace

std::string format_double(double value)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_atomic(const std::string &path, const std::string &content)
{
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorKind::Io, kModule, "cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out)
      throw Error(ErrorKind::Io, kModule, "write to '" + tmp + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
  {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, kModule, "cannot move output into '" + path + "'");
  }
}

void OutputBundle::add(std::string name, std::string content)
{
  files_.emplace_back(std::move(name), std::move(content));
}

const std::string *OutputBundle::find(const std::string &name) const
{
  for (const auto &[n, c] : files_)
    if (n == name)
      return &c;
  return nullptr;
}

void OutputBundle::commit(const std::string &directory) const
{
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec)
    throw Error(ErrorKind::Io, kModule, "cannot create output directory '" + directory + "'");
  for (const auto &[name, content] : files_)
    write_atomic((fs::path(directory) / name).string(), content);
}

std::string matrix_to_csv(const Matrix &M, const std::string &hash)
{
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    out << (j ? "," : "") << "c" << j;
  out << "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i)
  {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      out << (j ? "," : "") << format_double(M(i, j));
    out << "\n";
  }
  return out.str();
}

Matrix matrix_from_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  Eigen::Index cols = -1;
  while (std::getline(in, line))
  {
    if (!line.empty() && line[0] == '#')
      continue;
    if (cols < 0)
    {
      // Header row names the columns.
      cols = line.empty() ? 0 : 1 + static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
      continue;
    }
    if (line.empty())
      continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ','))
    {
      try
      {
        row.push_back(std::stod(cell));
      }
      catch (const std::exception &)
      {
        throw Error(ErrorKind::Schema, kModule, "malformed matrix entry '" + cell + "'");
      }
    }
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::Schema, kModule, "matrix row has the wrong number of entries");
    rows.push_back(std::move(row));
  }
  if (cols < 0)
    throw Error(ErrorKind::Schema, kModule, "matrix file has no header");
  Matrix M(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      M(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
  return M;
}

std::string trace_to_csv(const SimulationTrace &trace, const std::vector<std::string> &ports,
                         const std::string &hash)
{
  std::ostringstream out;
  out << "# config_hash=" << hash << "\n";
  out << "t,mass,energy,dissipation";
  for (const auto &p : ports)
    out << ",y_" << p;
  for (const auto &p : ports)
    out << ",u_" << p;
  out << "\n";
  for (std::size_t k = 0; k < trace.size(); ++k)
  {
    out << format_double(trace.times[k]) << ',' << format_double(trace.mass[k]) << ','
        << format_double(trace.energy[k]) << ',' << format_double(trace.dissipation[k]);
    for (Eigen::Index i = 0; i < trace.outputs[k].size(); ++i)
      out << ',' << format_double(trace.outputs[k](i));
    for (Eigen::Index i = 0; i < trace.inputs[k].size(); ++i)
      out << ',' << format_double(trace.inputs[k](i));
    out << "\n";
  }
  return out.str();
}

std::string read_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, kModule, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void add_reduced_system(OutputBundle &bundle, const ReducedSystem &red, const std::string &hash)
{
  const Matrix *blocks[] = {&red.M1, &red.M2, &red.D, &red.G, &red.N, &red.B2};
  for (std::size_t i = 0; i < 6; ++i)
    bundle.add(std::string("reduced_") + kReducedBlocks[i] + ".csv",
               matrix_to_csv(*blocks[i], hash));
  bundle.add("reduced_o1_hat.csv", matrix_to_csv(Matrix(red.o1_hat), hash));
  nlohmann::json meta = {{"mode", std::string(to_string(red.mode))},
                         {"multiplier_eliminated", red.multiplier_eliminated},
                         {"config_hash", hash}};
  bundle.add("reduced.json", meta.dump(2) + "\n");
}

ReducedSystem load_reduced_system(const std::string &directory)
{
  const auto load = [&](const char *name) {
    return matrix_from_csv(
        read_file((fs::path(directory) / (std::string("reduced_") + name + ".csv")).string()));
  };
  ReducedSystem red;
  red.M1 = load("M1");
  red.M2 = load("M2");
  red.D = load("D");
  red.G = load("G");
  red.N = load("N");
  red.B2 = load("B2");
  const Matrix o = load("o1_hat");
  red.o1_hat = o.cols() ? Vector(o.col(0)) : Vector(0);
  nlohmann::json meta;
  try
  {
    meta = nlohmann::json::parse(read_file((fs::path(directory) / "reduced.json").string()));
    red.mode = basis_mode_from_string(meta.at("mode").get<std::string>());
    red.multiplier_eliminated = meta.at("multiplier_eliminated").get<bool>();
  }
  catch (const nlohmann::json::exception &e)
  {
    throw Error(ErrorKind::Schema, kModule, std::string("malformed reduced.json: ") + e.what());
  }
  return red;
}

}  // namespace phmor::cli
