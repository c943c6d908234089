// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_CLI_IO_HPP
#define PHMOR_CLI_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "phmor/linalg.hpp"
#include "phmor/mor.hpp"
#include "phmor/timeint.hpp"

namespace phmor::cli
{

// 17 significant digits, so values round-trip exactly.
std::string format_double(double value);

// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::string &path, const std::string &content);

// Files are collected in memory and written together once a command succeeded.
class OutputBundle
{
public:
  void add(std::string name, std::string content);
  const std::vector<std::pair<std::string, std::string>> &files() const { return files_; }
  const std::string *find(const std::string &name) const;
  void commit(const std::string &directory) const;

private:
  std::vector<std::pair<std::string, std::string>> files_;
};

// "# config_hash=<hash>" line, a header row c0..c{n-1}, then one line per row.
std::string matrix_to_csv(const Matrix &M, const std::string &hash);
Matrix matrix_from_csv(const std::string &text);

// Columns: t, mass, energy, dissipation, y_<port>..., u_<port>...
std::string trace_to_csv(const SimulationTrace &trace, const std::vector<std::string> &ports,
                         const std::string &hash);

std::string read_file(const std::string &path);

// reduced_<block>.csv files plus reduced.json with the mode flags.
void add_reduced_system(OutputBundle &bundle, const ReducedSystem &red, const std::string &hash);
ReducedSystem load_reduced_system(const std::string &directory);

}  // namespace phmor::cli

#endif  // PHMOR_CLI_IO_HPP
