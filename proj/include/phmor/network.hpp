// SPDX-License-Identifier: Apache-2.0

#ifndef PHMOR_NETWORK_HPP
#define PHMOR_NETWORK_HPP

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace phmor
{

// A pipe from vertex `tail` to vertex `head` with constant coefficients:
// a (compressibility), b (inertia), d (friction).
struct Edge
{
  std::size_t tail = 0;
  std::size_t head = 0;
  double length = 1.0;
  double a = 1.0;
  double b = 1.0;
  double d = 1.0;
};

struct VertexPartition
{
  std::vector<std::size_t> interior;  // junctions, degree >= 2
  std::vector<std::size_t> boundary;  // ports, degree == 1
};

// Splits the vertices into junctions and ports by degree. Both lists keep the
// input vertex order. Throws ErrorKind::Validation for isolated vertices.
VertexPartition classify_vertices(std::size_t vertex_count, const std::vector<Edge> &edges);

// Directed, connected pipe graph. Immutable after construction.
class Network
{
public:
  Network(std::vector<std::string> vertex_ids, std::vector<Edge> edges);

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string> &vertex_ids() const { return ids_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const Edge &edge(std::size_t e) const { return edges_.at(e); }

  const std::vector<std::size_t> &interior_vertices() const { return partition_.interior; }
  const std::vector<std::size_t> &boundary_vertices() const { return partition_.boundary; }

  std::size_t degree(std::size_t v) const { return degree_.at(v); }
  bool is_boundary(std::size_t v) const;

  // Index of a vertex id; throws ErrorKind::Validation if unknown.
  std::size_t vertex_index(const std::string &id) const;

  // Position of a boundary vertex in boundary_vertices(), i.e. its port column.
  std::size_t port_index(std::size_t v) const;

  // Edges incident to v, in edge order.
  std::vector<std::size_t> incident_edges(std::size_t v) const;

  // n^e(v): -1 if v is the tail of e, +1 if v is the head.
  int incidence_sign(std::size_t e, std::size_t v) const;

private:
  std::vector<std::string> ids_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degree_;
  VertexPartition partition_;
};

// Single unit pipe, a = b = d = 1.
Network make_tp1(double d = 1.0);

// The TP1 pipe split at its midpoint: v1 -> v3 -> v2, two pipes of length
// 1/2, a = b = d = 1. Same physics as TP1 with one junction constraint.
Network make_tp2(double d = 1.0);

// Seven-pipe network with two ports (v1, v2) and four junctions.
Network make_net7(double d0 = 1.0);

// Catalog of the builtin scenarios keyed by name: "tp1", "tp2", "net7".
std::map<std::string, Network> builtin_scenarios(double d0 = 1.0);

}  // namespace phmor

#endif  // PHMOR_NETWORK_HPP
