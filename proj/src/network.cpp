// SPDX-License-Identifier: Apache-2.0

#include "phmor/network.hpp"

#include <algorithm>
#include <numeric>

#include "phmor/error.hpp"

namespace phmor
{

namespace
{

void validate_edges(std::size_t vertex_count, const std::vector<Edge> &edges)
{
  for (std::size_t e = 0; e < edges.size(); ++e)
  {
    const Edge &edge = edges[e];
    const std::string tag = "edge " + std::to_string(e);
    if (edge.tail >= vertex_count || edge.head >= vertex_count)
    {
      throw Error(ErrorKind::Validation, "network", tag + ": endpoint out of range");
    }
    if (edge.tail == edge.head)
    {
      throw Error(ErrorKind::Validation, "network", tag + ": self-loop");
    }
    if (!(edge.length > 0.0) || !(edge.a > 0.0) || !(edge.b > 0.0) || !(edge.d > 0.0))
    {
      throw Error(ErrorKind::Validation, "network",
                  tag + ": length, a, b, d must be positive");
    }
  }
}

bool is_connected(std::size_t vertex_count, const std::vector<Edge> &edges)
{
  // Union-find over the undirected graph.
  std::vector<std::size_t> parent(vertex_count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v)
  {
    while (parent[v] != v)
    {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const Edge &edge : edges)
  {
    parent[find(edge.tail)] = find(edge.head);
  }
  const std::size_t root = find(0);
  for (std::size_t v = 1; v < vertex_count; ++v)
  {
    if (find(v) != root)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

VertexPartition classify_vertices(std::size_t vertex_count, const std::vector<Edge> &edges)
{
  std::vector<std::size_t> degree(vertex_count, 0);
  for (const Edge &edge : edges)
  {
    if (edge.tail >= vertex_count || edge.head >= vertex_count)
    {
      throw Error(ErrorKind::Validation, "network", "edge endpoint out of range");
    }
    ++degree[edge.tail];
    ++degree[edge.head];
  }
  VertexPartition partition;
  for (std::size_t v = 0; v < vertex_count; ++v)
  {
    if (degree[v] == 0)
    {
      throw Error(ErrorKind::Validation, "network",
                  "vertex " + std::to_string(v) + " is isolated");
    }
    (degree[v] == 1 ? partition.boundary : partition.interior).push_back(v);
  }
  return partition;
}

Network::Network(std::vector<std::string> vertex_ids, std::vector<Edge> edges)
  : ids_(std::move(vertex_ids)), edges_(std::move(edges))
{
  if (ids_.empty() || edges_.empty())
  {
    throw Error(ErrorKind::Validation, "network", "network needs vertices and edges");
  }
  {
    auto sorted = ids_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    {
      throw Error(ErrorKind::Validation, "network", "duplicate vertex id");
    }
  }
  validate_edges(ids_.size(), edges_);
  partition_ = classify_vertices(ids_.size(), edges_);
  if (!is_connected(ids_.size(), edges_))
  {
    throw Error(ErrorKind::Validation, "network", "graph is not connected");
  }
  degree_.assign(ids_.size(), 0);
  for (const Edge &edge : edges_)
  {
    ++degree_[edge.tail];
    ++degree_[edge.head];
  }
}

bool Network::is_boundary(std::size_t v) const
{
  return degree_.at(v) == 1;
}

std::size_t Network::vertex_index(const std::string &id) const
{
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end())
  {
    throw Error(ErrorKind::Validation, "network", "unknown vertex '" + id + "'");
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t Network::port_index(std::size_t v) const
{
  const auto &ports = partition_.boundary;
  auto it = std::find(ports.begin(), ports.end(), v);
  if (it == ports.end())
  {
    throw Error(ErrorKind::Precondition, "network",
                "vertex " + std::to_string(v) + " is not a port");
  }
  return static_cast<std::size_t>(it - ports.begin());
}

std::vector<std::size_t> Network::incident_edges(std::size_t v) const
{
  std::vector<std::size_t> result;
  for (std::size_t e = 0; e < edges_.size(); ++e)
  {
    if (edges_[e].tail == v || edges_[e].head == v)
    {
      result.push_back(e);
    }
  }
  return result;
}

int Network::incidence_sign(std::size_t e, std::size_t v) const
{
  if (e >= edges_.size())
  {
    throw Error(ErrorKind::Precondition, "network", "edge index out of range");
  }
  if (edges_[e].tail == v)
  {
    return -1;
  }
  if (edges_[e].head == v)
  {
    return 1;
  }
  throw Error(ErrorKind::Precondition, "network",
              "vertex " + std::to_string(v) + " is not an endpoint of edge " +
                std::to_string(e));
}

Network make_tp1(double d)
{
  return Network({"v1", "v2"}, {Edge{0, 1, 1.0, 1.0, 1.0, d}});
}

Network make_tp2(double d)
{
  return Network({"v1", "v2", "v3"},
                 {Edge{0, 2, 0.5, 1.0, 1.0, d}, Edge{2, 1, 0.5, 1.0, 1.0, d}});
}

Network make_net7(double d0)
{
  // Vertex indices: v1=0, v2=1, v3=2, v4=3, v5=4, v6=5.
  constexpr double a[] = {4, 4, 1, 1, 1, 4, 4};
  constexpr double b[] = {0.25, 0.25, 1, 1, 1, 0.25, 0.25};
  constexpr double d[] = {0.125, 0.125, 1, 1, 1, 0.125, 0.125};
  constexpr std::size_t ends[][2] = {{0, 2}, {2, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}, {5, 1}};
  std::vector<Edge> edges;
  for (std::size_t e = 0; e < 7; ++e)
  {
    edges.push_back(Edge{ends[e][0], ends[e][1], 1.0, a[e], b[e], d0 * d[e]});
  }
  return Network({"v1", "v2", "v3", "v4", "v5", "v6"}, std::move(edges));
}

std::map<std::string, Network> builtin_scenarios(double d0)
{
  std::map<std::string, Network> catalog;
  catalog.emplace("tp1", make_tp1());
  catalog.emplace("tp2", make_tp2());
  catalog.emplace("net7", make_net7(d0));
  return catalog;
}

}  // namespace phmor
