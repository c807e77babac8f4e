#pragma once

#include <sdprelax/linalg.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace sdprelax {

class InvalidGraph : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected weighted edge, stored with u < v (0-based vertices).
struct Edge {
  int u;
  int v;
  double w = 1.0;
};

/// Simple weighted undirected graph.
class Graph {
 public:
  /// Endpoints are reordered so that u < v. Self-loops, duplicate edges,
  /// out-of-range endpoints and negative or non-finite weights throw
  /// InvalidGraph.
  Graph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  /// Total edge weight; the edge count for unit weights.
  double m_total() const { return m_total_; }
  bool unit_weights() const;

  SymMatrix adjacency() const;
  std::vector<double> weighted_degrees() const;
  std::vector<int> degrees() const;
  bool has_edge(int u, int v) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  double m_total_ = 0.0;
};

/// Vertex-disjoint union; vertices of `b` are shifted by a.n().
Graph disjoint_union(const Graph& a, const Graph& b);

/// Edge list in the canonical text form: a "# n=<count>" line, then
/// "u v [w]" lines (1-based; weights only when some weight is not 1).
std::string to_edgelist(const Graph& g);

}  // namespace sdprelax
