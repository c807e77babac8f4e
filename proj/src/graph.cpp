#include <sdprelax/graph.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace sdprelax {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw InvalidGraph("graph must have at least one vertex");
  for (auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw InvalidGraph("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") out of range for n=" + std::to_string(n));
    }
    if (e.u == e.v) throw InvalidGraph("self-loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.w) || e.w < 0.0) {
      throw InvalidGraph("edge weight must be finite and non-negative");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::vector<std::pair<int, int>> keys;
  keys.reserve(edges_.size());
  for (const auto& e : edges_) keys.emplace_back(e.u, e.v);
  std::sort(keys.begin(), keys.end());
  auto dup = std::adjacent_find(keys.begin(), keys.end());
  if (dup != keys.end()) {
    throw InvalidGraph("duplicate edge (" + std::to_string(dup->first) + "," +
                       std::to_string(dup->second) + ")");
  }
  for (const auto& e : edges_) m_total_ += e.w;
}

bool Graph::unit_weights() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.w == 1.0; });
}

SymMatrix Graph::adjacency() const {
  Matrix w = Matrix::Zero(n_, n_);
  for (const auto& e : edges_) {
    w(e.u, e.v) = e.w;
    w(e.v, e.u) = e.w;
  }
  return SymMatrix(std::move(w));
}

std::vector<double> Graph::weighted_degrees() const {
  std::vector<double> d(n_, 0.0);
  for (const auto& e : edges_) {
    d[e.u] += e.w;
    d[e.v] += e.w;
  }
  return d;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(n_, 0);
  for (const auto& e : edges_) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

bool Graph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::any_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return e.u == u && e.v == v; });
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  for (const auto& e : b.edges()) edges.push_back({e.u + a.n(), e.v + a.n(), e.w});
  return Graph(a.n() + b.n(), std::move(edges));
}

std::string to_edgelist(const Graph& g) {
  std::ostringstream out;
  out << std::setprecision(17);
  const bool unit = g.unit_weights();
  out << "# n=" << g.n() << '\n';
  for (const auto& e : g.edges()) {
    out << e.u + 1 << ' ' << e.v + 1;
    if (!unit) out << ' ' << e.w;
    out << '\n';
  }
  return out.str();
}

}  // namespace sdprelax
