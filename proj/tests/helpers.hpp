#pragma once

#include <sdprelax/graph.hpp>
#include <sdprelax/io.hpp>
#include <sdprelax/linalg.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace testing {

using namespace sdprelax;

inline std::string fixture(const std::string& name) { return std::string(SDPRELAX_FIXTURE_DIR) + "/" + name; }

inline Graph load_graph(const std::string& name) { return parse_edgelist(read_text_file(fixture(name))); }

inline Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
  return Graph(n, e);
}

inline Graph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
  return Graph(n, e);
}

inline Graph star(int leaves) {
  std::vector<Edge> e;
  for (int i = 1; i <= leaves; ++i) e.push_back({0, i, 1.0});
  return Graph(leaves + 1, e);
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.push_back({i, (i + 1) % 5, 1.0});
    e.push_back({i, i + 5, 1.0});
    e.push_back({5 + i, 5 + (i + 2) % 5, 1.0});
  }
  return Graph(10, e);
}

inline Graph k2() { return Graph(2, {{0, 1, 1.0}}); }

inline Graph empty_graph(int n) { return Graph(n, {}); }

/// Lowest adjacency eigenvalue of C_n in closed form.
inline double cycle_min_eigenvalue(int n) {
  const double pi = std::acos(-1.0);
  double lo = 2.0;
  for (int k = 0; k < n; ++k) lo = std::min(lo, 2.0 * std::cos(2.0 * pi * k / n));
  return lo;
}

/// Random PSD matrix with unit diagonal: normalized Gram matrix of random
/// vectors in R^r.
inline SymMatrix random_correlation(int n, int r, Rng& rng) {
  Matrix v(r, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < r; ++i) v(i, j) = rng.normal();
    v.col(j).normalize();
  }
  return SymMatrix(Matrix(v.transpose() * v));
}

inline SymMatrix random_symmetric(int n, Rng& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return SymMatrix(Matrix((a + a.transpose()) / 2));
}

}  // namespace testing
