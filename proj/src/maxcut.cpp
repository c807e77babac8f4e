#include <sdprelax/io.hpp>
#include <sdprelax/maxcut.hpp>
#include <sdprelax/rng.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sdprelax {

namespace {

void check_side(const Graph& g, const std::vector<int>& side) {
  if (static_cast<int>(side.size()) != g.n()) {
    throw std::invalid_argument("side vector has length " + std::to_string(side.size()) + ", graph has " +
                                std::to_string(g.n()) + " vertices");
  }
  for (int s : side) {
    if (s != 1 && s != -1) throw std::invalid_argument("side entries must be +1 or -1");
  }
}

std::vector<std::vector<std::pair<int, double>>> neighbours(const Graph& g) {
  std::vector<std::vector<std::pair<int, double>>> nb(g.n());
  for (const auto& e : g.edges()) {
    nb[e.u].emplace_back(e.v, e.w);
    nb[e.v].emplace_back(e.u, e.w);
  }
  return nb;
}

CutResult make_result(const Graph& g, std::vector<int> side, std::string method) {
  CutResult r{std::move(side), 0.0, std::move(method)};
  r.value = cut_value(g, r.side);
  return r;
}

}  // namespace

double cut_value(const Graph& g, const std::vector<int>& side) {
  check_side(g, side);
  double s = 0.0;
  for (const auto& e : g.edges()) {
    if (side[e.u] != side[e.v]) s += e.w;
  }
  return s;
}

double cut_bound_from_raw(const Graph& g, double raw) { return 0.5 * g.m_total() + 0.25 * raw; }

SdpInstance gw_instance(const Graph& g) {
  const int n = g.n();
  SdpInstance inst(-1.0 * g.adjacency(), Sense::Maximize);
  inst.name = "maxcut";
  for (int i = 0; i < n; ++i) {
    inst.constraints.push_back({"diag:" + std::to_string(i + 1), {{i, i, 1.0}}, RowSense::Equal, 1.0});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) inst.entry_bounds.push_back({i, j, -1.0, 1.0, {}});
  }
  return inst;
}

RelaxationModel build_SP(const Graph& g, const CutSet& S) { return build_LS(gw_instance(g), S); }

RelaxationModel build_SD(const Graph& g, const CutSet& S) {
  if (S.empty()) throw std::invalid_argument("build_SD needs a non-empty cut set");
  if (S.dim() != g.n()) throw std::invalid_argument("cut set dimension does not match the graph");
  const SymMatrix w = g.adjacency();
  RelaxationModel model(0, Sense::Maximize);
  for (std::size_t k = 0; k < S.size(); ++k) {
    model.add_aux("eta:" + std::to_string(k + 1), 0.0, kInf, -w.quad(S.vector(k)));
  }
  for (int i = 0; i < g.n(); ++i) {
    LinearRow row{"diag:" + std::to_string(i + 1), {}, -kInf, 1.0};
    for (std::size_t k = 0; k < S.size(); ++k) {
      const double c = S.vector(k)(i) * S.vector(k)(i);
      if (c != 0.0) row.terms.push_back({static_cast<int>(k), c});
    }
    model.add_row(std::move(row));
  }
  return model;
}

SymMatrix assemble_sd(const CutSet& S, const Vector& eta) {
  if (eta.size() != static_cast<Eigen::Index>(S.size())) throw std::invalid_argument("eta length mismatch");
  Matrix y = Matrix::Zero(S.dim(), S.dim());
  for (std::size_t k = 0; k < S.size(); ++k) {
    const double e = std::max(0.0, eta(static_cast<Eigen::Index>(k)));
    if (e > 0.0) y.noalias() += e * S.vector(k) * S.vector(k).transpose();
  }
  return SymMatrix(std::move(y));
}

double eigenvalue_bound(const Graph& g) {
  const EigenDecomposition eig = eig_decompose(g.adjacency());
  return 0.5 * g.m_total() - 0.25 * g.n() * eig.min_value();
}

SymMatrix rounding_matrix(const Graph& g, const SolveReport& sp_report, const SolverOptions& opts) {
  return rounding_matrix(g, sp_report, CutSet(g.n()), opts);
}

SymMatrix rounding_matrix(const Graph& g, const SolveReport& sp_report, const CutSet& sp_cuts,
                          const SolverOptions& opts) {
  if (!sp_report.primal_X) throw std::invalid_argument("rounding_matrix needs a solved SP relaxation");
  const EigenDecomposition eig = eig_decompose(*sp_report.primal_X);
  const double scale = std::max(1.0, std::abs(eig.max_value()));
  CutSet S(g.n());
  for (Eigen::Index k = 0; k < eig.size(); ++k) {
    if (eig.values(k) > 1e-9 * scale) S.add(eig.vectors.col(k), CutOrigin::Eigen);
  }
  S.add_all(sp_cuts);
  S.add_all(CutSet::standard_basis(g.n()));
  const SolveReport rep = solve(build_SD(g, S), opts);
  if (!rep.optimal()) throw NumericalFailure(std::string("rounding LP ended with status ") + to_string(rep.status));
  Matrix y = assemble_sd(S, rep.aux).dense();
  for (int i = 0; i < g.n(); ++i) y(i, i) = 1.0;  // slack on e_i e_i^T
  return SymMatrix(std::move(y));
}

CutResult gw_round(const Graph& g, const SymMatrix& y, int trials, std::uint64_t seed) {
  const int n = g.n();
  if (y.dim() != n) throw std::invalid_argument("rounding matrix dimension does not match the graph");
  if (trials < 1) throw std::invalid_argument("gw_round needs at least one trial");
  for (int i = 0; i < n; ++i) {
    if (std::abs(y(i, i) - 1.0) > 1e-7) throw InvalidMatrix("rounding matrix diagonal is not 1");
  }
  const EigenDecomposition eig = eig_decompose(y);
  if (eig.min_value() < -1e-7) throw InvalidMatrix("rounding matrix is not PSD");
  // Rows of V diag(sqrt(lambda)) are the vertex embeddings.
  Matrix b = eig.vectors * eig.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  Rng rng(seed);
  CutResult best{std::vector<int>(n, 1), -1.0, "gw-round"};
  std::vector<int> side(n);
  Vector r(n);
  for (int t = 0; t < trials; ++t) {
    for (int k = 0; k < n; ++k) r(k) = rng.normal();
    const Vector proj = b * r;
    for (int i = 0; i < n; ++i) side[i] = proj(i) < 0.0 ? -1 : 1;
    const double v = cut_value(g, side);
    if (v > best.value) {
      best.value = v;
      best.side = side;
    }
  }
  return best;
}

CutResult greedy_cut(const Graph& g) {
  const int n = g.n();
  const auto nb = neighbours(g);
  const auto deg = g.weighted_degrees();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return deg[a] > deg[b]; });
  std::vector<int> side(n, 0);
  for (int v : order) {
    double plus = 0.0, minus = 0.0;  // weight cut by placing v on +1 / -1
    for (const auto& [u, w] : nb[v]) {
      if (side[u] == -1) plus += w;
      if (side[u] == 1) minus += w;
    }
    side[v] = minus > plus ? -1 : 1;
  }
  return make_result(g, std::move(side), "greedy");
}

CutResult sweep_cut(const Graph& g) {
  const int n = g.n();
  const auto nb = neighbours(g);
  const EigenDecomposition eig = eig_decompose(g.adjacency());
  const Vector v = eig.vectors.col(n - 1);
  std::vector<int> side(n);
  for (int i = 0; i < n; ++i) side[i] = v(i) < 0.0 ? -1 : 1;
  const double eps = 1e-12 * std::max(1.0, g.m_total());
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n; ++i) {
      double gain = 0.0;
      for (const auto& [u, w] : nb[i]) gain += side[u] == side[i] ? w : -w;
      if (gain > eps) {
        side[i] = -side[i];
        improved = true;
      }
    }
  }
  return make_result(g, std::move(side), "sweep");
}

CutResult brute_force_maxcut(const Graph& g) {
  const int n = g.n();
  if (n > 22) throw std::invalid_argument("brute_force_maxcut supports n <= 22, got " + std::to_string(n));
  const auto nb = neighbours(g);
  std::vector<int> side(n, 1);
  double value = 0.0;
  double best = 0.0;
  std::vector<int> best_side = side;
  // Vertex n-1 stays on +1; Gray code over the other n-1 vertices.
  const std::uint64_t count = n > 1 ? (std::uint64_t{1} << (n - 1)) : 1;
  for (std::uint64_t k = 1; k < count; ++k) {
    const int i = std::countr_zero(k);
    for (const auto& [u, w] : nb[i]) value += side[u] == side[i] ? w : -w;
    side[i] = -side[i];
    if (value > best) {
      best = value;
      best_side = side;
    }
  }
  return make_result(g, std::move(best_side), "brute-force");
}

Graph planted_instance(int n, int d, int l, std::uint64_t seed) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n < 1 || r * r != n) throw GeneratorError("planted: n must be a perfect square");
  const int n1 = n - 2 * r;
  if (d < 0 || n1 < d + 1 || (static_cast<long long>(n1) * d) % 2 != 0) {
    throw GeneratorError("planted: need n - 2 sqrt(n) >= d + 1 and (n - 2 sqrt(n)) d even");
  }
  if (l < 0 || static_cast<long long>(l) > static_cast<long long>(n1) * 2 * r) {
    throw GeneratorError("planted: l exceeds the number of possible cross edges");
  }
  Rng rng(seed);
  std::vector<Edge> edges = gen_regular(n1, d, rng).edges();
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) edges.push_back({n1 + a, n1 + r + b, 1.0});
  }
  std::set<std::pair<int, int>> cross;
  while (static_cast<int>(cross.size()) < l) {
    const int u = static_cast<int>(rng.below(n1));
    const int v = n1 + static_cast<int>(rng.below(2 * r));
    if (cross.emplace(u, v).second) edges.push_back({u, v, 1.0});
  }
  return Graph(n, std::move(edges));
}

}  // namespace sdprelax
