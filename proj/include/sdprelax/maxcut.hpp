#pragma once

#include <sdprelax/engine.hpp>
#include <sdprelax/graph.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sdprelax {

struct CutResult {
  /// +1 / -1 per vertex.
  std::vector<int> side;
  double value = 0.0;
  /// "gw-round", "greedy", "sweep" or "brute-force".
  std::string method;
};

/// Total weight of edges whose endpoints lie on different sides.
double cut_value(const Graph& g, const std::vector<int>& side);

/// Cut weight m/2 + z/4 for a raw relaxation objective z = <-W, X>.
double cut_bound_from_raw(const Graph& g, double raw);

/// Max-cut SDP: maximize <-W, X> with rows "diag:i" (X_ii = 1) and the
/// entrywise box -1 <= X_ij <= 1 as variable bounds.
SdpInstance gw_instance(const Graph& g);

/// Outer relaxation: gw_instance with the cuts of S.
RelaxationModel build_SP(const Graph& g, const CutSet& S);

/// Inner restriction over X = sum eta_k x_k x_k^T, eta >= 0: variables
/// "eta:k" (1-based), rows "diag:i" requiring X_ii <= 1. Throws on empty S.
RelaxationModel build_SD(const Graph& g, const CutSet& S);

/// sum eta_k x_k x_k^T, PSD by construction.
SymMatrix assemble_sd(const CutSet& S, const Vector& eta);

/// m/2 + (n/4) lambda_max(-W).
double eigenvalue_bound(const Graph& g);

/// Roundable matrix from a solved SP relaxation: eigenvectors of X with
/// positive eigenvalues plus the standard basis feed an SD solve, and the
/// diagonal is then raised to exactly 1 with e_i e_i^T terms. The cuts of the
/// SP solve join the SD vectors when given; a non-PSD vertex optimum can
/// otherwise lose most of the SP value.
SymMatrix rounding_matrix(const Graph& g, const SolveReport& sp_report, const CutSet& sp_cuts,
                          const SolverOptions& opts = {});
SymMatrix rounding_matrix(const Graph& g, const SolveReport& sp_report, const SolverOptions& opts = {});

/// Random-hyperplane rounding of a PSD unit-diagonal Y; best of `trials`.
CutResult gw_round(const Graph& g, const SymMatrix& y, int trials, std::uint64_t seed);

/// Vertices by descending weighted degree, each placed on the side that cuts
/// more weight towards the vertices already placed.
CutResult greedy_cut(const Graph& g);

/// Signs of the eigenvector of lambda_min(W), then single-vertex moves while
/// any move strictly increases the cut.
CutResult sweep_cut(const Graph& g);

/// Exact maximum cut by Gray-code enumeration, n <= 22.
CutResult brute_force_maxcut(const Graph& g);

/// Random d-regular graph on n - 2 sqrt(n) vertices, disjoint K_{sqrt n, sqrt n}
/// on the last 2 sqrt(n) vertices, and l random edges between the two parts.
Graph planted_instance(int n, int d, int l, std::uint64_t seed);

}  // namespace sdprelax
