#pragma once

#include <sdprelax/engine.hpp>
#include <sdprelax/graph.hpp>

#include <optional>
#include <vector>

namespace sdprelax {

struct ThetaInstance {
  Graph graph;
  /// J - W: zero exactly on edges, one elsewhere.
  SymMatrix shifted_objective;

  explicit ThetaInstance(Graph g);
};

/// Theta SDP: maximize <J - W, X> with Tr(X) = 1 (row "trace") and
/// X_ij = 0 on edges (rows "edge:(i,j)"). Entry bounds 0 <= X_ii <= 1 and
/// -1 <= X_ij <= 1 keep the linear relaxations bounded. With `socp`, cone
/// rows "soc:(i,j)" state ||(2 X_ij, X_ii - X_jj)|| <= X_ii + X_jj for all
/// i < j; they hold for every PSD X and are skipped by the exact solve.
SdpInstance theta_sdp(const ThetaInstance& inst, bool socp);

/// theta_sdp with the cuts of S.
RelaxationModel build_LTn(const ThetaInstance& inst, const CutSet& S, bool socp);

/// Exact theta number by the interior-point reference solve.
SolveReport theta_reference(const ThetaInstance& inst, const ReferenceOptions& opts = {});

struct ThetaExperimentOptions {
  CutPolicy policy = CutPolicy::Eigen;
  bool socp = false;
  std::size_t budget = 250;
  std::size_t batch = 10;
  double tol = 1e-6;
  SolverOptions solver;
};

struct ThetaTracePoint {
  std::size_t cuts;
  double objective;
  /// reference / objective, in (0, 1] up to solver tolerance.
  double ratio;
};

struct ThetaExperimentResult {
  std::vector<ThetaTracePoint> trace;
  SolveReport final_report;
  CutSet cuts;
  double reference = 0.0;
};

/// Grows S up to `budget` cuts and records the ratio after every `batch`
/// cuts (and at 0). The eigen policy adds eigenvectors of J - W by ascending
/// eigenvalue, `batch` per solve; once they are used up, and under the
/// oracle policy throughout, each solve adds the eigenvector of the most
/// negative eigenvalue of the current solution. Stops early when the
/// solution is PSD at `tol`. Hybrid behaves as eigen. The reference value is
/// computed when absent.
ThetaExperimentResult theta_experiment(const Graph& g, const ThetaExperimentOptions& opts,
                                       std::optional<double> reference = std::nullopt);

}  // namespace sdprelax
