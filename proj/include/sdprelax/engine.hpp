#pragma once

#include <sdprelax/conic.hpp>
#include <sdprelax/cutset.hpp>
#include <sdprelax/model.hpp>
#include <sdprelax/solver.hpp>

#include <string>
#include <utility>
#include <vector>

namespace sdprelax {

enum class RowSense { Equal, LessEqual, GreaterEqual };

/// Entry (i,j), i <= j, of the symmetric matrix A in <A, X>; A_ji = A_ij.
struct MatrixTerm {
  Eigen::Index i;
  Eigen::Index j;
  double a;
};

/// <A, X> (sense) rhs
struct MatrixConstraint {
  std::string tag;
  std::vector<MatrixTerm> terms;
  RowSense sense = RowSense::Equal;
  double rhs = 0.0;

  static MatrixConstraint from_matrix(std::string tag, const SymMatrix& a, RowSense sense, double rhs);
  SymMatrix dense(Eigen::Index n) const;
  double eval(const SymMatrix& x) const;
};

/// lower <= X_ij <= upper, reported under `tag` ("box:(i,j)" when empty).
struct EntryBound {
  Eigen::Index i;
  Eigen::Index j;
  double lower;
  double upper;
  std::string tag;
};

struct AuxSpec {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

/// Side rows over the model layout (see SdpInstance::entry_var/aux_var).
/// `implied` marks rows that every PSD matrix satisfying the matrix
/// constraints already obeys; they exist to keep the linear relaxations
/// bounded and are dropped by the exact reference solve.
struct ExtraRow {
  LinearRow row;
  bool implied = false;
};

struct ExtraCone {
  ConeRow cone;
  bool implied = false;
};

/// SDP: optimize <C, X> + aux costs + offset over PSD X subject to matrix
/// constraints, entry bounds and side rows.
struct SdpInstance {
  std::string name;
  SymMatrix objective;
  Sense sense = Sense::Maximize;
  double offset = 0.0;
  std::vector<MatrixConstraint> constraints;
  /// Always implied by PSD plus the matrix constraints.
  std::vector<EntryBound> entry_bounds;
  std::vector<AuxSpec> aux;
  std::vector<ExtraRow> extra_linear;
  std::vector<ExtraCone> extra_socp;

  explicit SdpInstance(SymMatrix c, Sense s = Sense::Maximize) : objective(std::move(c)), sense(s) {}

  Eigen::Index dim() const { return objective.dim(); }
  int entry_var(Eigen::Index i, Eigen::Index j) const;
  int aux_var(int k) const;
};

/// Linear relaxation L_S: every row of `inst` plus one row "cut:k" per
/// vector of S (k 1-based in S order).
RelaxationModel build_LS(const SdpInstance& inst, const CutSet& S);

struct CuttingPlaneOptions {
  std::size_t budget = 0;
  std::size_t batch = 1;
  double tol = 1e-6;
  SolverOptions solver;
};

struct CuttingPlaneResult {
  SolveReport report;
  CutSet cuts;
  /// (|S| at solve time, objective) after every solve.
  std::vector<std::pair<std::size_t, double>> trace;
  std::size_t added = 0;
};

/// Kelley's method: solve L_S, append the eigenvectors of the most negative
/// eigenvalues of the optimal X (at most `batch` per round) until X is PSD at
/// `tol` or `budget` cuts have been added. The report status is
/// IterationLimit when the budget runs out first.
CuttingPlaneResult cutting_plane(const SdpInstance& inst, const CutSet& S0,
                                 const CuttingPlaneOptions& opts);

struct ReferenceOptions {
  double tol = 1e-6;
  IpmOptions ipm;
};

/// Exact SDP value of `inst` by the interior-point conic solver, ignoring
/// rows flagged as implied. The report carries primal_X, the dual
/// multipliers of the matrix constraints under their tags (Lagrangian
/// convention of SolveReport), the dual slack S* = C - sum y_i A_i and the
/// dual objective. Status is Optimal only if the solve converged and
/// lambda_min(X) >= -tol.
SolveReport reference_sdp(const SdpInstance& inst, const ReferenceOptions& opts = {});

/// Builds L_{E(S*)} from the dual slack of `ref`, solves it and returns
/// |objective - ref.objective|.
double optimal_cutset_check(const SdpInstance& inst, const SolveReport& ref,
                            const SolverOptions& opts = {});

/// Relative monotonicity test for a max-sense (non-increasing) or min-sense
/// (non-decreasing) trace, with slack rel_tol * max(1, |value|).
bool trace_monotone(const std::vector<std::pair<std::size_t, double>>& trace, Sense sense,
                    double rel_tol = 1e-7);

}  // namespace sdprelax
