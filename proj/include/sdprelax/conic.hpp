#pragma once

#include <sdprelax/linalg.hpp>
#include <sdprelax/solver.hpp>

#include <utility>
#include <vector>

namespace sdprelax {

/// Entry (i,j) with i <= j of a sparse symmetric matrix; the mirrored entry
/// (j,i) carries the same value.
struct SymEntry {
  int i;
  int j;
  double v;
};

/// Conic program in primal standard form
///
///   min  <C, X> + c_l . x
///   s.t. <A_k, X> + a_k . x = b_k,   k = 1..m
///        X PSD (n x n),  x >= 0
///
/// with dual  max b . y  s.t.  Z = C - sum y_k A_k PSD,  z = c_l - A_l^T y >= 0.
struct ConicForm {
  Eigen::Index n = 0;
  int nl = 0;
  Matrix C;
  Vector c_l;
  std::vector<std::vector<SymEntry>> A;
  std::vector<std::vector<std::pair<int, double>>> A_l;
  Vector b;

  int m() const { return static_cast<int>(b.size()); }
};

struct IpmOptions {
  double gap_tol = 1e-9;
  double feas_tol = 1e-9;
  int max_iter = 150;
};

struct IpmResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Matrix X;
  Matrix Z;
  Vector x;
  Vector z;
  Vector y;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double rel_gap = 0.0;
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  int iterations = 0;
};

/// Infeasible primal-dual path-following method (HKM direction, Mehrotra
/// predictor-corrector). Dense; intended for n up to a few hundred and m up
/// to about a thousand.
IpmResult solve_conic(const ConicForm& form, const IpmOptions& opts = {});

}  // namespace sdprelax
