#pragma once

#include <sdprelax/engine.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sdprelax {

class DegenerateComponent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance matrix. The checked constructor requires
/// lambda_min >= -1e-8 ||C||_F; deflated matrices skip the check because
/// deflating along a sparse direction can leave C indefinite.
class CovMatrix {
 public:
  explicit CovMatrix(SymMatrix c);
  static CovMatrix unchecked(SymMatrix c);

  const SymMatrix& matrix() const { return c_; }
  Eigen::Index dim() const { return c_.dim(); }

 private:
  struct Unchecked {};
  CovMatrix(SymMatrix c, Unchecked) : c_(std::move(c)) {}
  SymMatrix c_;
};

struct SparseComponent {
  /// Unit norm; largest-magnitude entry positive.
  Vector loading;
  /// 0-based indices of the nonzero entries, ascending.
  std::vector<int> support;
  /// loading^T C loading.
  double objective = 0.0;
};

/// Sparse PCA SDP: maximize <C, X> with Tr(X) = 1 (row "trace") and
/// sum |X_ij| <= k (row "l1"), the off-diagonal absolute values carried by
/// auxiliary t_ij with rows "abs+:(i,j)" and "abs-:(i,j)". Side rows
/// "pair+:(i,j)" and "pair-:(i,j)" state X_ii + X_jj +- 2 alpha X_ij >= 0;
/// they are implied by PSD only for alpha <= 1. Entry bounds 0 <= X_ii <= 1
/// and -1 <= X_ij <= 1 are always present.
SdpInstance spca_instance(const CovMatrix& c, int k, double alpha);

/// spca_instance with the cuts of S. Requires 1 <= k <= p and
/// 0 <= alpha <= sqrt(2).
RelaxationModel build_LSPCA(const CovMatrix& c, int k, const CutSet& S, double alpha);

/// Top eigenvector of the solution, truncated to its k largest-magnitude
/// entries and renormalized.
SparseComponent extract_component(const SolveReport& report, int k, const CovMatrix& c);

/// C - (x^T C x) x x^T.
CovMatrix deflate(const CovMatrix& c, const SparseComponent& comp);

struct SpcaOptions {
  CutPolicy policy = CutPolicy::Eigen;
  double alpha = 1.0;
  /// Oracle cuts allowed per component (oracle and hybrid policies).
  std::size_t budget = 0;
  std::size_t batch = 1;
  SolverOptions solver;
};

struct SpcaRound {
  /// Matrix this round was solved on (C deflated by the earlier rounds).
  std::optional<CovMatrix> input;
  SparseComponent component;
  SolveReport report;
  std::size_t cuts = 0;
  std::vector<std::pair<std::size_t, double>> trace;
};

/// One solve, extraction and deflation per entry of ks.
std::vector<SpcaRound> sparse_pca(const CovMatrix& c, const std::vector<int>& ks, const SpcaOptions& opts = {});

/// Adjusted variance of the loadings: sequential C-orthogonalization of the
/// component scores, summed residual variances over Tr(C). Columns dependent
/// on earlier ones contribute nothing.
double explained_variance(const CovMatrix& c, const std::vector<SparseComponent>& comps);

struct SpcaReferenceOptions {
  double rel_tol = 1e-6;
  int max_iter = 20000;
  double rho = 1.0;
  /// Over-relaxation factor in (0, 2).
  double relaxation = 1.6;
};

/// Value of the sparse PCA SDP (trace, l1 and PSD constraints only) by an
/// alternating-direction splitting between the unit-trace PSD set and the
/// l1 ball. `objective` is attained by the reported primal_X, which is
/// exactly feasible; `dual_objective` is a certified upper bound. Status is
/// Optimal when the two agree to rel_tol.
SolveReport spca_reference(const CovMatrix& c, int k, const SpcaReferenceOptions& opts = {});

/// Exact covariance of the three-factor model: V1 ~ N(0,290),
/// V2 ~ N(0,300), V3 = -0.3 V1 + 0.925 V2 + e; X1..X4 = V1 + e_i,
/// X5..X8 = V2 + e_i, X9, X10 = V3 + e_i, all e ~ N(0,1).
CovMatrix synthetic_covariance();

/// Sample covariance of `samples` draws from the same model.
CovMatrix synthetic_sample_covariance(int samples, std::uint64_t seed);

/// A^T A for a p x p matrix A with i.i.d. N(0, variance) entries.
CovMatrix wishart_covariance(int p, double variance, std::uint64_t seed);

}  // namespace sdprelax
