#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdprelax {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class InvalidMatrix : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense real symmetric matrix with value semantics.
///
/// Construction symmetrizes the input as (A + A^T)/2. Inputs whose largest
/// entrywise asymmetry exceeds `kAsymmetryTol * ||A||_F` are rejected, so
/// small round-off coming from file ingestion is absorbed silently while
/// genuinely non-symmetric data is an error.
class SymMatrix {
 public:
  static constexpr double kAsymmetryTol = 1e-6;

  explicit SymMatrix(const Matrix& a);
  explicit SymMatrix(Matrix&& a);

  static SymMatrix zeros(Eigen::Index n);
  static SymMatrix identity(Eigen::Index n);
  static SymMatrix diagonal(const Vector& d);
  /// Rank-one outer product v v^T.
  static SymMatrix outer(const Vector& v);

  Eigen::Index dim() const { return a_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }
  const Matrix& dense() const { return a_; }

  /// Largest |A_ij - A_ji| seen before symmetrization.
  double max_asymmetry() const { return asym_; }

  double frobenius_norm() const { return a_.norm(); }
  double trace() const { return a_.trace(); }
  bool all_finite() const { return a_.allFinite(); }

  /// Frobenius inner product <A, B>.
  double inner(const SymMatrix& other) const;
  /// Quadratic form v^T A v.
  double quad(const Vector& v) const;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 private:
  struct Trusted {};
  SymMatrix(Matrix&& a, Trusted) : a_(std::move(a)) {}
  void symmetrize();

  Matrix a_;
  double asym_ = 0.0;
};

/// Orthonormal eigenbasis with eigenvalues sorted descending.
/// Column i of `vectors` pairs with `values(i)`.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;

  Eigen::Index size() const { return values.size(); }
  double min_value() const { return values(values.size() - 1); }
  double max_value() const { return values(0); }
};

/// Dense symmetric eigensolve. Deterministic for a fixed input: each
/// eigenvector is sign-normalized so its largest-magnitude entry is positive.
/// Throws InvalidMatrix on non-finite entries.
EigenDecomposition eig_decompose(const SymMatrix& a);

struct EigCut {
  double value;
  Vector vector;
};

/// PSD separation oracle. Returns the smallest eigenpair of `x` when
/// lambda_min(x) < -tol, otherwise nothing.
std::optional<EigCut> min_eig_cut(const SymMatrix& x, double tol);

/// Up to `count` eigenpairs of `x` with eigenvalue < -tol, most negative
/// first.
std::vector<EigCut> negative_eig_cuts(const SymMatrix& x, double tol,
                                      std::size_t count);

/// Projection onto the PSD cone (negative eigenvalues clipped to zero).
SymMatrix psd_projection(const SymMatrix& x);

}  // namespace sdprelax
