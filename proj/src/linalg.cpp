#include "sdprelax/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sdprelax {

SymMatrix::SymMatrix(const Matrix& a) : a_(a) { symmetrize(); }

SymMatrix::SymMatrix(Matrix&& a) : a_(std::move(a)) { symmetrize(); }

void SymMatrix::symmetrize() {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw InvalidMatrix("symmetric matrix must be square with n >= 1, got " +
                        std::to_string(a_.rows()) + "x" +
                        std::to_string(a_.cols()));
  }
  asym_ = (a_ - a_.transpose()).cwiseAbs().maxCoeff();
  const double scale = a_.norm();
  if (asym_ > kAsymmetryTol * scale) {
    throw InvalidMatrix("matrix is not symmetric: max asymmetry " +
                        std::to_string(asym_) + " exceeds tolerance " +
                        std::to_string(kAsymmetryTol * scale));
  }
  if (asym_ > 0.0) {
    Matrix sym = 0.5 * (a_ + a_.transpose());
    a_ = std::move(sym);
  }
}

SymMatrix SymMatrix::zeros(Eigen::Index n) {
  if (n < 1) throw InvalidMatrix("dimension must be >= 1");
  return SymMatrix(Matrix::Zero(n, n), Trusted{});
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  if (n < 1) throw InvalidMatrix("dimension must be >= 1");
  return SymMatrix(Matrix::Identity(n, n), Trusted{});
}

SymMatrix SymMatrix::diagonal(const Vector& d) {
  if (d.size() < 1) throw InvalidMatrix("dimension must be >= 1");
  return SymMatrix(Matrix(d.asDiagonal()), Trusted{});
}

SymMatrix SymMatrix::outer(const Vector& v) {
  if (v.size() < 1) throw InvalidMatrix("dimension must be >= 1");
  return SymMatrix(v * v.transpose(), Trusted{});
}

double SymMatrix::inner(const SymMatrix& other) const {
  if (other.dim() != dim()) throw InvalidMatrix("dimension mismatch in inner product");
  return a_.cwiseProduct(other.a_).sum();
}

double SymMatrix::quad(const Vector& v) const {
  if (v.size() != dim()) throw InvalidMatrix("dimension mismatch in quadratic form");
  return v.dot(a_ * v);
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidMatrix("dimension mismatch in sum");
  return SymMatrix(a.a_ + b.a_, SymMatrix::Trusted{});
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidMatrix("dimension mismatch in difference");
  return SymMatrix(a.a_ - b.a_, SymMatrix::Trusted{});
}

SymMatrix operator*(double s, const SymMatrix& a) {
  return SymMatrix(s * a.a_, SymMatrix::Trusted{});
}

EigenDecomposition eig_decompose(const SymMatrix& a) {
  if (!a.all_finite()) throw InvalidMatrix("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.dense(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw InvalidMatrix("symmetric eigensolver failed to converge");
  }
  const Eigen::Index n = a.dim();
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.values(k) = solver.eigenvalues()(src);
    Vector v = solver.eigenvectors().col(src);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    out.vectors.col(k) = v;
  }
  return out;
}

std::vector<EigCut> negative_eig_cuts(const SymMatrix& x, double tol,
                                      std::size_t count) {
  const EigenDecomposition eig = eig_decompose(x);
  std::vector<EigCut> cuts;
  for (Eigen::Index k = eig.size() - 1; k >= 0 && cuts.size() < count; --k) {
    if (eig.values(k) >= -tol) break;
    cuts.push_back({eig.values(k), eig.vectors.col(k)});
  }
  return cuts;
}

std::optional<EigCut> min_eig_cut(const SymMatrix& x, double tol) {
  auto cuts = negative_eig_cuts(x, tol, 1);
  if (cuts.empty()) return std::nullopt;
  return std::move(cuts.front());
}

SymMatrix psd_projection(const SymMatrix& x) {
  const EigenDecomposition eig = eig_decompose(x);
  const Vector clipped = eig.values.cwiseMax(0.0);
  return SymMatrix(eig.vectors * clipped.asDiagonal() * eig.vectors.transpose());
}

}  // namespace sdprelax
