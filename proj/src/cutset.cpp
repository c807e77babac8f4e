#include <sdprelax/cutset.hpp>

#include <cmath>
#include <stdexcept>

namespace sdprelax {

const char* to_string(CutOrigin o) {
  switch (o) {
    case CutOrigin::Eigen:
      return "eigen";
    case CutOrigin::StandardBasis:
      return "standard-basis";
    case CutOrigin::Oracle:
      return "oracle";
    case CutOrigin::User:
      return "user";
  }
  return "unknown";
}

const char* to_string(CutPolicy p) {
  switch (p) {
    case CutPolicy::Eigen:
      return "eigen";
    case CutPolicy::Oracle:
      return "oracle";
    case CutPolicy::Hybrid:
      return "hybrid";
  }
  return "unknown";
}

CutPolicy parse_cut_policy(const std::string& name) {
  if (name == "eigen") return CutPolicy::Eigen;
  if (name == "oracle") return CutPolicy::Oracle;
  if (name == "hybrid") return CutPolicy::Hybrid;
  throw std::invalid_argument("unknown cut policy '" + name + "' (expected eigen, oracle or hybrid)");
}

CutSet::CutSet(Eigen::Index dim) : dim_(dim) {
  if (dim < 1) throw InvalidMatrix("cut set dimension must be positive");
}

bool CutSet::contains(const Vector& w) const {
  const double norm = w.norm();
  if (w.size() != dim_ || norm == 0.0) return false;
  const Vector v = w / norm;
  for (const auto& u : vectors_) {
    if ((u - v).norm() <= kDuplicateTol || (u + v).norm() <= kDuplicateTol) return true;
  }
  return false;
}

bool CutSet::add(const Vector& v, CutOrigin origin) {
  if (v.size() != dim_) {
    throw InvalidMatrix("cut dimension " + std::to_string(v.size()) + " does not match " +
                        std::to_string(dim_));
  }
  const double norm = v.norm();
  if (!std::isfinite(norm) || norm == 0.0) throw InvalidMatrix("cut vector must be non-zero and finite");
  Vector u = v / norm;
  if (contains(u)) return false;
  vectors_.push_back(std::move(u));
  origins_.push_back(origin);
  return true;
}

std::size_t CutSet::add_all(const CutSet& other) {
  std::size_t added = 0;
  for (std::size_t k = 0; k < other.size(); ++k) added += add(other.vector(k), other.origin(k));
  return added;
}

CutSet CutSet::eigenbasis(const SymMatrix& a, CutOrigin origin) {
  const EigenDecomposition ed = eig_decompose(a);
  CutSet s(a.dim());
  for (Eigen::Index k = ed.size() - 1; k >= 0; --k) s.add(ed.vectors.col(k), origin);
  return s;
}

CutSet CutSet::standard_basis(Eigen::Index n) {
  CutSet s(n);
  for (Eigen::Index i = 0; i < n; ++i) s.add(Vector::Unit(n, i), CutOrigin::StandardBasis);
  return s;
}

}  // namespace sdprelax
