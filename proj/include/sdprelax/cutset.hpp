#pragma once

#include <sdprelax/linalg.hpp>

#include <string>
#include <vector>

namespace sdprelax {

enum class CutOrigin { Eigen, StandardBasis, Oracle, User };

const char* to_string(CutOrigin o);

/// How a run seeds and grows S: the eigenbasis of the objective only, the
/// separation oracle only (starting from S empty), or the eigenbasis followed
/// by oracle cuts.
enum class CutPolicy { Eigen, Oracle, Hybrid };

const char* to_string(CutPolicy p);
/// Accepts "eigen", "oracle" and "hybrid"; throws std::invalid_argument.
CutPolicy parse_cut_policy(const std::string& name);

/// Ordered set of unit vectors v, each standing for the cut v^T X v >= 0.
class CutSet {
 public:
  static constexpr double kDuplicateTol = 1e-9;

  explicit CutSet(Eigen::Index dim);

  /// Normalizes `v` and appends it. Returns false (and leaves the set
  /// unchanged) when v or -v is already present within kDuplicateTol.
  /// Throws InvalidMatrix on a dimension mismatch or a zero/non-finite vector.
  bool add(const Vector& v, CutOrigin origin);

  /// Appends every vector of `other` in order; returns the number accepted.
  std::size_t add_all(const CutSet& other);

  /// Cuts made of all eigenvectors of `a` in ascending eigenvalue order.
  static CutSet eigenbasis(const SymMatrix& a, CutOrigin origin = CutOrigin::Eigen);
  static CutSet standard_basis(Eigen::Index n);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  const Vector& vector(std::size_t k) const { return vectors_[k]; }
  CutOrigin origin(std::size_t k) const { return origins_[k]; }
  const std::vector<Vector>& vectors() const { return vectors_; }

  bool contains(const Vector& v) const;

 private:
  Eigen::Index dim_;
  std::vector<Vector> vectors_;
  std::vector<CutOrigin> origins_;
};

}  // namespace sdprelax
