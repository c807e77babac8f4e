#pragma once

#include <sdprelax/linalg.hpp>

#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sdprelax {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };

struct Term {
  int var;
  double coef;
};

/// lower <= sum coef * x[var] <= upper
struct LinearRow {
  std::string tag;
  std::vector<Term> terms;
  double lower = -kInf;
  double upper = kInf;
};

struct AffineExpr {
  std::vector<Term> terms;
  double constant = 0.0;

  double eval(const Vector& x) const;
};

/// || (terms[0], ..., terms[d-1]) ||_2 <= bound
struct ConeRow {
  std::string tag;
  std::vector<AffineExpr> terms;
  AffineExpr bound;
};

struct Variable {
  std::string name;
  double lower = -kInf;
  double upper = kInf;
  double cost = 0.0;
  /// Non-empty when the bounds stand for a named constraint, e.g. "box:(1,2)";
  /// the bound multiplier is then reported under this tag.
  std::string bound_tag;
};

/// Solver-agnostic LP/SOCP over the upper-triangle entries of a symmetric
/// matrix X plus auxiliary variables.
///
/// Entry (i,j), i <= j, is variable i*n - i*(i-1)/2 + (j-i). Auxiliary
/// variables follow the n(n+1)/2 entry variables. Linear functionals of X are
/// expanded with a factor 2 on off-diagonal entries, so <A, X> and v^T X v are
/// exact for symmetric A and any v. A matrix dimension of 0 gives a plain LP
/// over auxiliary variables.
class RelaxationModel {
 public:
  RelaxationModel(Eigen::Index matrix_dim, Sense sense);

  Sense sense() const { return sense_; }
  Eigen::Index matrix_dim() const { return n_; }
  int num_entry_vars() const { return num_entries_; }
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_aux() const { return num_vars() - num_entries_; }

  int entry_var(Eigen::Index i, Eigen::Index j) const;
  std::pair<Eigen::Index, Eigen::Index> entry_of(int var) const;

  int add_aux(std::string name, double lower, double upper, double cost = 0.0);
  void set_bounds(int var, double lower, double upper, std::string bound_tag = {});
  void set_cost(int var, double cost) { vars_.at(var).cost = cost; }

  /// Objective <C, X> + (existing aux costs) + offset.
  void set_objective(const SymMatrix& c, double offset = 0.0);
  void set_offset(double offset) { offset_ = offset; }
  double offset() const { return offset_; }

  /// Terms of <A, X>.
  std::vector<Term> matrix_terms(const SymMatrix& a) const;
  /// Terms of v^T X v.
  std::vector<Term> quad_terms(const Vector& v) const;

  int add_row(LinearRow row);
  /// Adds the row v^T X v >= 0.
  int add_cut(const Vector& v, std::string tag);
  int add_cone(ConeRow row);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<LinearRow>& rows() const { return rows_; }
  const std::vector<ConeRow>& cones() const { return cones_; }
  std::optional<int> find_row(const std::string& tag) const;
  std::optional<int> find_cone(const std::string& tag) const;

  /// Assembles X from a full variable vector.
  SymMatrix matrix_from(const Vector& x) const;
  /// Objective value (including offset) at x.
  double objective_at(const Vector& x) const;
  /// Largest violation of any variable bound, linear row or cone row at x.
  double max_violation(const Vector& x) const;

 private:
  void register_tag(const std::string& tag, int index, bool cone);

  Sense sense_;
  Eigen::Index n_;
  int num_entries_;
  std::vector<Variable> vars_;
  std::vector<LinearRow> rows_;
  std::vector<ConeRow> cones_;
  double offset_ = 0.0;
  std::unordered_map<std::string, int> row_tags_;
  std::unordered_map<std::string, int> cone_tags_;
};

/// "(i,j)" with 1-based indices, as used in row tags.
std::string pair_tag(Eigen::Index i, Eigen::Index j);

}  // namespace sdprelax
