#include <sdprelax/model.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdprelax {

std::string pair_tag(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

double AffineExpr::eval(const Vector& x) const {
  double s = constant;
  for (const auto& t : terms) s += t.coef * x(t.var);
  return s;
}

RelaxationModel::RelaxationModel(Eigen::Index matrix_dim, Sense sense)
    : sense_(sense), n_(matrix_dim) {
  if (matrix_dim < 0) throw std::invalid_argument("matrix dimension must be non-negative");
  num_entries_ = static_cast<int>(n_ * (n_ + 1) / 2);
  vars_.resize(num_entries_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (Eigen::Index j = i; j < n_; ++j) vars_[entry_var(i, j)].name = "X" + pair_tag(i, j);
  }
}

int RelaxationModel::entry_var(Eigen::Index i, Eigen::Index j) const {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_) throw std::out_of_range("matrix entry out of range");
  return static_cast<int>(i * n_ - i * (i - 1) / 2 + (j - i));
}

std::pair<Eigen::Index, Eigen::Index> RelaxationModel::entry_of(int var) const {
  if (var < 0 || var >= num_entries_) throw std::out_of_range("not an entry variable");
  Eigen::Index i = 0;
  Eigen::Index start = 0;
  while (start + (n_ - i) <= var) {
    start += n_ - i;
    ++i;
  }
  return {i, i + (var - start)};
}

int RelaxationModel::add_aux(std::string name, double lower, double upper, double cost) {
  if (lower > upper) throw std::invalid_argument("aux variable '" + name + "' has lower > upper");
  vars_.push_back({std::move(name), lower, upper, cost, {}});
  return num_vars() - 1;
}

void RelaxationModel::set_bounds(int var, double lower, double upper, std::string bound_tag) {
  if (lower > upper) throw std::invalid_argument("variable bounds with lower > upper");
  auto& v = vars_.at(var);
  v.lower = lower;
  v.upper = upper;
  v.bound_tag = std::move(bound_tag);
}

void RelaxationModel::set_objective(const SymMatrix& c, double offset) {
  if (c.dim() != n_) throw std::invalid_argument("objective dimension mismatch");
  for (const auto& t : matrix_terms(c)) vars_[t.var].cost = t.coef;
  offset_ = offset;
}

std::vector<Term> RelaxationModel::matrix_terms(const SymMatrix& a) const {
  if (a.dim() != n_) throw std::invalid_argument("matrix dimension mismatch");
  std::vector<Term> terms;
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (Eigen::Index j = i; j < n_; ++j) {
      const double c = (i == j ? 1.0 : 2.0) * a(i, j);
      if (c != 0.0) terms.push_back({entry_var(i, j), c});
    }
  }
  return terms;
}

std::vector<Term> RelaxationModel::quad_terms(const Vector& v) const {
  if (v.size() != n_) throw std::invalid_argument("cut dimension mismatch");
  std::vector<Term> terms;
  terms.reserve(num_entries_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (Eigen::Index j = i; j < n_; ++j) {
      const double c = (i == j ? 1.0 : 2.0) * v(i) * v(j);
      if (c != 0.0) terms.push_back({entry_var(i, j), c});
    }
  }
  return terms;
}

void RelaxationModel::register_tag(const std::string& tag, int index, bool cone) {
  if (tag.empty()) return;
  auto& map = cone ? cone_tags_ : row_tags_;
  if (!map.emplace(tag, index).second) throw std::invalid_argument("duplicate row tag '" + tag + "'");
}

int RelaxationModel::add_row(LinearRow row) {
  if (row.lower > row.upper) throw std::invalid_argument("row '" + row.tag + "' has lower > upper");
  for (const auto& t : row.terms) {
    if (t.var < 0 || t.var >= num_vars()) throw std::out_of_range("row '" + row.tag + "' references unknown variable");
  }
  const int index = static_cast<int>(rows_.size());
  register_tag(row.tag, index, false);
  rows_.push_back(std::move(row));
  return index;
}

int RelaxationModel::add_cut(const Vector& v, std::string tag) {
  return add_row({std::move(tag), quad_terms(v), 0.0, kInf});
}

int RelaxationModel::add_cone(ConeRow row) {
  if (row.terms.empty()) throw std::invalid_argument("cone row '" + row.tag + "' has no terms");
  const int index = static_cast<int>(cones_.size());
  register_tag(row.tag, index, true);
  cones_.push_back(std::move(row));
  return index;
}

std::optional<int> RelaxationModel::find_row(const std::string& tag) const {
  auto it = row_tags_.find(tag);
  if (it == row_tags_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> RelaxationModel::find_cone(const std::string& tag) const {
  auto it = cone_tags_.find(tag);
  if (it == cone_tags_.end()) return std::nullopt;
  return it->second;
}

SymMatrix RelaxationModel::matrix_from(const Vector& x) const {
  Matrix m(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (Eigen::Index j = i; j < n_; ++j) {
      m(i, j) = m(j, i) = x(entry_var(i, j));
    }
  }
  return SymMatrix(std::move(m));
}

double RelaxationModel::objective_at(const Vector& x) const {
  double s = offset_;
  for (int k = 0; k < num_vars(); ++k) s += vars_[k].cost * x(k);
  return s;
}

double RelaxationModel::max_violation(const Vector& x) const {
  double worst = 0.0;
  for (int k = 0; k < num_vars(); ++k) {
    worst = std::max({worst, vars_[k].lower - x(k), x(k) - vars_[k].upper});
  }
  for (const auto& r : rows_) {
    double s = 0.0;
    for (const auto& t : r.terms) s += t.coef * x(t.var);
    worst = std::max({worst, r.lower - s, s - r.upper});
  }
  for (const auto& c : cones_) {
    double sq = 0.0;
    for (const auto& e : c.terms) {
      const double v = e.eval(x);
      sq += v * v;
    }
    worst = std::max(worst, std::sqrt(sq) - c.bound.eval(x));
  }
  return worst;
}

}  // namespace sdprelax
