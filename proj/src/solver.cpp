#include <sdprelax/solver.hpp>

#include <Highs.h>

#include <chrono>
#include <cmath>

namespace sdprelax {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
    case SolveStatus::IterationLimit:
      return "iteration-limit";
    case SolveStatus::NumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

bool supports_cones(Backend b) { return b == Backend::Auto; }

namespace {

double highs_bound(double v) { return std::isinf(v) ? (v > 0 ? kHighsInf : -kHighsInf) : v; }

struct SparseRow {
  std::vector<HighsInt> index;
  std::vector<double> value;
  double lower;
  double upper;
};

SparseRow to_sparse(const LinearRow& row) {
  SparseRow out{{}, {}, highs_bound(row.lower), highs_bound(row.upper)};
  out.index.reserve(row.terms.size());
  out.value.reserve(row.terms.size());
  for (const auto& t : row.terms) {
    out.index.push_back(t.var);
    out.value.push_back(t.coef);
  }
  return out;
}

// Tangent of ||u(x)|| <= t(x) at direction g: g . u(x) - t(x) <= 0.
SparseRow tangent_row(const ConeRow& cone, const Vector& g, int num_vars) {
  Vector coef = Vector::Zero(num_vars);
  double constant = 0.0;
  for (std::size_t k = 0; k < cone.terms.size(); ++k) {
    for (const auto& t : cone.terms[k].terms) coef(t.var) += g(k) * t.coef;
    constant += g(k) * cone.terms[k].constant;
  }
  for (const auto& t : cone.bound.terms) coef(t.var) -= t.coef;
  constant -= cone.bound.constant;
  SparseRow out{{}, {}, -kHighsInf, -constant};
  for (int v = 0; v < num_vars; ++v) {
    if (coef(v) != 0.0) {
      out.index.push_back(v);
      out.value.push_back(coef(v));
    }
  }
  return out;
}

double cone_violation(const ConeRow& cone, const Vector& x, Vector* u) {
  Vector val(cone.terms.size());
  for (std::size_t k = 0; k < cone.terms.size(); ++k) val(k) = cone.terms[k].eval(x);
  const double t = cone.bound.eval(x);
  if (u) *u = val;
  return val.norm() - t;
}

}  // namespace

struct LpSession::Impl {
  Highs highs;
  // Owner of each HiGHS row: model row index, or -(cone index + 1) for a
  // tangent row of that cone.
  std::vector<int> owner;
  // Power of two dividing the costs handed to HiGHS; large TSPLIB weights
  // otherwise break the dual simplex ratio test.
  double cost_scale = 1.0;

  void add(const SparseRow& r, int who) {
    const HighsInt start = 0;
    const HighsStatus st = highs.addRows(1, &r.lower, &r.upper, static_cast<HighsInt>(r.index.size()),
                                         &start, r.index.data(), r.value.data());
    if (st == HighsStatus::kError) throw NumericalFailure("LP backend rejected a row");
    owner.push_back(who);
  }

  HighsModelStatus run(long& iterations) {
    highs.run();
    iterations += highs.getInfo().simplex_iteration_count;
    return highs.getModelStatus();
  }

  // Tight internal tolerances occasionally leave the simplex unable to
  // certify a basis. Retry from scratch without presolve, then with the
  // requested tolerances, and finally accept a basis whose residual
  // infeasibilities are within them.
  HighsModelStatus recover(const SolverOptions& opts, long& iterations) {
    highs.clearSolver();
    highs.setOptionValue("presolve", "off");
    HighsModelStatus ms = run(iterations);
    if (ms == HighsModelStatus::kUnknown || ms == HighsModelStatus::kSolveError) {
      highs.clearSolver();
      highs.setOptionValue("primal_feasibility_tolerance", opts.feas_tol);
      highs.setOptionValue("dual_feasibility_tolerance", opts.opt_tol);
      ms = run(iterations);
      highs.setOptionValue("primal_feasibility_tolerance", std::min(1e-9, opts.feas_tol));
      highs.setOptionValue("dual_feasibility_tolerance", std::min(1e-9, opts.opt_tol));
    }
    highs.setOptionValue("presolve", "choose");
    if (ms == HighsModelStatus::kUnknown && highs.getInfo().primal_solution_status == kSolutionStatusFeasible &&
        highs.getInfo().dual_solution_status == kSolutionStatusFeasible) {
      ms = HighsModelStatus::kOptimal;
    }
    return ms;
  }
};

LpSession::LpSession(RelaxationModel model, SolverOptions opts)
    : model_(std::move(model)), opts_(opts), impl_(std::make_unique<Impl>()) {
  if (!model_.cones().empty() && !supports_cones(opts_.backend)) {
    throw ConeUnsupported("backend 'simplex' has no cone support; model has " +
                          std::to_string(model_.cones().size()) + " cone rows");
  }
  Highs& h = impl_->highs;
  h.setOptionValue("output_flag", false);
  h.setOptionValue("threads", 1);
  h.setOptionValue("random_seed", 0);
  h.setOptionValue("primal_feasibility_tolerance", std::min(1e-9, opts_.feas_tol));
  h.setOptionValue("dual_feasibility_tolerance", std::min(1e-9, opts_.opt_tol));
  if (opts_.interior_point) h.setOptionValue("solver", "ipm");
  if (std::isfinite(opts_.time_limit)) h.setOptionValue("time_limit", opts_.time_limit);

  HighsLp lp;
  const int nv = model_.num_vars();
  lp.num_col_ = nv;
  lp.num_row_ = 0;
  lp.sense_ = model_.sense() == Sense::Maximize ? ObjSense::kMaximize : ObjSense::kMinimize;
  lp.offset_ = model_.offset();
  lp.col_cost_.resize(nv);
  lp.col_lower_.resize(nv);
  lp.col_upper_.resize(nv);
  double cmax = 0.0;
  for (const auto& v : model_.variables()) cmax = std::max(cmax, std::abs(v.cost));
  if (cmax > 0.0) impl_->cost_scale = std::ldexp(1.0, std::ilogb(cmax));
  lp.offset_ /= impl_->cost_scale;
  for (int k = 0; k < nv; ++k) {
    const auto& v = model_.variables()[k];
    lp.col_cost_[k] = v.cost / impl_->cost_scale;
    lp.col_lower_[k] = highs_bound(v.lower);
    lp.col_upper_[k] = highs_bound(v.upper);
  }
  lp.a_matrix_.format_ = MatrixFormat::kColwise;
  lp.a_matrix_.start_.assign(nv + 1, 0);
  if (h.passModel(std::move(lp)) == HighsStatus::kError) throw NumericalFailure("LP backend rejected the model");

  // Rows go in one batch so the initial load stays cheap.
  std::vector<double> lower, upper, value;
  std::vector<HighsInt> start, index;
  for (std::size_t r = 0; r < model_.rows().size(); ++r) {
    SparseRow s = to_sparse(model_.rows()[r]);
    start.push_back(static_cast<HighsInt>(index.size()));
    lower.push_back(s.lower);
    upper.push_back(s.upper);
    index.insert(index.end(), s.index.begin(), s.index.end());
    value.insert(value.end(), s.value.begin(), s.value.end());
    impl_->owner.push_back(static_cast<int>(r));
  }
  if (!lower.empty()) {
    if (h.addRows(static_cast<HighsInt>(lower.size()), lower.data(), upper.data(),
                  static_cast<HighsInt>(index.size()), start.data(), index.data(),
                  value.data()) == HighsStatus::kError) {
      throw NumericalFailure("LP backend rejected the rows");
    }
  }
  for (std::size_t c = 0; c < model_.cones().size(); ++c) {
    const auto& cone = model_.cones()[c];
    const Eigen::Index d = static_cast<Eigen::Index>(cone.terms.size());
    for (Eigen::Index k = 0; k < d; ++k) {
      for (double s : {1.0, -1.0}) {
        impl_->add(tangent_row(cone, s * Vector::Unit(d, k), nv), -static_cast<int>(c) - 1);
      }
    }
  }
}

LpSession::~LpSession() = default;
LpSession::LpSession(LpSession&&) noexcept = default;
LpSession& LpSession::operator=(LpSession&&) noexcept = default;

int LpSession::add_row(LinearRow row) {
  const SparseRow s = to_sparse(row);
  const int r = model_.add_row(std::move(row));
  impl_->add(s, r);
  return r;
}

int LpSession::add_cut(const Vector& v, std::string tag) {
  return add_row({std::move(tag), model_.quad_terms(v), 0.0, kInf});
}

SolveReport LpSession::solve() {
  const auto t0 = std::chrono::steady_clock::now();
  Highs& h = impl_->highs;
  SolveReport rep;
  rep.backend = model_.cones().empty() ? "highs-simplex" : "highs-simplex+cone-tangents";
  const int nv = model_.num_vars();

  bool converged = false;
  for (int round = 0; round <= opts_.cone_rounds; ++round) {
    HighsModelStatus ms = impl_->run(rep.iterations);
    if (ms == HighsModelStatus::kUnboundedOrInfeasible) {
      // Presolve could not tell the two apart; a plain simplex run can.
      h.setOptionValue("presolve", "off");
      ms = impl_->run(rep.iterations);
      h.setOptionValue("presolve", "choose");
    }
    if (ms == HighsModelStatus::kUnknown || ms == HighsModelStatus::kSolveError) {
      ms = impl_->recover(opts_, rep.iterations);
    }
    if (ms != HighsModelStatus::kOptimal) {
      switch (ms) {
        case HighsModelStatus::kInfeasible:
          rep.status = SolveStatus::Infeasible;
          break;
        case HighsModelStatus::kUnbounded:
        case HighsModelStatus::kUnboundedOrInfeasible:
          rep.status = SolveStatus::Unbounded;
          break;
        case HighsModelStatus::kIterationLimit:
        case HighsModelStatus::kTimeLimit:
          rep.status = SolveStatus::IterationLimit;
          break;
        default:
          rep.status = SolveStatus::NumericalFailure;
      }
      rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return rep;
    }
    if (model_.cones().empty()) {
      converged = true;
      break;
    }
    const auto& sol = h.getSolution();
    const Vector x = Eigen::Map<const Vector>(sol.col_value.data(), nv);
    int added = 0;
    for (std::size_t c = 0; c < model_.cones().size(); ++c) {
      const auto& cone = model_.cones()[c];
      Vector u;
      const double viol = cone_violation(cone, x, &u);
      const double scale = std::max(1.0, std::abs(cone.bound.eval(x)));
      if (viol > opts_.feas_tol * scale) {
        impl_->add(tangent_row(cone, u / u.norm(), nv), -static_cast<int>(c) - 1);
        ++added;
      }
    }
    if (added == 0) {
      converged = true;
      break;
    }
  }

  const auto& sol = h.getSolution();
  rep.primal = Eigen::Map<const Vector>(sol.col_value.data(), nv);
  rep.col_duals = impl_->cost_scale * Eigen::Map<const Vector>(sol.col_dual.data(), nv);
  rep.row_duals = Vector::Zero(static_cast<Eigen::Index>(model_.rows().size()));
  for (std::size_t r = 0; r < impl_->owner.size(); ++r) {
    const int who = impl_->owner[r];
    const double y = impl_->cost_scale * sol.row_dual[r];
    if (who >= 0) {
      rep.row_duals(who) = y;
      const auto& tag = model_.rows()[who].tag;
      if (!tag.empty()) rep.duals[tag] = y;
    } else {
      const auto& tag = model_.cones()[-who - 1].tag;
      if (!tag.empty()) rep.duals[tag] += y;
    }
  }
  for (int k = 0; k < nv; ++k) {
    const auto& tag = model_.variables()[k].bound_tag;
    if (!tag.empty()) rep.duals[tag] = rep.col_duals(k);
  }
  rep.objective = model_.objective_at(rep.primal);
  if (model_.matrix_dim() > 0) rep.primal_X = model_.matrix_from(rep.primal);
  rep.aux = rep.primal.tail(model_.num_aux());
  rep.status = converged ? SolveStatus::Optimal : SolveStatus::IterationLimit;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SolveReport solve(const RelaxationModel& model, const SolverOptions& opts) {
  LpSession session(model, opts);
  return session.solve();
}

}  // namespace sdprelax
