#include <sdprelax/engine.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace sdprelax {

MatrixConstraint MatrixConstraint::from_matrix(std::string tag, const SymMatrix& a, RowSense sense,
                                               double rhs) {
  MatrixConstraint c{std::move(tag), {}, sense, rhs};
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    for (Eigen::Index j = i; j < a.dim(); ++j) {
      if (a(i, j) != 0.0) c.terms.push_back({i, j, a(i, j)});
    }
  }
  return c;
}

SymMatrix MatrixConstraint::dense(Eigen::Index n) const {
  Matrix m = Matrix::Zero(n, n);
  for (const auto& t : terms) m(t.i, t.j) = m(t.j, t.i) = t.a;
  return SymMatrix(std::move(m));
}

double MatrixConstraint::eval(const SymMatrix& x) const {
  double s = 0.0;
  for (const auto& t : terms) s += (t.i == t.j ? 1.0 : 2.0) * t.a * x(t.i, t.j);
  return s;
}

int SdpInstance::entry_var(Eigen::Index i, Eigen::Index j) const {
  if (i > j) std::swap(i, j);
  const Eigen::Index n = dim();
  return static_cast<int>(i * n - i * (i - 1) / 2 + (j - i));
}

int SdpInstance::aux_var(int k) const { return static_cast<int>(dim() * (dim() + 1) / 2) + k; }

namespace {

LinearRow constraint_row(const RelaxationModel& model, const MatrixConstraint& c) {
  LinearRow row{c.tag, {}, -kInf, kInf};
  for (const auto& t : c.terms) {
    row.terms.push_back({model.entry_var(t.i, t.j), (t.i == t.j ? 1.0 : 2.0) * t.a});
  }
  if (c.sense != RowSense::GreaterEqual) row.upper = c.rhs;
  if (c.sense != RowSense::LessEqual) row.lower = c.rhs;
  return row;
}

void check_instance(const SdpInstance& inst) {
  const Eigen::Index n = inst.dim();
  for (const auto& c : inst.constraints) {
    for (const auto& t : c.terms) {
      if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n) {
        throw std::invalid_argument("constraint '" + c.tag + "' has an entry outside dimension " +
                                    std::to_string(n));
      }
    }
  }
  for (const auto& b : inst.entry_bounds) {
    if (b.i < 0 || b.j < 0 || b.i >= n || b.j >= n) throw std::invalid_argument("entry bound out of range");
  }
}

}  // namespace

RelaxationModel build_LS(const SdpInstance& inst, const CutSet& S) {
  check_instance(inst);
  if (S.dim() != inst.dim()) {
    throw std::invalid_argument("cut set dimension " + std::to_string(S.dim()) +
                                " does not match instance dimension " + std::to_string(inst.dim()));
  }
  RelaxationModel model(inst.dim(), inst.sense);
  for (const auto& a : inst.aux) model.add_aux(a.name, a.lower, a.upper, a.cost);
  model.set_objective(inst.objective, inst.offset);
  for (const auto& b : inst.entry_bounds) {
    model.set_bounds(model.entry_var(b.i, b.j), b.lower, b.upper,
                     b.tag.empty() ? "box:" + pair_tag(b.i, b.j) : b.tag);
  }
  for (const auto& c : inst.constraints) model.add_row(constraint_row(model, c));
  for (const auto& r : inst.extra_linear) model.add_row(r.row);
  for (const auto& c : inst.extra_socp) model.add_cone(c.cone);
  for (std::size_t k = 0; k < S.size(); ++k) model.add_cut(S.vector(k), "cut:" + std::to_string(k + 1));
  return model;
}

CuttingPlaneResult cutting_plane(const SdpInstance& inst, const CutSet& S0,
                                 const CuttingPlaneOptions& opts) {
  if (opts.batch < 1) throw std::invalid_argument("cutting_plane: batch must be at least 1");
  CuttingPlaneResult res{{}, S0, {}, 0};
  const auto t0 = std::chrono::steady_clock::now();
  LpSession session(build_LS(inst, S0), opts.solver);
  long iterations = 0;
  while (true) {
    SolveReport rep = session.solve();
    iterations += rep.iterations;
    res.trace.emplace_back(res.cuts.size(), rep.objective);
    auto finish = [&](SolveStatus st) {
      rep.status = st;
      rep.iterations = iterations;
      rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.report = std::move(rep);
      return res;
    };
    if (!rep.optimal()) return finish(rep.status);
    const std::size_t room = opts.budget - std::min(opts.budget, res.added);
    const auto found = negative_eig_cuts(*rep.primal_X, opts.tol, std::max<std::size_t>(1, std::min(opts.batch, room)));
    if (found.empty()) return finish(SolveStatus::Optimal);
    if (room == 0) return finish(SolveStatus::IterationLimit);
    std::size_t accepted = 0;
    for (const auto& c : found) {
      if (res.cuts.add(c.vector, CutOrigin::Oracle)) {
        session.add_cut(res.cuts.vectors().back(), "cut:" + std::to_string(res.cuts.size()));
        ++accepted;
      }
    }
    // Every separating vector was already present: the loop cannot progress.
    if (accepted == 0) return finish(SolveStatus::IterationLimit);
    res.added += accepted;
  }
}

namespace {

// Affine image of one model variable in terms of conic LP-block variables.
struct AuxMap {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;
};

struct ConicBuild {
  ConicForm form;
  std::vector<AuxMap> aux;
  double constant = 0.0;  // objective constant in the conic (min) sense
  std::vector<std::string> tags;
  std::vector<double> lp_cost;

  int new_lp_var(double cost) {
    lp_cost.push_back(cost);
    return form.nl++;
  }

  // Adds  <A,X> + a.x (lower/upper) as conic equality rows with slacks.
  void add_row(const std::string& tag, std::vector<SymEntry> a, std::vector<std::pair<int, double>> al,
               double constant_shift, double lower, double upper) {
    lower -= constant_shift;
    upper -= constant_shift;
    const bool has_lo = std::isfinite(lower);
    const bool has_up = std::isfinite(upper);
    double rhs;
    if (has_lo && has_up && lower == upper) {
      rhs = lower;
    } else if (has_up && !has_lo) {
      al.emplace_back(new_lp_var(0.0), 1.0);
      rhs = upper;
    } else if (has_lo && !has_up) {
      al.emplace_back(new_lp_var(0.0), -1.0);
      rhs = lower;
    } else if (has_lo && has_up) {
      const int s = new_lp_var(0.0);
      al.emplace_back(s, 1.0);
      rhs = upper;
      const int t = new_lp_var(0.0);
      push("", {}, {{s, 1.0}, {t, 1.0}}, upper - lower);
    } else {
      return;  // free row
    }
    push(tag, std::move(a), std::move(al), rhs);
  }

  void push(const std::string& tag, std::vector<SymEntry> a, std::vector<std::pair<int, double>> al,
            double rhs) {
    form.A.push_back(std::move(a));
    form.A_l.push_back(std::move(al));
    tags.push_back(tag);
    const Eigen::Index m = form.b.size();
    form.b.conservativeResize(m + 1);
    form.b(m) = rhs;
  }
};

}  // namespace

SolveReport reference_sdp(const SdpInstance& inst, const ReferenceOptions& opts) {
  check_instance(inst);
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index n = inst.dim();
  const double sign = inst.sense == Sense::Maximize ? -1.0 : 1.0;
  const RelaxationModel layout(n, inst.sense);
  const int num_entries = layout.num_entry_vars();

  ConicBuild cb;
  cb.form.n = n;
  cb.form.C = sign * inst.objective.dense();

  for (const auto& a : inst.aux) {
    AuxMap map;
    const double c = sign * a.cost;
    if (std::isfinite(a.lower)) {
      map.constant = a.lower;
      map.terms.emplace_back(cb.new_lp_var(c), 1.0);
      cb.constant += c * a.lower;
      if (std::isfinite(a.upper)) {
        cb.push("", {}, {{map.terms[0].first, 1.0}, {cb.new_lp_var(0.0), 1.0}}, a.upper - a.lower);
      }
    } else if (std::isfinite(a.upper)) {
      map.constant = a.upper;
      map.terms.emplace_back(cb.new_lp_var(-c), -1.0);
      cb.constant += c * a.upper;
    } else {
      map.terms.emplace_back(cb.new_lp_var(c), 1.0);
      map.terms.emplace_back(cb.new_lp_var(-c), -1.0);
    }
    cb.aux.push_back(std::move(map));
  }

  for (const auto& c : inst.constraints) {
    std::vector<SymEntry> a;
    for (const auto& t : c.terms) {
      a.push_back({static_cast<int>(std::min(t.i, t.j)), static_cast<int>(std::max(t.i, t.j)), t.a});
    }
    const double lo = c.sense == RowSense::LessEqual ? -kInf : c.rhs;
    const double up = c.sense == RowSense::GreaterEqual ? kInf : c.rhs;
    cb.add_row(c.tag, std::move(a), {}, 0.0, lo, up);
  }
  for (const auto& r : inst.extra_linear) {
    if (r.implied) continue;
    std::vector<SymEntry> a;
    std::vector<std::pair<int, double>> al;
    double shift = 0.0;
    for (const auto& t : r.row.terms) {
      if (t.var < num_entries) {
        const auto [i, j] = layout.entry_of(t.var);
        a.push_back({static_cast<int>(i), static_cast<int>(j), i == j ? t.coef : 0.5 * t.coef});
      } else {
        const AuxMap& map = cb.aux.at(t.var - num_entries);
        shift += t.coef * map.constant;
        for (const auto& [v, w] : map.terms) al.emplace_back(v, t.coef * w);
      }
    }
    cb.add_row(r.row.tag, std::move(a), std::move(al), shift, r.row.lower, r.row.upper);
  }
  for (const auto& c : inst.extra_socp) {
    if (!c.implied) throw ConeUnsupported("reference solve does not accept non-implied cone row '" + c.cone.tag + "'");
  }
  cb.form.c_l = Eigen::Map<const Vector>(cb.lp_cost.data(), static_cast<Eigen::Index>(cb.lp_cost.size()));

  const IpmResult r = solve_conic(cb.form, opts.ipm);

  SolveReport rep;
  rep.backend = "conic-ipm";
  rep.iterations = r.iterations;
  rep.primal_X = SymMatrix(r.X);
  const double base = sign * cb.constant + inst.offset;
  rep.objective = sign * r.primal_obj + base;
  rep.dual_objective = sign * r.dual_obj + base;
  rep.aux = Vector::Zero(static_cast<Eigen::Index>(inst.aux.size()));
  for (std::size_t k = 0; k < cb.aux.size(); ++k) {
    double v = cb.aux[k].constant;
    for (const auto& [j, w] : cb.aux[k].terms) v += w * r.x(j);
    rep.aux(static_cast<Eigen::Index>(k)) = v;
  }
  Matrix slack = inst.objective.dense();
  for (std::size_t k = 0; k < cb.tags.size(); ++k) {
    const double y = sign * r.y(static_cast<Eigen::Index>(k));
    if (cb.tags[k].empty()) continue;
    rep.duals[cb.tags[k]] = y;
    for (const auto& e : cb.form.A[k]) {
      slack(e.i, e.j) -= y * e.v;
      if (e.i != e.j) slack(e.j, e.i) -= y * e.v;
    }
  }
  rep.dual_slack = SymMatrix(std::move(slack));
  rep.status = r.status;
  if (rep.optimal()) {
    const double lmin = eig_decompose(*rep.primal_X).min_value();
    if (lmin < -opts.tol) rep.status = SolveStatus::NumericalFailure;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

double optimal_cutset_check(const SdpInstance& inst, const SolveReport& ref, const SolverOptions& opts) {
  SymMatrix slack = inst.objective;
  if (ref.dual_slack) {
    slack = *ref.dual_slack;
  } else {
    Matrix s = inst.objective.dense();
    for (const auto& c : inst.constraints) {
      auto it = ref.duals.find(c.tag);
      if (it == ref.duals.end()) throw std::invalid_argument("reference report lacks dual for '" + c.tag + "'");
      s -= it->second * c.dense(inst.dim()).dense();
    }
    slack = SymMatrix(std::move(s));
  }
  const SolveReport rep = solve(build_LS(inst, CutSet::eigenbasis(slack)), opts);
  if (!rep.optimal()) {
    throw NumericalFailure(std::string("optimal cut set relaxation ended with status ") + to_string(rep.status));
  }
  return std::abs(rep.objective - ref.objective);
}

bool trace_monotone(const std::vector<std::pair<std::size_t, double>>& trace, Sense sense, double rel_tol) {
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const double prev = trace[k - 1].second;
    const double cur = trace[k].second;
    const double slack = rel_tol * std::max(1.0, std::abs(prev));
    if (sense == Sense::Maximize ? cur > prev + slack : cur < prev - slack) return false;
  }
  return true;
}

}  // namespace sdprelax
