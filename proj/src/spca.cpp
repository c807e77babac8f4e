#include <sdprelax/rng.hpp>
#include <sdprelax/spca.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace sdprelax {

CovMatrix::CovMatrix(SymMatrix c) : c_(std::move(c)) {
  if (!c_.all_finite()) throw InvalidMatrix("covariance matrix has non-finite entries");
  const double floor = -1e-8 * c_.frobenius_norm();
  const double lmin = eig_decompose(c_).min_value();
  if (lmin < floor) {
    throw InvalidMatrix("covariance matrix is not PSD (lambda_min = " + std::to_string(lmin) + ")");
  }
}

CovMatrix CovMatrix::unchecked(SymMatrix c) { return CovMatrix(std::move(c), Unchecked{}); }

SdpInstance spca_instance(const CovMatrix& c, int k, double alpha) {
  const Eigen::Index p = c.dim();
  if (k < 1 || k > p) throw std::invalid_argument("sparsity target k must lie in [1, " + std::to_string(p) + "]");
  if (!(alpha >= 0.0 && alpha <= std::sqrt(2.0) + 1e-12)) throw std::invalid_argument("alpha must lie in [0, sqrt(2)]");
  SdpInstance inst(c.matrix(), Sense::Maximize);
  inst.name = "spca";
  {
    MatrixConstraint tr{"trace", {}, RowSense::Equal, 1.0};
    for (Eigen::Index i = 0; i < p; ++i) tr.terms.push_back({i, i, 1.0});
    inst.constraints.push_back(std::move(tr));
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    inst.entry_bounds.push_back({i, i, 0.0, 1.0, {}});
    for (Eigen::Index j = i + 1; j < p; ++j) inst.entry_bounds.push_back({i, j, -1.0, 1.0, {}});
  }
  LinearRow l1{"l1", {}, -kInf, static_cast<double>(k)};
  for (Eigen::Index i = 0; i < p; ++i) l1.terms.push_back({inst.entry_var(i, i), 1.0});
  const bool pair_implied = alpha <= 1.0;
  int t = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j, ++t) {
      const std::string pt = pair_tag(i, j);
      inst.aux.push_back({"t" + pt, 0.0, kInf, 0.0});
      const int tv = inst.aux_var(t);
      const int xv = inst.entry_var(i, j);
      l1.terms.push_back({tv, 2.0});
      inst.extra_linear.push_back({{"abs+:" + pt, {{tv, 1.0}, {xv, -1.0}}, 0.0, kInf}, false});
      inst.extra_linear.push_back({{"abs-:" + pt, {{tv, 1.0}, {xv, 1.0}}, 0.0, kInf}, false});
      const int di = inst.entry_var(i, i), dj = inst.entry_var(j, j);
      for (double s : {1.0, -1.0}) {
        inst.extra_linear.push_back(
            {{(s > 0 ? "pair+:" : "pair-:") + pt, {{di, 1.0}, {dj, 1.0}, {xv, 2.0 * s * alpha}}, 0.0, kInf},
             pair_implied});
      }
    }
  }
  inst.extra_linear.push_back({std::move(l1), false});
  return inst;
}

RelaxationModel build_LSPCA(const CovMatrix& c, int k, const CutSet& S, double alpha) {
  return build_LS(spca_instance(c, k, alpha), S);
}

namespace {

SparseComponent truncate(const Vector& v, int k, const CovMatrix& c) {
  const Eigen::Index p = v.size();
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(v(a)) > std::abs(v(b)); });
  SparseComponent comp;
  comp.loading = Vector::Zero(p);
  for (int r = 0; r < std::min<Eigen::Index>(k, p); ++r) {
    if (v(order[r]) != 0.0) comp.loading(order[r]) = v(order[r]);
  }
  const double norm = comp.loading.norm();
  if (!(norm > 0.0)) throw DegenerateComponent("top eigenvector of the relaxation solution is zero");
  comp.loading /= norm;
  Eigen::Index lead = 0;
  comp.loading.cwiseAbs().maxCoeff(&lead);
  if (comp.loading(lead) < 0.0) comp.loading = -comp.loading;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (comp.loading(i) != 0.0) comp.support.push_back(static_cast<int>(i));
  }
  comp.objective = c.matrix().quad(comp.loading);
  return comp;
}

}  // namespace

SparseComponent extract_component(const SolveReport& report, int k, const CovMatrix& c) {
  if (!report.primal_X) throw std::invalid_argument("extract_component needs a solved relaxation");
  if (report.primal_X->dim() != c.dim()) throw std::invalid_argument("solution dimension does not match C");
  if (k < 1) throw std::invalid_argument("k must be positive");
  const EigenDecomposition eig = eig_decompose(*report.primal_X);
  return truncate(eig.vectors.col(0), k, c);
}

CovMatrix deflate(const CovMatrix& c, const SparseComponent& comp) {
  const Vector& x = comp.loading;
  if (std::abs(x.norm() - 1.0) > 1e-8) throw std::invalid_argument("deflate needs a unit loading");
  const double v = c.matrix().quad(x);
  Matrix m = c.matrix().dense() - v * x * x.transpose();
  return CovMatrix::unchecked(SymMatrix(std::move(m)));
}

std::vector<SpcaRound> sparse_pca(const CovMatrix& c, const std::vector<int>& ks, const SpcaOptions& opts) {
  if (ks.empty()) throw std::invalid_argument("sparse_pca needs at least one sparsity target");
  std::vector<SpcaRound> rounds;
  CovMatrix cur = c;
  for (int k : ks) {
    const SdpInstance inst = spca_instance(cur, k, opts.alpha);
    SpcaRound round;
    round.input = cur;
    const CutSet seed = opts.policy == CutPolicy::Oracle ? CutSet(cur.dim()) : CutSet::eigenbasis(cur.matrix());
    if (opts.policy == CutPolicy::Eigen) {
      round.report = solve(build_LS(inst, seed), opts.solver);
      round.cuts = seed.size();
      round.trace.emplace_back(seed.size(), round.report.objective);
    } else {
      CuttingPlaneOptions cp;
      cp.budget = opts.budget;
      cp.batch = opts.batch;
      cp.solver = opts.solver;
      CuttingPlaneResult res = cutting_plane(inst, seed, cp);
      round.report = std::move(res.report);
      round.cuts = res.cuts.size();
      round.trace = std::move(res.trace);
    }
    if (!round.report.primal_X) {
      throw NumericalFailure(std::string("sparse PCA relaxation ended with status ") + to_string(round.report.status));
    }
    // Scored against the original C so objectives are comparable across rounds.
    round.component = extract_component(round.report, k, c);
    cur = deflate(cur, round.component);
    rounds.push_back(std::move(round));
  }
  return rounds;
}

double explained_variance(const CovMatrix& c, const std::vector<SparseComponent>& comps) {
  if (comps.empty()) throw std::invalid_argument("explained_variance needs at least one component");
  const Eigen::Index r = static_cast<Eigen::Index>(comps.size());
  Matrix p(c.dim(), r);
  for (Eigen::Index j = 0; j < r; ++j) {
    if (comps[j].loading.size() != c.dim()) throw std::invalid_argument("loading dimension does not match C");
    p.col(j) = comps[j].loading;
  }
  const Matrix g = p.transpose() * c.matrix().dense() * p;
  const double total = c.matrix().trace();
  if (!(total > 0.0)) throw InvalidMatrix("covariance matrix has zero total variance");
  // Cholesky of g, skipping columns whose residual variance vanishes.
  Matrix l = Matrix::Zero(r, r);
  std::vector<bool> kept(r, false);
  double explained = 0.0;
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index q = 0; q < j; ++q) {
      if (!kept[q]) continue;
      double s = g(j, q);
      for (Eigen::Index m = 0; m < q; ++m) s -= l(j, m) * l(q, m);
      l(j, q) = s / l(q, q);
    }
    double d = g(j, j);
    for (Eigen::Index m = 0; m < j; ++m) d -= l(j, m) * l(j, m);
    if (d > 1e-12 * total) {
      kept[j] = true;
      l(j, j) = std::sqrt(d);
      explained += d;
    } else {
      l.row(j).setZero();
    }
  }
  return std::clamp(explained / total, 0.0, 1.0);
}

namespace {

// Euclidean projection of v onto {x >= 0, sum x = 1}.
Vector project_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

// Projection onto {X PSD, Tr X = 1}.
Matrix project_spectraplex(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector lam = project_simplex(es.eigenvalues());
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

// Projection onto {Y : sum |Y_ij| <= radius}.
Matrix project_l1_ball(const Matrix& m, double radius) {
  const double total = m.cwiseAbs().sum();
  if (total <= radius) return m;
  std::vector<double> u(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) u[i] = std::abs(m.data()[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - radius) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return m.unaryExpr([theta](double x) { return std::copysign(std::max(std::abs(x) - theta, 0.0), x); });
}

}  // namespace

SolveReport spca_reference(const CovMatrix& c, int k, const SpcaReferenceOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index p = c.dim();
  if (k < 1 || k > p) throw std::invalid_argument("sparsity target k must lie in [1, " + std::to_string(p) + "]");
  const Matrix& cm = c.matrix().dense();
  Eigen::Index best_diag = 0;
  cm.diagonal().maxCoeff(&best_diag);
  const double scale = std::max(1.0, cm.norm() / static_cast<double>(p));
  double rho = opts.rho * scale;

  Matrix y = Matrix::Zero(p, p);
  y(best_diag, best_diag) = 1.0;
  Matrix u = Matrix::Zero(p, p);
  double lower = -kInf, upper = kInf;
  Matrix best_x = y;

  SolveReport rep;
  rep.backend = "admm-spectraplex-l1";
  rep.status = SolveStatus::IterationLimit;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const Matrix x = project_spectraplex(y - u + cm / rho);
    const Matrix y_prev = y;
    const Matrix xr = opts.relaxation * x + (1.0 - opts.relaxation) * y_prev;
    y = project_l1_ball(xr + u, static_cast<double>(k));
    u += xr - y;

    if (it % 10 == 0 || it + 1 == opts.max_iter) {
      // Feasible point: blend x towards e_i e_i^T until the l1 budget holds.
      const double s = x.cwiseAbs().sum();
      double value;
      Matrix xf;
      if (s <= k) {
        xf = x;
      } else {
        const double theta = (k - 1.0) / (s - 1.0);
        xf = theta * x;
        xf(best_diag, best_diag) += 1.0 - theta;
      }
      value = (cm.array() * xf.array()).sum();
      if (value > lower) {
        lower = value;
        best_x = xf;
      }
      // Any multiplier L gives max <C,X> <= lambda_max(C - L) + k ||L||_max.
      const Matrix lam = rho * u;
      Eigen::SelfAdjointEigenSolver<Matrix> es(cm - lam, Eigen::EigenvaluesOnly);
      upper = std::min(upper, es.eigenvalues()(p - 1) + k * lam.cwiseAbs().maxCoeff());
      if (upper - lower <= opts.rel_tol * std::max(1.0, std::abs(upper))) {
        rep.status = SolveStatus::Optimal;
        ++it;
        break;
      }
    }

    if (it % 10 != 9) continue;
    const double r_norm = (x - y).norm();
    const double s_norm = rho * (y - y_prev).norm();
    if (r_norm > 10.0 * s_norm) {
      rho *= 2.0;
      u /= 2.0;
    } else if (s_norm > 10.0 * r_norm) {
      rho /= 2.0;
      u *= 2.0;
    }
  }
  rep.objective = lower;
  rep.dual_objective = upper;
  rep.primal_X = SymMatrix(best_x);
  rep.iterations = it;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

CovMatrix synthetic_covariance() {
  constexpr double v1 = 290.0, v2 = 300.0;
  const double v3 = 0.09 * v1 + 0.925 * 0.925 * v2 + 1.0;
  const double c13 = -0.3 * v1, c23 = 0.925 * v2;
  auto factor = [](int i) { return i < 4 ? 0 : (i < 8 ? 1 : 2); };
  const double cov[3][3] = {{v1, 0.0, c13}, {0.0, v2, c23}, {c13, c23, v3}};
  Matrix m(10, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) m(i, j) = cov[factor(i)][factor(j)] + (i == j ? 1.0 : 0.0);
  }
  return CovMatrix(SymMatrix(std::move(m)));
}

CovMatrix synthetic_sample_covariance(int samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  Rng rng(seed);
  Matrix data(samples, 10);
  for (int s = 0; s < samples; ++s) {
    const double f1 = std::sqrt(290.0) * rng.normal();
    const double f2 = std::sqrt(300.0) * rng.normal();
    const double f3 = -0.3 * f1 + 0.925 * f2 + rng.normal();
    for (int i = 0; i < 10; ++i) data(s, i) = (i < 4 ? f1 : (i < 8 ? f2 : f3)) + rng.normal();
  }
  const Matrix centered = data.rowwise() - data.colwise().mean();
  return CovMatrix(SymMatrix(Matrix(centered.transpose() * centered / (samples - 1.0))));
}

CovMatrix wishart_covariance(int p, double variance, std::uint64_t seed) {
  if (p < 1 || !(variance > 0.0)) throw std::invalid_argument("wishart needs p >= 1 and variance > 0");
  Rng rng(seed);
  Matrix a(p, p);
  const double sd = std::sqrt(variance);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = sd * rng.normal();
  }
  return CovMatrix(SymMatrix(Matrix(a.transpose() * a)));
}

}  // namespace sdprelax
