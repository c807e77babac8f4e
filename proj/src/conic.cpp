#include <sdprelax/conic.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sdprelax {

namespace {

struct FullEntry {
  int a;
  int b;
  double u;
};

std::vector<FullEntry> expand(const std::vector<SymEntry>& a) {
  std::vector<FullEntry> out;
  out.reserve(2 * a.size());
  for (const auto& e : a) {
    out.push_back({e.i, e.j, e.v});
    if (e.i != e.j) out.push_back({e.j, e.i, e.v});
  }
  return out;
}

// <A, H> for a general (not necessarily symmetric) H.
double apply_op(const std::vector<FullEntry>& a, const Matrix& h) {
  double s = 0.0;
  for (const auto& e : a) s += e.u * h(e.a, e.b);
  return s;
}

void accumulate(const std::vector<FullEntry>& a, double y, Matrix& out) {
  for (const auto& e : a) out(e.a, e.b) += y * e.u;
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Largest alpha with X + alpha dX PSD, or +inf.
double psd_step(const Matrix& x, const Matrix& dx) {
  if (x.rows() == 0) return kInf;
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Matrix linv_dx = llt.matrixL().solve(dx);
  const Matrix w = llt.matrixL().solve(linv_dx.transpose());
  const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(sym(w), Eigen::EigenvaluesOnly).eigenvalues()(0);
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double lp_step(const Vector& x, const Vector& dx) {
  double a = kInf;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (dx(k) < 0.0) a = std::min(a, -x(k) / dx(k));
  }
  return a;
}

}  // namespace

IpmResult solve_conic(const ConicForm& f, const IpmOptions& opts) {
  const Eigen::Index n = f.n;
  const int nl = f.nl;
  const int m = f.m();
  const double N = static_cast<double>(n + nl);

  std::vector<std::vector<FullEntry>> full(m);
  std::vector<double> anorm(m, 0.0);
  std::vector<char> dense_row(m, 0);
  for (int k = 0; k < m; ++k) {
    full[k] = expand(f.A[k]);
    double s = 0.0;
    for (const auto& e : full[k]) s += e.u * e.u;
    for (const auto& [j, v] : f.A_l[k]) s += v * v;
    anorm[k] = std::sqrt(s);
    dense_row[k] = full[k].size() > static_cast<std::size_t>(2 * n);
  }
  // LP block, column-wise.
  std::vector<std::vector<std::pair<int, double>>> lp_cols(nl);
  for (int k = 0; k < m; ++k) {
    for (const auto& [j, v] : f.A_l[k]) lp_cols[j].emplace_back(k, v);
  }

  const double cnorm = std::sqrt(f.C.squaredNorm() + (nl ? f.c_l.squaredNorm() : 0.0));
  const double bnorm = f.b.norm();

  double xi = std::max(10.0, std::sqrt(static_cast<double>(n + nl)));
  double eta = xi;
  for (int k = 0; k < m; ++k) {
    xi = std::max(xi, static_cast<double>(n + nl) * (1.0 + std::abs(f.b(k))) / (1.0 + anorm[k]));
    eta = std::max(eta, 1.0 + anorm[k]);
  }
  eta = std::max(eta, 1.0 + cnorm);

  IpmResult r;
  Matrix X = xi * Matrix::Identity(n, n);
  Matrix Z = eta * Matrix::Identity(n, n);
  Vector x = Vector::Constant(nl, xi);
  Vector z = Vector::Constant(nl, eta);
  Vector y = Vector::Zero(m);

  auto op_A = [&](const Matrix& h, const Vector& hl) {
    Vector out(m);
    for (int k = 0; k < m; ++k) {
      double s = apply_op(full[k], h);
      for (const auto& [j, v] : f.A_l[k]) s += v * hl(j);
      out(k) = s;
    }
    return out;
  };
  auto op_AT = [&](const Vector& w, Matrix& mat, Vector& vec) {
    mat = Matrix::Zero(n, n);
    vec = Vector::Zero(nl);
    for (int k = 0; k < m; ++k) {
      if (w(k) == 0.0) continue;
      accumulate(full[k], w(k), mat);
      for (const auto& [j, v] : f.A_l[k]) vec(j) += w(k) * v;
    }
  };

  double gamma = 0.9;
  double best_metric = kInf;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    Matrix aty;
    Vector aty_l;
    op_AT(y, aty, aty_l);
    const Vector rp = f.b - op_A(X, x);
    const Matrix rd = f.C - Z - aty;
    const Vector rdl = nl ? Vector(f.c_l - z - aty_l) : Vector();
    const double pobj = (f.C.cwiseProduct(X)).sum() + (nl ? f.c_l.dot(x) : 0.0);
    const double dobj = f.b.dot(y);
    const double xz = (X.cwiseProduct(Z)).sum() + (nl ? x.dot(z) : 0.0);
    const double mu = xz / N;

    r.primal_infeas = rp.norm() / (1.0 + bnorm);
    r.dual_infeas = std::sqrt(rd.squaredNorm() + (nl ? rdl.squaredNorm() : 0.0)) / (1.0 + cnorm);
    r.rel_gap = std::max(std::abs(pobj - dobj), xz) / (1.0 + std::abs(pobj) + std::abs(dobj));
    r.primal_obj = pobj;
    r.dual_obj = dobj;
    r.iterations = iter;
    const double metric = std::max({r.rel_gap / opts.gap_tol, r.primal_infeas / opts.feas_tol,
                                    r.dual_infeas / opts.feas_tol});
    if (metric < best_metric) {
      best_metric = metric;
      r.X = X;
      r.Z = Z;
      r.x = x;
      r.z = z;
      r.y = y;
    }
    if (metric <= 1.0) {
      r.status = SolveStatus::Optimal;
      return r;
    }
    if (iter == opts.max_iter) break;

    Eigen::LLT<Matrix> zllt(Z);
    if (zllt.info() != Eigen::Success) break;
    const Matrix zinv = sym(zllt.solve(Matrix::Identity(n, n)));
    const Vector dl = nl ? Vector(x.cwiseQuotient(z)) : Vector();

    // Schur complement M_ij = <A_i, X A_j Z^-1> + a_i^T diag(x/z) a_j.
    Matrix M = Matrix::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      if (dense_row[j]) {
        Matrix aj = Matrix::Zero(n, n);
        accumulate(full[j], 1.0, aj);
        const Matrix g = X * aj * zinv;
        for (int i = 0; i < m; ++i) M(i, j) = M(j, i) = apply_op(full[i], g);
        continue;
      }
      for (int i = 0; i <= j; ++i) {
        if (dense_row[i]) continue;
        double s = 0.0;
        for (const auto& p : full[i]) {
          for (const auto& q : full[j]) s += p.u * q.u * X(p.a, q.a) * zinv(q.b, p.b);
        }
        M(i, j) = M(j, i) = s;
      }
    }
    for (int c = 0; c < nl; ++c) {
      for (const auto& [i, vi] : lp_cols[c]) {
        for (const auto& [j, vj] : lp_cols[c]) M(i, j) += vi * dl(c) * vj;
      }
    }
    Eigen::LLT<Matrix> mllt;
    double reg = 0.0;
    const double mscale = std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 8; ++attempt) {
      mllt.compute(reg == 0.0 ? M : Matrix(M + reg * mscale * Matrix::Identity(m, m)));
      if (mllt.info() == Eigen::Success) break;
      reg = reg == 0.0 ? 1e-14 : reg * 100.0;
    }
    if (mllt.info() != Eigen::Success) break;

    const Matrix x_rd_zinv = X * rd * zinv;
    auto direction = [&](double sigma_mu, const Matrix* corr, const Vector* corr_l, Matrix& dX,
                         Matrix& dZ, Vector& dx, Vector& dz, Vector& dy) {
      Matrix h = sigma_mu * zinv - X - x_rd_zinv;
      if (corr) h -= *corr * zinv;
      Vector hl;
      if (nl) {
        hl = sigma_mu * z.cwiseInverse() - x - dl.cwiseProduct(rdl);
        if (corr_l) hl -= corr_l->cwiseQuotient(z);
      }
      dy = mllt.solve(Vector(rp - op_A(h, hl)));
      Matrix at;
      Vector at_l;
      op_AT(dy, at, at_l);
      dZ = rd - at;
      Matrix t = sigma_mu * Matrix::Identity(n, n) - X * dZ;
      if (corr) t -= *corr;
      dX = sym(t * zinv) - X;
      if (nl) {
        dz = rdl - at_l;
        dx = sigma_mu * z.cwiseInverse() - x - dl.cwiseProduct(dz);
        if (corr_l) dx -= corr_l->cwiseQuotient(z);
      }
    };

    Matrix dX, dZ;
    Vector dx, dz, dy;
    direction(0.0, nullptr, nullptr, dX, dZ, dx, dz, dy);
    double ap = std::min(1.0, std::min(psd_step(X, dX), nl ? lp_step(x, dx) : kInf));
    double ad = std::min(1.0, std::min(psd_step(Z, dZ), nl ? lp_step(z, dz) : kInf));
    const Matrix Xa = X + ap * dX;
    const Matrix Za = Z + ad * dZ;
    double xz_aff = (Xa.cwiseProduct(Za)).sum();
    if (nl) xz_aff += (x + ap * dx).dot(z + ad * dz);
    const double ratio = std::max(0.0, xz_aff) / xz;
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::min(1.0, std::pow(ratio, expon));

    const Matrix corr = dX * dZ;
    const Vector corr_l = nl ? Vector(dx.cwiseProduct(dz)) : Vector();
    direction(sigma * mu, &corr, nl ? &corr_l : nullptr, dX, dZ, dx, dz, dy);
    ap = std::min(1.0, gamma * std::min(psd_step(X, dX), nl ? lp_step(x, dx) : kInf));
    ad = std::min(1.0, gamma * std::min(psd_step(Z, dZ), nl ? lp_step(z, dz) : kInf));
    if (ap < 1e-10 && ad < 1e-10) break;

    X = sym(X + ap * dX);
    Z = sym(Z + ad * dZ);
    y += ad * dy;
    if (nl) {
      x += ap * dx;
      z += ad * dz;
    }
    gamma = 0.9 + 0.09 * std::min(ap, ad);
  }

  // Did not meet the requested tolerances; keep the best iterate.
  X = r.X;
  Z = r.Z;
  {
    Matrix aty;
    Vector aty_l;
    op_AT(r.y, aty, aty_l);
    r.primal_obj = (f.C.cwiseProduct(X)).sum() + (nl ? f.c_l.dot(r.x) : 0.0);
    r.dual_obj = f.b.dot(r.y);
    r.primal_infeas = (f.b - op_A(X, r.x)).norm() / (1.0 + bnorm);
    const Matrix rd = f.C - Z - aty;
    const double rdl2 = nl ? (f.c_l - r.z - aty_l).squaredNorm() : 0.0;
    r.dual_infeas = std::sqrt(rd.squaredNorm() + rdl2) / (1.0 + cnorm);
    const double xz = (X.cwiseProduct(Z)).sum() + (nl ? r.x.dot(r.z) : 0.0);
    r.rel_gap = std::max(std::abs(r.primal_obj - r.dual_obj), xz) /
                (1.0 + std::abs(r.primal_obj) + std::abs(r.dual_obj));
  }
  r.status = best_metric <= 100.0 ? SolveStatus::Optimal : SolveStatus::NumericalFailure;
  return r;
}

}  // namespace sdprelax
