#include "helpers.hpp"

#include <sdprelax/engine.hpp>
#include <sdprelax/spca.hpp>

#include <doctest.h>

#include <set>

using namespace sdprelax;
using namespace testing;

namespace {

std::vector<int> one_based(const std::vector<int>& s) {
  std::vector<int> r;
  for (int i : s) r.push_back(i + 1);
  return r;
}

SolveReport report_with(const SymMatrix& x) {
  SolveReport r;
  r.status = SolveStatus::Optimal;
  r.primal_X = x;
  return r;
}

CovMatrix diag_cov(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return CovMatrix(SymMatrix::diagonal(v));
}

double l1_norm(const SymMatrix& x) { return x.dense().cwiseAbs().sum(); }

}  // namespace

TEST_SUITE("spca") {
  TEST_CASE("covariance validation") {
    Matrix a(2, 2);
    a << 1, 2, 2, 1;
    CHECK_THROWS_AS(CovMatrix(SymMatrix(a)), InvalidMatrix);
    CHECK_NOTHROW(CovMatrix::unchecked(SymMatrix(a)));
    CHECK(CovMatrix(SymMatrix::identity(3)).dim() == 3);
  }

  TEST_CASE("LSPCA closed forms") {
    const CovMatrix i3(SymMatrix::identity(3));
    const SolveReport r = solve(build_LSPCA(i3, 1, CutSet(3), 1.0));
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(1.0));

    const CovMatrix d = diag_cov({3, 1});
    const SolveReport s = solve(build_LSPCA(d, 1, CutSet::eigenbasis(d.matrix()), 1.0));
    REQUIRE(s.optimal());
    CHECK(s.objective == doctest::Approx(3.0));
    CHECK((*s.primal_X)(0, 0) == doctest::Approx(1.0));
    CHECK((*s.primal_X)(1, 1) == doctest::Approx(0.0));

    CHECK_THROWS_AS(build_LSPCA(d, 0, CutSet(2), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_LSPCA(d, 3, CutSet(2), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_LSPCA(d, 1, CutSet(2), 1.5), std::invalid_argument);
  }

  TEST_CASE("LSPCA optima satisfy trace and l1 rows") {
    Rng rng(4);
    for (int t = 0; t < 5; ++t) {
      const CovMatrix c = wishart_covariance(8, 1.0, rng.next_u64());
      for (int k : {1, 3, 5}) {
        const SolveReport r = solve(build_LSPCA(c, k, CutSet::eigenbasis(c.matrix()), 1.0));
        REQUIRE(r.optimal());
        CHECK(r.primal_X->trace() == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(l1_norm(*r.primal_X) <= k + 1e-6);
        const SolveReport ref = spca_reference(c, k);
        REQUIRE(ref.optimal());
        CHECK(r.objective >= ref.objective - 1e-6 * std::max(1.0, ref.objective));
      }
    }
  }

  TEST_CASE("pairwise rows are valid for PSD matrices only up to alpha = 1") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
      const int n = 2 + static_cast<int>(rng.below(6));
      SymMatrix x = random_correlation(n, 1 + static_cast<int>(rng.below(n)), rng);
      x = (1.0 / n) * x;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          CHECK(x(i, i) + x(j, j) - 2 * x(i, j) >= -1e-8);
          CHECK(x(i, i) + x(j, j) + 2 * x(i, j) >= -1e-8);
        }
    }
    // J/2 is PSD with unit trace, yet violates the rows at sqrt(2).
    const SymMatrix j2(Matrix::Constant(2, 2, 0.5));
    CHECK(eig_decompose(j2).min_value() >= -1e-12);
    CHECK(j2(0, 0) + j2(1, 1) - 2 * std::sqrt(2.0) * j2(0, 1) < -0.4);
    // The exact solve keeps the rows only when they are not implied.
    const SdpInstance at1 = spca_instance(CovMatrix(j2), 1, 1.0);
    const SdpInstance at2 = spca_instance(CovMatrix(j2), 1, std::sqrt(2.0));
    for (const auto& r : at1.extra_linear)
      if (r.row.tag.rfind("pair", 0) == 0) CHECK(r.implied);
    for (const auto& r : at2.extra_linear)
      if (r.row.tag.rfind("pair", 0) == 0) CHECK_FALSE(r.implied);
  }

  TEST_CASE("extract_component") {
    const CovMatrix c(SymMatrix::identity(3));
    const SparseComponent e1 = extract_component(report_with(SymMatrix::outer(Vector::Unit(3, 0))), 1, c);
    CHECK(e1.support == std::vector<int>{0});
    CHECK(e1.loading(0) == doctest::Approx(1.0));
    CHECK(e1.objective == doctest::Approx(1.0));

    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
      const SymMatrix x = psd_projection(random_symmetric(9, rng));
      for (int k = 1; k <= 9; k += 2) {
        const SparseComponent s = extract_component(report_with(x), k, CovMatrix(SymMatrix::identity(9)));
        CHECK(s.support.size() <= static_cast<std::size_t>(k));
        CHECK(s.loading.norm() == doctest::Approx(1.0).epsilon(1e-8));
        int nz = 0;
        for (int i = 0; i < 9; ++i) nz += s.loading(i) != 0.0;
        CHECK(nz == static_cast<int>(s.support.size()));
        Eigen::Index arg;
        s.loading.cwiseAbs().maxCoeff(&arg);
        CHECK(s.loading(arg) > 0);
      }
    }
  }

  TEST_CASE("deflation") {
    const SparseComponent x{Vector::Unit(2, 0), {0}, 0};
    CHECK(deflate(CovMatrix(SymMatrix::identity(2)), x).matrix().dense() == Vector(Vector::Unit(2, 1)).asDiagonal().toDenseMatrix());
    const CovMatrix d2 = deflate(diag_cov({3, 1}), x);
    CHECK(d2.matrix()(0, 0) == doctest::Approx(0.0));
    CHECK(d2.matrix()(1, 1) == doctest::Approx(1.0));

    Rng rng(5);
    const CovMatrix c = wishart_covariance(6, 1.0, 3);
    for (int t = 0; t < 10; ++t) {
      Vector v(6);
      for (int i = 0; i < 6; ++i) v(i) = rng.normal();
      v.normalize();
      const CovMatrix dc = deflate(c, {v, {}, c.matrix().quad(v)});
      CHECK(std::abs(dc.matrix().quad(v)) <= 1e-8 * std::max(1.0, c.matrix().frobenius_norm()));
    }
  }

  TEST_CASE("synthetic recovery on the true covariance") {
    const CovMatrix c = synthetic_covariance();
    const auto rounds = sparse_pca(c, {4, 4});
    REQUIRE(rounds.size() == 2);
    CHECK(one_based(rounds[0].component.support) == std::vector<int>{5, 6, 7, 8});
    CHECK(one_based(rounds[1].component.support) == std::vector<int>{1, 2, 3, 4});
  }

  TEST_CASE("identity covariance gives distinct singletons") {
    const auto rounds = sparse_pca(CovMatrix(SymMatrix::identity(4)), {1, 1});
    REQUIRE(rounds.size() == 2);
    REQUIRE(rounds[0].component.support.size() == 1);
    REQUIRE(rounds[1].component.support.size() == 1);
    CHECK(rounds[0].component.support != rounds[1].component.support);
    CHECK_THROWS_AS(sparse_pca(CovMatrix(SymMatrix::identity(4)), {}), std::invalid_argument);
  }

  TEST_CASE("Pit props") {
    const std::string text = read_text_file(fixture("pitprops.csv"));
    const std::vector<std::string> names = csv_header(text);
    const auto rounds = sparse_pca(CovMatrix(parse_csv_matrix(text)), {5, 2, 2});
    REQUIRE(rounds.size() == 3);
    auto named = [&](const SparseComponent& s) {
      std::set<std::string> r;
      for (int i : s.support) r.insert(names[i]);
      return r;
    };
    CHECK(rounds[0].component.support.size() == 5);
    CHECK(named(rounds[1].component) == std::set<std::string>{"moist", "testsg"});
    const std::set<std::string> allowed{"testsg", "ringtop", "ringbut"};
    for (const auto& n : named(rounds[2].component)) CHECK(allowed.count(n) == 1);
  }

  TEST_CASE("oracle policy adds cuts and stays above the reference") {
    const CovMatrix c = wishart_covariance(10, 1.0, 8);
    SpcaOptions o;
    o.policy = CutPolicy::Hybrid;
    o.budget = 20;
    o.batch = 5;
    const auto rounds = sparse_pca(c, {3}, o);
    REQUIRE(rounds.size() == 1);
    CHECK(trace_monotone(rounds[0].trace, Sense::Maximize));
    const SolveReport ref = spca_reference(c, 3);
    CHECK(rounds[0].report.objective >= ref.objective - 1e-6 * ref.objective);
  }

  TEST_CASE("explained variance") {
    const CovMatrix c = wishart_covariance(6, 1.0, 2);
    const EigenDecomposition e = eig_decompose(c.matrix());
    std::vector<SparseComponent> all;
    for (int i = 0; i < 6; ++i) all.push_back({e.vectors.col(i), {}, e.values(i)});
    CHECK(explained_variance(c, all) == doctest::Approx(1.0));
    CHECK(explained_variance(c, {all[0]}) == doctest::Approx(e.values(0) / c.matrix().trace()));
    std::vector<SparseComponent> dup{all[0], all[0]};
    CHECK(explained_variance(c, dup) == doctest::Approx(e.values(0) / c.matrix().trace()));
    CHECK_THROWS_AS(explained_variance(c, {}), std::invalid_argument);
  }

  TEST_CASE("ADMM reference agrees with the interior-point solve") {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const CovMatrix c = wishart_covariance(7, 1.0, s);
      const SolveReport admm = spca_reference(c, 2);
      const SolveReport ipm = reference_sdp(spca_instance(c, 2, 1.0));
      REQUIRE(admm.optimal());
      REQUIRE(ipm.optimal());
      CHECK(admm.objective == doctest::Approx(ipm.objective).epsilon(1e-5));
      CHECK(admm.dual_objective >= admm.objective - 1e-9);
      CHECK(admm.primal_X->trace() == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(l1_norm(*admm.primal_X) <= 2 + 1e-9);
    }
  }

  TEST_CASE("generators are seed-deterministic") {
    CHECK(wishart_covariance(5, 2.0, 1).matrix().dense() == wishart_covariance(5, 2.0, 1).matrix().dense());
    CHECK(synthetic_sample_covariance(100, 3).matrix().dense() ==
          synthetic_sample_covariance(100, 3).matrix().dense());
    CHECK(synthetic_covariance().dim() == 10);
  }
}
