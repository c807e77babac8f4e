#include "helpers.hpp"

#include <doctest.h>

using namespace sdprelax;
using namespace testing;

namespace {

void check_decomposition(const SymMatrix& a, const EigenDecomposition& e) {
  const Eigen::Index n = a.dim();
  const double scale = std::max(1.0, a.frobenius_norm());
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(std::abs(e.vectors.col(i).norm() - 1.0) <= 1e-10);
    CHECK((a.dense() * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() <= 1e-8 * scale);
    for (Eigen::Index j = i + 1; j < n; ++j) CHECK(std::abs(e.vectors.col(i).dot(e.vectors.col(j))) <= 1e-8);
    if (i + 1 < n) CHECK(e.values(i) >= e.values(i + 1));
  }
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("symmetric matrix construction") {
    SUBCASE("small asymmetry is absorbed") {
      Matrix a(2, 2);
      a << 1, 2 + 1e-9, 2, 1;
      const SymMatrix s(a);
      CHECK(s(0, 1) == doctest::Approx(2.0 + 5e-10).epsilon(1e-15));
      CHECK(s(0, 1) == s(1, 0));
      CHECK(s.max_asymmetry() == doctest::Approx(1e-9).epsilon(1e-3));
    }
    SUBCASE("large asymmetry is rejected") {
      Matrix a(2, 2);
      a << 1, 2, 0, 1;
      CHECK_THROWS_AS(SymMatrix{a}, InvalidMatrix);
    }
    SUBCASE("non-square and empty matrices are rejected") {
      CHECK_THROWS_AS(SymMatrix(Matrix(2, 3)), InvalidMatrix);
      CHECK_THROWS_AS(SymMatrix(Matrix(0, 0)), InvalidMatrix);
    }
    SUBCASE("operators") {
      const SymMatrix i = SymMatrix::identity(3);
      const SymMatrix o = SymMatrix::outer(Vector::Ones(3));
      CHECK(i.inner(o) == doctest::Approx(3.0));
      CHECK(o.quad(Vector::Ones(3)) == doctest::Approx(9.0));
      CHECK((o - i).trace() == doctest::Approx(0.0));
      CHECK((2.0 * i + o)(0, 0) == doctest::Approx(3.0));
    }
  }

  TEST_CASE("eig_decompose on closed-form spectra") {
    SUBCASE("identity") {
      const EigenDecomposition e = eig_decompose(SymMatrix::identity(3));
      for (Eigen::Index i = 0; i < 3; ++i) CHECK(e.values(i) == doctest::Approx(1.0));
      check_decomposition(SymMatrix::identity(3), e);
    }
    SUBCASE("K2 adjacency") {
      const EigenDecomposition e = eig_decompose(k2().adjacency());
      CHECK(e.values(0) == doctest::Approx(1.0));
      CHECK(e.values(1) == doctest::Approx(-1.0));
      const double r = 1.0 / std::sqrt(2.0);
      CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(r));
      CHECK(e.vectors(0, 0) * e.vectors(1, 0) > 0.0);
      CHECK(e.vectors(0, 1) * e.vectors(1, 1) < 0.0);
    }
    SUBCASE("Petersen adjacency: 3, 1 (x5), -2 (x4)") {
      const SymMatrix a = petersen().adjacency();
      const EigenDecomposition e = eig_decompose(a);
      check_decomposition(a, e);
      CHECK(e.values(0) == doctest::Approx(3.0));
      for (int i = 1; i <= 5; ++i) CHECK(e.values(i) == doctest::Approx(1.0));
      for (int i = 6; i <= 9; ++i) CHECK(e.values(i) == doctest::Approx(-2.0));
      // Power sums against closed walks: trace 0, trace A^2 = 2m, trace A^3 = 6 * triangles = 0.
      CHECK(e.values.sum() == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(e.values.squaredNorm() == doctest::Approx(30.0));
      CHECK(e.values.array().cube().sum() == doctest::Approx((a.dense() * a.dense() * a.dense()).trace()));
    }
    SUBCASE("non-finite input") {
      Matrix a = Matrix::Identity(2, 2);
      a(0, 0) = std::nan("");
      CHECK_THROWS_AS(eig_decompose(SymMatrix(a)), InvalidMatrix);
    }
  }

  TEST_CASE("eigendecomposition properties on random matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.below(30));
      const SymMatrix a = random_symmetric(n, rng);
      const EigenDecomposition e = eig_decompose(a);
      check_decomposition(a, e);
      const Matrix recon = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
      CHECK((recon - a.dense()).norm() <= 1e-7 * a.frobenius_norm());
      CHECK((e.vectors * e.vectors.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
      const auto cut = min_eig_cut(a, 1e-6);
      CHECK(cut.has_value() == (e.min_value() < -1e-6));
    }
  }

  TEST_CASE("eig_decompose is deterministic") {
    Rng rng(3);
    const SymMatrix a = random_symmetric(25, rng);
    const EigenDecomposition e1 = eig_decompose(a);
    const EigenDecomposition e2 = eig_decompose(a);
    CHECK(e1.values == e2.values);
    CHECK(e1.vectors == e2.vectors);
  }

  TEST_CASE("min_eig_cut") {
    CHECK_FALSE(min_eig_cut(SymMatrix::identity(2), 1e-9).has_value());

    Vector d(2);
    d << 1.0, -0.5;
    const auto c = min_eig_cut(SymMatrix::diagonal(d), 1e-9);
    REQUIRE(c.has_value());
    CHECK(c->value == doctest::Approx(-0.5));
    CHECK(std::abs(c->vector(1)) == doctest::Approx(1.0));
    CHECK(c->vector(0) == doctest::Approx(0.0));

    const auto k = min_eig_cut(k2().adjacency(), 1e-9);
    REQUIRE(k.has_value());
    CHECK(k->value == doctest::Approx(-1.0));
    CHECK(k2().adjacency().quad(k->vector) == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(k->vector(0) * k->vector(1) < 0.0);

    // Tolerance boundary.
    d << 1.0, -1e-7;
    CHECK_FALSE(min_eig_cut(SymMatrix::diagonal(d), 1e-6).has_value());
    CHECK(min_eig_cut(SymMatrix::diagonal(d), 1e-8).has_value());
  }

  TEST_CASE("negative_eig_cuts returns the most negative first") {
    Vector d(4);
    d << -1.0, 2.0, -3.0, -0.5;
    const auto cuts = negative_eig_cuts(SymMatrix::diagonal(d), 1e-9, 2);
    REQUIRE(cuts.size() == 2);
    CHECK(cuts[0].value == doctest::Approx(-3.0));
    CHECK(cuts[1].value == doctest::Approx(-1.0));
    CHECK(negative_eig_cuts(SymMatrix::diagonal(d), 1e-9, 10).size() == 3);
  }

  TEST_CASE("psd_projection clips negative eigenvalues") {
    Rng rng(5);
    const SymMatrix a = random_symmetric(8, rng);
    const SymMatrix p = psd_projection(a);
    CHECK(eig_decompose(p).min_value() >= -1e-10);
    const SymMatrix q = psd_projection(p);
    CHECK((q.dense() - p.dense()).norm() <= 1e-9);
  }
}
