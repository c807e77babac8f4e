#include "helpers.hpp"

#include <sdprelax/engine.hpp>
#include <sdprelax/maxcut.hpp>

#include <doctest.h>

using namespace sdprelax;
using namespace testing;

namespace {

double sp_value(const Graph& g, const CutSet& s) {
  const SolveReport r = solve(build_SP(g, s));
  REQUIRE(r.optimal());
  return cut_bound_from_raw(g, r.objective);
}

double sd_raw(const Graph& g, const CutSet& s) {
  const SolveReport r = solve(build_SD(g, s));
  REQUIRE(r.optimal());
  return r.objective;
}

std::vector<Graph> small_family() {
  std::vector<Graph> gs{k2(), cycle(5), petersen(), complete(5), star(4), cycle(8)};
  Rng rng(21);
  for (int k = 0; k < 4; ++k) gs.push_back(gen_er(12, 0.4, rng));
  return gs;
}

}  // namespace

TEST_SUITE("maxcut") {
  TEST_CASE("cut_value") {
    CHECK(cut_value(k2(), {1, -1}) == 1.0);
    CHECK(cut_value(cycle(5), {1, -1, 1, -1, 1}) == 4.0);
    CHECK(brute_force_maxcut(petersen()).value == 12.0);
    CHECK_THROWS_AS(cut_value(k2(), {1}), std::invalid_argument);

    Rng rng(1);
    const Graph g = gen_er(15, 0.5, rng);
    const Matrix w = g.adjacency().dense();
    for (int t = 0; t < 10; ++t) {
      std::vector<int> side(15);
      Vector s(15);
      for (int i = 0; i < 15; ++i) s(i) = side[i] = rng.bernoulli(0.5) ? 1 : -1;
      CHECK(cut_value(g, side) == doctest::Approx(g.m_total() / 2 - s.dot(w * s) / 4));
    }
  }

  TEST_CASE("SP values") {
    CHECK(sp_value(k2(), CutSet::eigenbasis(k2().adjacency())) == doctest::Approx(1.0));
    const double p = sp_value(petersen(), CutSet::eigenbasis(petersen().adjacency()));
    CHECK(p == doctest::Approx(12.5).epsilon(1e-5 / 12.5));
    for (const Graph& g : small_family()) CHECK(sp_value(g, CutSet(g.n())) <= g.m_total() + 1e-6);
  }

  TEST_CASE("SD values and assembled matrices") {
    const Graph g = k2();
    CutSet s = CutSet::eigenbasis(g.adjacency());
    s.add_all(CutSet::standard_basis(2));
    const SolveReport r = solve(build_SD(g, s));
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(2.0));
    CHECK(cut_bound_from_raw(g, r.objective) == doctest::Approx(1.0));
    const SymMatrix y = assemble_sd(s, r.aux);
    CHECK(eig_decompose(y).min_value() >= -1e-12);
    CHECK(y(0, 1) == doctest::Approx(-1.0));

    CHECK(sd_raw(petersen(), CutSet::eigenbasis(petersen().adjacency())) == doctest::Approx(20.0).epsilon(1e-5 / 20));
    CHECK_THROWS(build_SD(g, CutSet(2)));
  }

  TEST_CASE("SD lower bound from the non-positive spectrum") {
    for (const Graph& g : small_family()) {
      const EigenDecomposition e = eig_decompose(g.adjacency());
      double neg = 0;
      for (Eigen::Index i = 0; i < e.size(); ++i)
        if (e.values(i) <= 0) neg -= e.values(i);
      const double z = sd_raw(g, CutSet::eigenbasis(g.adjacency()));
      CHECK(z >= neg - 1e-6);
      CHECK(neg >= 0.5 * g.adjacency().frobenius_norm() - 1e-6);
    }
  }

  TEST_CASE("eigenvalue bound") {
    CHECK(eigenvalue_bound(k2()) == doctest::Approx(1.0));
    CHECK(eigenvalue_bound(petersen()) == doctest::Approx(12.5));
    CHECK(eigenvalue_bound(cycle(5)) == doctest::Approx(2.5 - 1.25 * cycle_min_eigenvalue(5)));
    CHECK(eigenvalue_bound(cycle(5)) == doctest::Approx(4.522542).epsilon(1e-6));
    for (const Graph& g : small_family())
      CHECK(sp_value(g, CutSet::eigenbasis(g.adjacency())) <= eigenvalue_bound(g) + 1e-6);
  }

  TEST_CASE("distance-regular graphs are tight") {
    std::vector<Graph> gs{petersen()};
    for (int k = 5; k <= 12; ++k) gs.push_back(cycle(k));
    for (int n = 3; n <= 8; ++n) gs.push_back(complete(n));
    for (const Graph& g : gs) {
      const CutSet s = CutSet::eigenbasis(g.adjacency());
      const double sp = sp_value(g, s);
      const double sd = cut_bound_from_raw(g, sd_raw(g, s));
      CHECK(std::abs(sp - sd) <= 1e-5 * sp);
    }
  }

  TEST_CASE("disconnected components: per-component certificate") {
    const Graph g = planted_instance(64, 4, 0, 3);
    CHECK(g.m_total() == 160.0);
    const Graph reg = [&] {
      std::vector<Edge> e;
      for (const Edge& x : g.edges())
        if (x.v < 48) e.push_back(x);
      return Graph(48, e);
    }();
    const double lam1 = eig_decompose(reg.adjacency()).min_value();
    const double lam2 = -8.0;  // K_{8,8}
    const SolveReport r = solve(build_SP(g, CutSet::eigenbasis(g.adjacency())));
    REQUIRE(r.optimal());
    CHECK(r.objective <= 48 * -lam1 + 16 * -lam2 + 1e-6);
  }

  TEST_CASE("planted instances") {
    const Graph g = planted_instance(64, 4, 5, 7);
    CHECK(g.n() == 64);
    CHECK(g.m_total() == 165.0);
    const std::vector<int> deg = g.degrees();
    int cross = 0;
    for (const Edge& e : g.edges())
      if (e.u < 48 && e.v >= 48) ++cross;
    CHECK(cross == 5);
    for (int v = 48; v < 64; ++v) CHECK(deg[v] >= 8);
    CHECK_THROWS_AS(planted_instance(50, 4, 5, 0), GeneratorError);
    CHECK_THROWS_AS(planted_instance(81, 3, 5, 0), GeneratorError);
  }

  TEST_CASE("rounding matrix") {
    const Graph g = k2();
    const SolveReport sp = solve(build_SP(g, CutSet::eigenbasis(g.adjacency())));
    const SymMatrix y = rounding_matrix(g, sp);
    CHECK(y(0, 0) == doctest::Approx(1.0));
    CHECK(y(0, 1) == doctest::Approx(-1.0));

    const Graph p = petersen();
    const CutSet pe = CutSet::eigenbasis(p.adjacency());
    const SolveReport psp = solve(build_SP(p, pe));
    const SymMatrix py = rounding_matrix(p, psp, pe);
    CHECK((-1.0 * p.adjacency()).inner(py) == doctest::Approx(20.0).epsilon(1e-4 / 20));
    for (int i = 0; i < 10; ++i) CHECK(py(i, i) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(eig_decompose(py).min_value() >= -1e-9);

    // A PSD unit-diagonal SP optimum is reproduced or improved.
    const Graph c = cycle(6);
    const SolveReport csp = solve(build_SP(c, CutSet::eigenbasis(c.adjacency())));
    REQUIRE(eig_decompose(*csp.primal_X).min_value() >= -1e-7);
    const SymMatrix cy = rounding_matrix(c, csp);
    CHECK((-1.0 * c.adjacency()).inner(cy) >= (-1.0 * c.adjacency()).inner(*csp.primal_X) - 1e-6);
  }

  TEST_CASE("hyperplane rounding") {
    Matrix a(2, 2);
    a << 1, -1, -1, 1;
    for (std::uint64_t s = 0; s < 10; ++s) CHECK(gw_round(k2(), SymMatrix(a), 1, s).value == 1.0);

    Rng rng(3);
    const Graph g = gen_er(30, 0.3, rng);
    for (std::uint64_t s = 0; s < 10; ++s) CHECK(gw_round(g, SymMatrix::identity(30), 100, s).value >= g.m_total() / 2);

    const CutResult r1 = gw_round(g, SymMatrix::identity(30), 20, 5);
    const CutResult r2 = gw_round(g, SymMatrix::identity(30), 20, 5);
    CHECK(r1.side == r2.side);
    CHECK(r1.method == "gw-round");
    CHECK(cut_value(g, r1.side) == r1.value);

    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = bad(1, 0) = 2;
    CHECK_THROWS_AS(gw_round(k2(), SymMatrix(bad), 5, 0), InvalidMatrix);
    CHECK_THROWS_AS(gw_round(k2(), 2.0 * SymMatrix::identity(2), 5, 0), InvalidMatrix);
  }

  TEST_CASE("Petersen rounding finds the optimum") {
    const Graph p = petersen();
    const SymMatrix y = rounding_matrix(p, solve(build_SP(p, CutSet::eigenbasis(p.adjacency()))), CutSet::eigenbasis(p.adjacency()));
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) hits += gw_round(p, y, 100, s).value == 12.0;
    CHECK(hits >= 95);
  }

  TEST_CASE("baselines") {
    for (const auto& [g, want] : std::vector<std::pair<Graph, double>>{{k2(), 1}, {cycle(5), 4}, {star(4), 4}}) {
      const CutResult gr = greedy_cut(g);
      const CutResult sw = sweep_cut(g);
      CHECK(gr.value == want);
      CHECK(sw.value == want);
      CHECK(gr.method == "greedy");
      CHECK(sw.method == "sweep");
      CHECK(cut_value(g, sw.side) == sw.value);
    }
    // Sweep ends at a 1-opt local optimum.
    Rng rng(9);
    for (int t = 0; t < 5; ++t) {
      const Graph g = gen_er(40, 0.2, rng);
      const CutResult sw = sweep_cut(g);
      for (int v = 0; v < g.n(); ++v) {
        std::vector<int> side = sw.side;
        side[v] = -side[v];
        CHECK(cut_value(g, side) <= sw.value + 1e-12);
      }
    }
  }

  TEST_CASE("brute force against rounding and SP") {
    Rng rng(30);
    for (int t = 0; t < 10; ++t) {
      const int n = 4 + static_cast<int>(rng.below(9));
      const Graph g = gen_er(n, 0.5, rng);
      const CutResult best = brute_force_maxcut(g);
      CHECK(best.value == cut_value(g, best.side));
      CHECK(greedy_cut(g).value <= best.value);
      CHECK(sp_value(g, CutSet::eigenbasis(g.adjacency())) >= best.value - 1e-9);
    }
    CHECK_THROWS(brute_force_maxcut(Graph(23, {})));
  }

  TEST_CASE("GW-feasible matrices are SP-feasible") {
    Rng rng(12);
    const Graph g = gen_er(10, 0.5, rng);
    CutSet s = CutSet::eigenbasis(g.adjacency());
    for (int k = 0; k < 10; ++k) {
      Vector v(10);
      for (int i = 0; i < 10; ++i) v(i) = rng.normal();
      s.add(v, CutOrigin::User);
    }
    const RelaxationModel m = build_SP(g, s);
    for (int t = 0; t < 20; ++t) {
      const SymMatrix x = random_correlation(10, 1 + static_cast<int>(rng.below(10)), rng);
      Vector flat(m.num_vars());
      for (int i = 0; i < 10; ++i)
        for (int j = i; j < 10; ++j) flat(m.entry_var(i, j)) = x(i, j);
      CHECK(m.max_violation(flat) <= 1e-9);
    }
  }

  TEST_CASE("d-regular ratio bound") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Graph g = gen_regular(30, 4, seed);
      const double c = -eig_decompose(g.adjacency()).min_value() / std::sqrt(4.0);
      const CutSet s = CutSet::eigenbasis(g.adjacency());
      const double sp = sp_value(g, s);
      const double sd = cut_bound_from_raw(g, sd_raw(g, s));
      CHECK(sp / sd <= 1 + c / std::sqrt(4.0) + 1e-6);
    }
  }
}
