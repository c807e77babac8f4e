#include "helpers.hpp"

#include <sdprelax/engine.hpp>
#include <sdprelax/maxcut.hpp>
#include <sdprelax/theta.hpp>

#include <doctest.h>

using namespace sdprelax;
using namespace testing;

namespace {

double term_coef(const LinearRow& row, int var) {
  double c = 0;
  for (const Term& t : row.terms)
    if (t.var == var) c += t.coef;
  return c;
}

// max X_11 subject to X_11 <= 1 with every other entry pinned to zero.
RelaxationModel single_entry_model() {
  RelaxationModel m(2, Sense::Maximize);
  for (int v = 0; v < m.num_entry_vars(); ++v) m.set_bounds(v, 0.0, kInf);
  m.set_bounds(m.entry_var(0, 1), 0.0, 0.0);
  m.set_bounds(m.entry_var(1, 1), 0.0, 0.0);
  m.set_cost(m.entry_var(0, 0), 1.0);
  m.add_row({"cap", {{m.entry_var(0, 0), 1.0}}, -kInf, 1.0});
  return m;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("cut sets normalize and reject duplicates") {
    CutSet s(3);
    Vector v(3);
    v << 3, 0, 4;
    CHECK(s.add(v, CutOrigin::User));
    CHECK(s.vector(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(s.add(-2 * v, CutOrigin::Oracle));
    CHECK(s.size() == 1);
    CHECK(s.contains(-v));
    CHECK_THROWS_AS(s.add(Vector::Zero(3), CutOrigin::User), InvalidMatrix);
    CHECK_THROWS_AS(s.add(Vector::Ones(2), CutOrigin::User), InvalidMatrix);

    const CutSet e = CutSet::eigenbasis(cycle(6).adjacency());
    CHECK(e.size() == 6);
    CHECK(e.origin(0) == CutOrigin::Eigen);
    const CutSet b = CutSet::standard_basis(6);
    CutSet merged = e;
    CHECK(merged.add_all(b) == 6);
    CHECK(merged.add_all(b) == 0);

    CHECK(parse_cut_policy("eigen") == CutPolicy::Eigen);
    CHECK(parse_cut_policy("oracle") == CutPolicy::Oracle);
    CHECK(parse_cut_policy("hybrid") == CutPolicy::Hybrid);
    CHECK_THROWS_AS(parse_cut_policy("random"), std::invalid_argument);
  }

  TEST_CASE("model layout") {
    RelaxationModel m(4, Sense::Maximize);
    CHECK(m.num_entry_vars() == 10);
    int expect = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        CHECK(m.entry_var(i, j) == expect);
        CHECK(m.entry_var(j, i) == expect);
        CHECK(m.entry_of(expect) == std::make_pair<Eigen::Index, Eigen::Index>(i, j));
        ++expect;
      }
    Rng rng(1);
    const SymMatrix x = random_symmetric(4, rng);
    Vector flat(10);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) flat(m.entry_var(i, j)) = x(i, j);
    CHECK((m.matrix_from(flat).dense() - x.dense()).norm() == doctest::Approx(0.0));
    const Vector v = Vector::LinSpaced(4, -1.0, 2.0);
    double q = 0;
    for (const Term& t : m.quad_terms(v)) q += t.coef * flat(t.var);
    CHECK(q == doctest::Approx(x.quad(v)));
    const SymMatrix a = random_symmetric(4, rng);
    double ip = 0;
    for (const Term& t : m.matrix_terms(a)) ip += t.coef * flat(t.var);
    CHECK(ip == doctest::Approx(a.inner(x)));
  }

  TEST_CASE("build_LS rows for K2") {
    const SdpInstance inst = gw_instance(k2());
    const RelaxationModel empty = build_LS(inst, CutSet(2));
    CHECK(empty.rows().size() == 2);
    CHECK(empty.find_row("diag:1").has_value());
    CHECK(empty.find_row("diag:2").has_value());
    CHECK(empty.variables()[empty.entry_var(0, 1)].bound_tag == "box:(1,2)");
    CHECK(empty.variables()[empty.entry_var(0, 1)].lower == -1.0);
    CHECK(empty.variables()[empty.entry_var(0, 1)].upper == 1.0);

    CutSet s(2);
    s.add(Vector::Ones(2), CutOrigin::User);
    const RelaxationModel one = build_LS(inst, s);
    const auto r = one.find_row("cut:1");
    REQUIRE(r.has_value());
    const LinearRow& row = one.rows()[*r];
    CHECK(term_coef(row, one.entry_var(0, 0)) == doctest::Approx(0.5));
    CHECK(term_coef(row, one.entry_var(1, 1)) == doctest::Approx(0.5));
    CHECK(term_coef(row, one.entry_var(0, 1)) == doctest::Approx(1.0));
    CHECK(row.lower == 0.0);
    CHECK(row.upper == kInf);
  }

  TEST_CASE("solve: small closed-form models") {
    const SolveReport r = solve(single_entry_model());
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(1.0));
    CHECK(r.duals.at("cap") == doctest::Approx(1.0));

    RelaxationModel big = single_entry_model();
    big.set_cost(big.entry_var(0, 0), 3000.0);
    const SolveReport rb = solve(big);
    REQUIRE(rb.optimal());
    CHECK(rb.objective == doctest::Approx(3000.0));
    CHECK(rb.duals.at("cap") == doctest::Approx(3000.0));

    const Graph g = k2();
    const SolveReport k = solve(build_LS(gw_instance(g), CutSet::eigenbasis(g.adjacency())));
    REQUIRE(k.optimal());
    CHECK(k.objective == doctest::Approx(2.0));
    CHECK(cut_bound_from_raw(g, k.objective) == doctest::Approx(1.0));

    const Graph c5 = cycle(5);
    const SolveReport c = solve(build_LS(gw_instance(c5), CutSet::eigenbasis(c5.adjacency())));
    REQUIRE(c.optimal());
    CHECK(c.objective <= 5 * 2 * std::cos(std::acos(-1.0) / 5) + 1e-6);
    CHECK(cut_bound_from_raw(c5, c.objective) == doctest::Approx(4.522542).epsilon(1e-5 / 4.5));
    CHECK(build_LS(gw_instance(c5), CutSet::eigenbasis(c5.adjacency())).rows().size() == 10);
  }

  TEST_CASE("solve reports infeasible and unbounded models") {
    RelaxationModel inf(1, Sense::Maximize);
    inf.add_row({"lo", {{0, 1.0}}, 2.0, kInf});
    inf.add_row({"hi", {{0, 1.0}}, -kInf, 1.0});
    CHECK(solve(inf).status == SolveStatus::Infeasible);

    RelaxationModel unb(1, Sense::Maximize);
    unb.set_cost(0, 1.0);
    CHECK(solve(unb).status == SolveStatus::Unbounded);
  }

  TEST_CASE("dual multipliers follow the Lagrangian convention") {
    // max x0 + x1 s.t. x0 + 2 x1 <= 4 ("a"), x0 >= 1 ("b") over aux variables.
    RelaxationModel m(0, Sense::Maximize);
    const int x0 = m.add_aux("x0", 0, 3, 1.0);
    const int x1 = m.add_aux("x1", 0, kInf, 1.0);
    m.add_row({"a", {{x0, 1.0}, {x1, 2.0}}, -kInf, 4.0});
    m.add_row({"b", {{x0, 1.0}}, 1.0, kInf});
    const SolveReport r = solve(m);
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(3.5));
    CHECK(r.duals.at("a") == doctest::Approx(0.5));
    CHECK(r.duals.at("b") == doctest::Approx(0.0));
    // Complementary slackness and stationarity.
    CHECK(r.aux(0) == doctest::Approx(3.0));
    CHECK(r.aux(1) == doctest::Approx(0.5));
  }

  TEST_CASE("cone rows") {
    // max x + y s.t. ||(x, y)|| <= 1.
    RelaxationModel m(0, Sense::Maximize);
    const int x = m.add_aux("x", -kInf, kInf, 1.0);
    const int y = m.add_aux("y", -kInf, kInf, 1.0);
    m.add_cone({"disk", {AffineExpr{{{x, 1.0}}, 0.0}, AffineExpr{{{y, 1.0}}, 0.0}}, AffineExpr{{}, 1.0}});
    const SolveReport r = solve(m);
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(m.max_violation(r.primal) <= 1e-6);

    SolverOptions plain;
    plain.backend = Backend::Simplex;
    CHECK_FALSE(supports_cones(Backend::Simplex));
    CHECK_THROWS_AS(solve(m, plain), ConeUnsupported);
  }

  TEST_CASE("warm-started sessions match fresh solves") {
    const Graph g = gen_er(15, 0.4, 3);
    const SdpInstance inst = gw_instance(g);
    CutSet s = CutSet::eigenbasis(g.adjacency());
    LpSession session(build_LS(inst, s));
    SolveReport r = session.solve();
    Rng rng(4);
    for (int k = 0; k < 5; ++k) {
      Vector v(15);
      for (int i = 0; i < 15; ++i) v(i) = rng.normal();
      s.add(v, CutOrigin::User);
      session.add_cut(s.vectors().back(), "cut:" + std::to_string(s.size()));
      r = session.solve();
      const SolveReport fresh = solve(build_LS(inst, s));
      REQUIRE(r.optimal());
      CHECK(r.objective == doctest::Approx(fresh.objective).epsilon(1e-9));
    }
  }

  TEST_CASE("cutting plane") {
    SUBCASE("tight start: further cuts leave the value unchanged") {
      const Graph g = petersen();
      CuttingPlaneOptions o;
      o.budget = 10;
      const auto res = cutting_plane(gw_instance(g), CutSet::eigenbasis(g.adjacency()), o);
      for (const auto& [cuts, value] : res.trace) CHECK(cut_bound_from_raw(g, value) == doctest::Approx(12.5));
    }
    SUBCASE("K2 from the empty set") {
      CuttingPlaneOptions o;
      o.budget = 5;
      const auto res = cutting_plane(gw_instance(k2()), CutSet(2), o);
      REQUIRE(res.report.optimal());
      CHECK(res.trace.front().second == doctest::Approx(2.0));
      CHECK(res.report.objective == doctest::Approx(2.0));
    }
    SUBCASE("triangle from the empty set needs cuts") {
      CuttingPlaneOptions o;
      o.budget = 50;
      const auto res = cutting_plane(gw_instance(complete(3)), CutSet(3), o);
      REQUIRE(res.report.optimal());
      CHECK(res.trace.front().second == doctest::Approx(6.0));
      CHECK(res.report.objective == doctest::Approx(3.0).epsilon(1e-5));
      CHECK(res.added >= 1);
      CHECK(trace_monotone(res.trace, Sense::Maximize));
    }
    SUBCASE("budget exhaustion is reported") {
      const Graph g = gen_er(20, 0.5, 1);
      CuttingPlaneOptions o;
      o.budget = 3;
      const auto res = cutting_plane(gw_instance(g), CutSet(20), o);
      CHECK(res.report.status == SolveStatus::IterationLimit);
      CHECK(res.added == 3);
      CHECK(res.cuts.size() == 3);
    }
    SUBCASE("ER(50, 0.5) traces are non-increasing") {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Graph g = gen_er(50, 0.5, seed);
        CuttingPlaneOptions o;
        o.budget = 40;
        o.batch = 4;
        const auto res = cutting_plane(gw_instance(g), CutSet(50), o);
        CHECK(trace_monotone(res.trace, Sense::Maximize, 1e-7));
        // Every cut holds at the final primal point.
        for (const Vector& v : res.cuts.vectors()) CHECK(res.report.primal_X->quad(v) >= -1e-7);
      }
    }
    SUBCASE("batch must be positive") {
      CuttingPlaneOptions o;
      o.batch = 0;
      CHECK_THROWS_AS(cutting_plane(gw_instance(k2()), CutSet(2), o), std::invalid_argument);
    }
  }

  TEST_CASE("monotonicity under cut-set inclusion") {
    Rng rng(6);
    for (int trial = 0; trial < 5; ++trial) {
      const Graph g = gen_er(14, 0.4, rng);
      const SdpInstance inst = gw_instance(g);
      CutSet s(14);
      double prev = solve(build_LS(inst, s)).objective;
      for (int k = 0; k < 6; ++k) {
        Vector v(14);
        for (int i = 0; i < 14; ++i) v(i) = rng.normal();
        s.add(v, CutOrigin::User);
        const double cur = solve(build_LS(inst, s)).objective;
        CHECK(cur <= prev + 1e-7);
        prev = cur;
      }
    }
  }

  TEST_CASE("reference SDP values") {
    const SolveReport p = reference_sdp(gw_instance(petersen()));
    REQUIRE(p.optimal());
    CHECK(cut_bound_from_raw(petersen(), p.objective) == doctest::Approx(12.5).epsilon(1e-4 / 12.5));

    const SolveReport c = reference_sdp(gw_instance(cycle(5)));
    REQUIRE(c.optimal());
    CHECK(cut_bound_from_raw(cycle(5), c.objective) == doctest::Approx(4.522542).epsilon(1e-4 / 4.5));
    CHECK(c.dual_objective == doctest::Approx(c.objective).epsilon(1e-7));
    CHECK(eig_decompose(*c.dual_slack).values.maxCoeff() <= 1e-6);

    const SolveReport e = theta_reference(ThetaInstance(empty_graph(4)));
    REQUIRE(e.optimal());
    CHECK(e.objective == doctest::Approx(4.0).epsilon(1e-4 / 4));
  }

  TEST_CASE("optimal cut set from the dual slack closes the gap") {
    const SdpInstance k = gw_instance(k2());
    CHECK(optimal_cutset_check(k, reference_sdp(k)) <= 1e-6);
    const SdpInstance c = gw_instance(cycle(5));
    const SolveReport ref = reference_sdp(c);
    CHECK(optimal_cutset_check(c, ref) <= 1e-4 * std::max(1.0, std::abs(ref.objective)));
  }

  TEST_CASE("trace_monotone") {
    CHECK(trace_monotone({{0, 3.0}, {1, 2.0}, {2, 2.0}}, Sense::Maximize));
    CHECK_FALSE(trace_monotone({{0, 3.0}, {1, 3.1}}, Sense::Maximize));
    CHECK(trace_monotone({{0, 1.0}, {1, 1.5}}, Sense::Minimize));
  }
}
