#include "helpers.hpp"

#include <sdprelax/engine.hpp>
#include <sdprelax/theta.hpp>

#include <doctest.h>

using namespace sdprelax;
using namespace testing;

TEST_SUITE("theta") {
  TEST_CASE("shifted objective") {
    const Graph g = cycle(5);
    const ThetaInstance t(g);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        if (i == j)
          CHECK(t.shifted_objective(i, j) == 1.0);
        else
          CHECK(t.shifted_objective(i, j) == (g.has_edge(i, j) ? 0.0 : 1.0));
      }
  }

  TEST_CASE("reference values") {
    CHECK(theta_reference(ThetaInstance(cycle(5))).objective == doctest::Approx(std::sqrt(5.0)).epsilon(1e-3 / 2.3));
    CHECK(theta_reference(ThetaInstance(complete(4))).objective == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(theta_reference(ThetaInstance(empty_graph(6))).objective == doctest::Approx(6.0).epsilon(1e-4 / 6));
    CHECK(theta_reference(ThetaInstance(petersen())).objective == doctest::Approx(4.0).epsilon(1e-4));
  }

  TEST_CASE("empty graph: the eigenbasis is exact") {
    for (int n : {3, 4, 7}) {
      const ThetaInstance t(empty_graph(n));
      const SolveReport r = solve(build_LTn(t, CutSet::eigenbasis(t.shifted_objective), false));
      REQUIRE(r.optimal());
      CHECK(r.objective == doctest::Approx(n));
    }
  }

  TEST_CASE("K3 approaches one from above") {
    const ThetaInstance t(complete(3));
    CuttingPlaneOptions o;
    o.budget = 60;
    const auto res = cutting_plane(theta_sdp(t, false), CutSet::standard_basis(3), o);
    CHECK(res.trace.front().second >= 1.0 - 1e-9);
    CHECK(res.report.objective == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(trace_monotone(res.trace, Sense::Maximize));
    for (const auto& [cuts, value] : res.trace) CHECK(value >= 1.0 - 1e-7);
  }

  TEST_CASE("cone rows tighten the relaxation") {
    Rng rng(3);
    for (int trial = 0; trial < 3; ++trial) {
      const ThetaInstance t(gen_er(10, 0.4, rng));
      CutSet s(10);
      for (int k = 0; k < 4; ++k) {
        Vector v(10);
        for (int i = 0; i < 10; ++i) v(i) = rng.normal();
        s.add(v, CutOrigin::User);
      }
      const SolveReport off = solve(build_LTn(t, s, false));
      const SolveReport on = solve(build_LTn(t, s, true));
      REQUIRE(off.optimal());
      REQUIRE(on.optimal());
      CHECK(on.objective <= off.objective + 1e-7);
      const double ref = theta_reference(t).objective;
      CHECK(on.objective >= ref - 1e-6);
    }
    SolverOptions plain;
    plain.backend = Backend::Simplex;
    CHECK_THROWS_AS(solve(build_LTn(ThetaInstance(cycle(5)), CutSet(5), true), plain), ConeUnsupported);
  }

  TEST_CASE("experiment traces") {
    const Graph g = gen_er(20, 0.5, 2);
    ThetaExperimentOptions o;
    o.budget = 40;
    o.batch = 10;
    for (CutPolicy p : {CutPolicy::Eigen, CutPolicy::Oracle}) {
      o.policy = p;
      const ThetaExperimentResult r = theta_experiment(g, o);
      REQUIRE_FALSE(r.trace.empty());
      CHECK(r.trace.front().cuts == 0);
      CHECK(r.cuts.size() <= 40);
      for (std::size_t k = 0; k < r.trace.size(); ++k) {
        CHECK(r.trace[k].ratio <= 1.0 + 1e-6);
        CHECK(r.trace[k].ratio > 0.0);
        if (k > 0) CHECK(r.trace[k].objective <= r.trace[k - 1].objective * (1 + 1e-7) + 1e-7);
      }
    }
    o.budget = 5;
    CHECK_THROWS_AS(theta_experiment(g, o), std::invalid_argument);
  }

  TEST_CASE("eigen policy consumes the basis in ascending order") {
    const Graph g = cycle(7);
    ThetaExperimentOptions o;
    o.budget = 7;
    o.batch = 7;
    const ThetaExperimentResult r = theta_experiment(g, o);
    const EigenDecomposition e = eig_decompose(ThetaInstance(g).shifted_objective);
    REQUIRE(r.cuts.size() >= 1);
    CHECK(std::abs(r.cuts.vector(0).dot(e.vectors.col(6))) == doctest::Approx(1.0));
    CHECK(r.final_report.objective >= theta_reference(ThetaInstance(g)).objective - 1e-6);
  }
}
