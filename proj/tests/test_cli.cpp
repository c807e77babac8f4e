#include "helpers.hpp"

#include <cli.hpp>

#include <doctest.h>

using namespace sdprelax;
using namespace sdprelax::cli;
using namespace testing;

namespace {

Json strip_timings(Json j) {
  j.erase("timings");
  return j;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("maxcut on Petersen") {
    MaxcutFlags f;
    f.instance.file = fixture("petersen.edges");
    f.baselines = {"greedy", "sweep", "brute"};
    const Outcome o = run_maxcut(f);
    CHECK(o.ok);
    const Json& r = o.report["results"];
    CHECK(r["z_sp"].get<double>() == doctest::Approx(12.5).epsilon(1e-6));
    CHECK(r["z_sd"].get<double>() == doctest::Approx(r["z_sp"].get<double>()).epsilon(1e-6));
    CHECK(r["eigenvalue_bound"].get<double>() == doctest::Approx(12.5));
    CHECK(r["best_cut"]["value"].get<double>() == 12.0);
    CHECK(r["cuts"]["brute_force"].get<double>() == 12.0);
    CHECK(o.report["instance"]["n"] == 10);
    CHECK(o.report["software"]["version"] == std::string(kVersion));
  }

  TEST_CASE("maxcut gap sandwich and determinism") {
    MaxcutFlags f;
    f.instance.gen = "er:n=30,p=0.3";
    f.seed = 4;
    const Outcome a = run_maxcut(f);
    const Outcome b = run_maxcut(f);
    CHECK(strip_timings(a.report) == strip_timings(b.report));
    const Json& r = a.report["results"];
    const double lp = r["lp_gap"].get<double>();
    const double opt = r["opt_gap"].get<double>();
    CHECK(lp >= opt - 1e-9);
    CHECK(opt >= 1 - 1e-6);
    CHECK(a.report["results"]["statuses"]["ref"] == "optimal");

    f.sdp_ref = "none";
    const Outcome n = run_maxcut(f);
    CHECK(n.report["results"]["opt_gap"].is_null());
    CHECK(n.report["results"]["z_ref"].is_null());
  }

  TEST_CASE("oracle and hybrid policies") {
    MaxcutFlags f;
    f.instance.gen = "er:n=15,p=0.4";
    f.budget = 10;
    f.batch = 5;
    for (const char* p : {"oracle", "hybrid"}) {
      f.cuts = p;
      const Outcome o = run_maxcut(f);
      CHECK(o.ok);
      CHECK(o.report["traces"]["sp"].size() >= 1);
      CHECK(o.report["results"]["opt_gap"].get<double>() >= 1 - 1e-6);
    }
  }

  TEST_CASE("argument errors") {
    MaxcutFlags f;
    CHECK_THROWS_AS(run_maxcut(f), std::invalid_argument);
    f.instance.file = fixture("c5.edges");
    f.instance.gen = "er:n=5,p=0.5";
    CHECK_THROWS_AS(run_maxcut(f), std::invalid_argument);
    f.instance.gen.clear();
    f.cuts = "bogus";
    CHECK_THROWS_AS(run_maxcut(f), std::invalid_argument);
    f.cuts = "eigen";
    f.baselines = {"trevisan"};
    CHECK_THROWS_AS(run_maxcut(f), std::invalid_argument);
    f.instance.file = fixture("identity3.csv");
    CHECK_THROWS_AS(run_maxcut(f), std::invalid_argument);

    SpcaFlags s;
    CHECK_THROWS_AS(run_spca(s), std::invalid_argument);
    s.synthetic = true;
    s.wishart = 5;
    CHECK_THROWS_AS(run_spca(s), std::invalid_argument);
  }

  TEST_CASE("spca reports") {
    SpcaFlags f;
    f.synthetic = true;
    f.seed = 3;
    f.ks = {4, 4};
    const Outcome o = run_spca(f);
    CHECK(o.ok);
    const Json& c = o.report["results"]["components"];
    REQUIRE(c.size() == 2);
    CHECK(c[0]["support"] == Json::array({5, 6, 7, 8}));
    CHECK(c[1]["support"] == Json::array({1, 2, 3, 4}));
    CHECK(c[0]["ratio"].get<double>() <= 1 + 1e-6);

    SpcaFlags id;
    id.matrix_file = fixture("identity3.csv");
    id.ks = {1};
    const Outcome i = run_spca(id);
    CHECK(i.report["results"]["components"][0]["objective"].get<double>() == doctest::Approx(1.0));

    SpcaFlags pit;
    pit.matrix_file = fixture("pitprops.csv");
    pit.ks = {5, 2, 2};
    pit.sdp_ref = "none";
    const Outcome p = run_spca(pit);
    REQUIRE(p.report["results"]["components"].size() == 3);
    CHECK(p.report["results"]["components"][1]["support_names"] == Json::array({"moist", "testsg"}));
    const double ev = p.report["results"]["explained_variance"].get<double>();
    CHECK(ev > 0.0);
    CHECK(ev <= 1.0);
  }

  TEST_CASE("theta reports") {
    ThetaFlags f;
    f.instance.file = fixture("c5.edges");
    f.sdp_ref = "cutting-plane";
    const Outcome o = run_theta(f);
    CHECK(o.ok);
    CHECK(o.report["results"]["z_ref"].get<double>() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-3 / 2.3));

    f.sdp_ref = "none";
    const Outcome n = run_theta(f);
    CHECK(n.report["results"]["final_ratio"].is_null());
  }

  TEST_CASE("CSV renderings") {
    MaxcutFlags f;
    f.instance.file = fixture("c5.edges");
    const Outcome o = run_maxcut(f);
    const std::string csv = report_csv(o.report);
    CHECK(csv.rfind("Graph,Optimality gap,LP Gap,LP cut value,Greedy,sweep,GW,OPT", 0) == 0);

    const auto header = aggregate_header();
    REQUIRE(header.size() >= 8);
    CHECK(std::vector<std::string>(header.begin(), header.begin() + 8) ==
          std::vector<std::string>{"Graph", "Optimality gap", "LP Gap", "LP cut value", "Greedy", "sweep", "GW", "OPT"});
    const auto ok = aggregate_row(1, "maxcut --file c5.edges", &o.report, "");
    CHECK(ok.size() == header.size());
    CHECK(ok[4] == "4");
    const auto bad = aggregate_row(2, "maxcut --file missing", nullptr, "cannot open");
    CHECK(bad.back() == "cannot open");
    CHECK(csv_line({"a,b", "c\"d", "e"}) == "\"a,b\",\"c\"\"d\",e\n");
  }
}
