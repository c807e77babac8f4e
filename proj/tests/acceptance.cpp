// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
#include <sdprelax/engine.hpp>
#include <sdprelax/io.hpp>
#include <sdprelax/maxcut.hpp>
#include <sdprelax/spca.hpp>
#include <sdprelax/theta.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace sdprelax;

namespace {

using Trace = std::vector<std::pair<std::size_t, double>>;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixture(const std::string& name) { return std::string(SDPRELAX_FIXTURE_DIR) + "/" + name; }

Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
  return Graph(n, e);
}

Graph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
  return Graph(n, e);
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream o;
  o.precision(prec);
  o << v;
  return o.str();
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// SP over S, and the SD built from S, the positive eigenvectors of the SP
// optimum and the standard basis, which also gives the rounding matrix.
struct MaxcutRelaxation {
  std::string name;
  Graph graph;
  double sp = 0;  // cut units
  double sd = 0;  // cut units
  SymMatrix y;
};

MaxcutRelaxation relax(const std::string& name, const Graph& g, const CutSet& s) {
  const SolveReport sp = solve(build_SP(g, s));
  if (!sp.optimal()) throw NumericalFailure(name + ": SP solve ended " + to_string(sp.status));
  MaxcutRelaxation r{name, g, cut_bound_from_raw(g, sp.objective), 0, rounding_matrix(g, sp, s)};
  r.sd = cut_bound_from_raw(g, (-1.0 * g.adjacency()).inner(r.y));
  return r;
}

double reference_cut(const Graph& g) {
  const SolveReport ref = reference_sdp(gw_instance(g));
  if (!ref.optimal()) throw NumericalFailure(std::string("reference SDP ended ") + to_string(ref.status));
  return cut_bound_from_raw(g, ref.objective);
}

std::vector<std::pair<std::string, Graph>> fixture_graphs() {
  return {{"petersen.edges", parse_edgelist(read_text_file(fixture("petersen.edges")))},
          {"c5.edges", parse_edgelist(read_text_file(fixture("c5.edges")))},
          {"berlin52.tsp", parse_tsplib(read_text_file(fixture("berlin52.tsp")))}};
}

// Shared between criteria: relaxations to round, traces to test.
std::vector<MaxcutRelaxation> g_rounding;
std::vector<std::pair<std::string, Trace>> g_traces;

void criterion1(Verdict& v) {
  struct Case {
    Graph g;
    const char* name;
    double expect;  // NaN: SP and SD only need to agree
  };
  const double nan = std::nan("");
  const std::vector<Case> cases{{parse_edgelist(read_text_file(fixture("petersen.edges"))), "Petersen", 12.5},
                                {cycle(5), "C5", 4.522542},
                                {complete(5), "K5", nan},
                                {cycle(8), "C8", nan}};
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const CutSet e = CutSet::eigenbasis(c.g.adjacency());
    const SolveReport sp = solve(build_SP(c.g, e));
    const SolveReport sd = solve(build_SD(c.g, e));
    const double dt = seconds_since(t0);
    v.require(sp.optimal() && sd.optimal(), std::string(c.name) + " solves optimal");
    const double zsp = cut_bound_from_raw(c.g, sp.objective);
    const double zsd = cut_bound_from_raw(c.g, sd.objective);
    v.detail << " " << c.name << " SP=" << fmt(zsp, 8) << " SD=" << fmt(zsd, 8) << " (" << fmt(dt, 2) << "s)";
    if (std::isnan(c.expect)) {
      v.require(std::abs(zsp - zsd) <= 1e-4 * std::max(1.0, std::abs(zsp)), std::string(c.name) + " SP = SD");
    } else {
      v.require(std::abs(zsp - c.expect) <= 1e-4, std::string(c.name) + " SP value");
      v.require(std::abs(zsd - c.expect) <= 1e-4, std::string(c.name) + " SD value");
    }
    v.require(dt < 2.0, std::string(c.name) + " under 2 s");
    g_rounding.push_back(relax(c.name, c.g, e));
  }
}

void criterion2(Verdict& v) {
  std::vector<std::pair<std::string, Graph>> graphs = fixture_graphs();
  for (std::uint64_t s = 0; s < 20; ++s) graphs.push_back({"ER(30,0.3)#" + std::to_string(s), gen_er(30, 0.3, s)});
  double worst_eig = -kInf, worst_m = -kInf;
  for (const auto& [name, g] : graphs) {
    const CutSet e = CutSet::eigenbasis(g.adjacency());
    const SolveReport sp = solve(build_SP(g, e));
    const SolveReport sp0 = solve(build_SP(g, CutSet(g.n())));
    v.require(sp.optimal() && sp0.optimal(), name + " solves optimal");
    const double zsp = cut_bound_from_raw(g, sp.objective);
    const double zsp0 = cut_bound_from_raw(g, sp0.objective);
    const double bound = eigenvalue_bound(g);
    v.require(zsp <= bound + 1e-6, name + " SP <= eigenvalue bound");
    v.require(zsp0 <= g.m_total() + 1e-6, name + " SP(empty) <= m");
    worst_eig = std::max(worst_eig, zsp - bound);
    worst_m = std::max(worst_m, zsp0 - g.m_total());
    if (name.rfind("ER", 0) == 0) g_rounding.push_back(relax(name, g, e));
    else if (name == "berlin52.tsp") g_rounding.push_back(relax(name, g, e));
  }
  v.detail << " " << graphs.size() << " graphs; max(SP - bound)=" << fmt(worst_eig)
           << " max(SP(empty) - m)=" << fmt(worst_m);
}

void criterion3(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_gap = 0;
  for (std::uint64_t s = 100; s < 105; ++s) {
    const Graph g = gen_er(30, 0.3, s);
    const SdpInstance inst = gw_instance(g);
    CuttingPlaneOptions o;
    o.budget = 30;
    o.batch = 5;
    const CuttingPlaneResult cp = cutting_plane(inst, CutSet::eigenbasis(g.adjacency()), o);
    g_traces.push_back({"C3 ER(30,0.3)#" + std::to_string(s), cp.trace});
    const MaxcutRelaxation r = relax("ER(30,0.3)#" + std::to_string(s), g, cp.cuts);
    const SolveReport ref = reference_sdp(inst);
    v.require(ref.optimal(), "reference optimal");
    const double zref = cut_bound_from_raw(g, ref.objective);
    v.require(r.sd <= zref + 1e-6, "SD <= ref on seed " + std::to_string(s));
    v.require(zref <= r.sp + 1e-6, "ref <= SP on seed " + std::to_string(s));
    const double gap = optimal_cutset_check(inst, ref);
    worst_gap = std::max(worst_gap, gap);
    v.require(gap <= 1e-4, "optimal cut set gap on seed " + std::to_string(s));
    v.detail << " #" << s << ": " << fmt(r.sd) << " <= " << fmt(zref) << " <= " << fmt(r.sp) << ";";
    g_rounding.push_back(r);
  }
  const double dt = seconds_since(t0);
  v.detail << " max optimal-cut-set gap=" << fmt(worst_gap, 3) << " (" << fmt(dt, 3) << "s)";
  v.require(dt < 60.0, "under 60 s");
}

void criterion4(Verdict& v) {
  for (const auto& [name, g] : fixture_graphs()) {
    const SymMatrix w = g.adjacency();
    const EigenDecomposition e = eig_decompose(w);
    double neg = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i)
      if (e.values(i) <= 0) neg -= e.values(i);
    const SolveReport sd = solve(build_SD(g, CutSet::eigenbasis(w)));
    v.require(sd.optimal(), name + " SD optimal");
    const double half_fro = 0.5 * w.frobenius_norm();
    v.require(sd.objective >= neg - 1e-6, name + " z_SD >= -sum of nonpositive eigenvalues");
    v.require(neg - 1e-6 >= half_fro - 1e-6, name + " spectral sum >= Frobenius half");
    v.detail << " " << name << ": z_SD=" << fmt(sd.objective, 8) << " >= " << fmt(neg, 8) << " >= "
             << fmt(half_fro, 8) << ";";
  }
}

void criterion5(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> bound_ratio, sp_ratio;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Graph g = planted_instance(64, 4, 5, s);
    const MaxcutRelaxation r = relax("planted(64,4,5)#" + std::to_string(s), g, CutSet::eigenbasis(g.adjacency()));
    const double zref = reference_cut(g);
    bound_ratio.push_back(eigenvalue_bound(g) / zref);
    sp_ratio.push_back(r.sp / zref);
    g_rounding.push_back(r);
  }
  const double dt = seconds_since(t0);
  v.detail << " mean bound/ref=" << fmt(mean(bound_ratio), 4) << " (>= 1.15), mean SP/ref=" << fmt(mean(sp_ratio), 4)
           << " (<= 1.05) (" << fmt(dt, 3) << "s)";
  v.require(mean(bound_ratio) >= 1.15, "mean bound/ref");
  v.require(mean(sp_ratio) <= 1.05, "mean SP/ref");
  v.require(dt < 300.0, "under 5 min");
}

void criterion6(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> opt_gap, lp_gap;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Graph g = gen_er(100, 0.5, s);
    const std::string name = "G(100,0.5)#" + std::to_string(s);
    const CutSet e = CutSet::eigenbasis(g.adjacency());
    const MaxcutRelaxation r = relax(name, g, e);
    const double zref = reference_cut(g);
    opt_gap.push_back(r.sp / zref);
    lp_gap.push_back(r.sp / r.sd);
    g_rounding.push_back(r);
    CuttingPlaneOptions o;
    o.budget = 20;
    o.batch = 10;
    g_traces.push_back({"C6 " + name, cutting_plane(gw_instance(g), e, o).trace});
  }
  v.detail << " mean opt_gap=" << fmt(mean(opt_gap), 5) << " (<= 1.03), mean lp_gap=" << fmt(mean(lp_gap), 5)
           << " (<= 1.10) (" << fmt(seconds_since(t0), 3) << "s)";
  v.require(mean(opt_gap) <= 1.03, "mean opt_gap");
  v.require(mean(lp_gap) <= 1.10, "mean lp_gap");
}

void criterion7(Verdict& v) {
  double worst = kInf;
  std::string worst_name;
  for (const auto& r : g_rounding) {
    const CutResult c = gw_round(r.graph, r.y, 100, 1);
    const double q = c.value / r.sd;
    if (q < worst) {
      worst = q;
      worst_name = r.name;
    }
    v.require(c.value >= 0.878 * r.sd, r.name + " rounding guarantee");
  }
  const Graph p = parse_edgelist(read_text_file(fixture("petersen.edges")));
  const CutSet e = CutSet::eigenbasis(p.adjacency());
  const SymMatrix y = rounding_matrix(p, solve(build_SP(p, e)), e);
  int hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) hits += gw_round(p, y, 100, s).value == 12.0;
  v.detail << " " << g_rounding.size() << " instances; worst cut/SD=" << fmt(worst, 4) << " (" << worst_name
           << "); Petersen 12 in " << hits << "/100 runs";
  v.require(hits >= 95, "Petersen hit rate");
}

void criterion8(Verdict& v) {
  Rng rng(2024);
  int tight = 0;
  for (int t = 0; t < 30; ++t) {
    const int n = 6 + static_cast<int>(rng.below(9));
    const double p = 0.2 + 0.6 * rng.uniform();
    const Graph g = gen_er(n, p, rng);
    const MaxcutRelaxation r = relax("random", g, CutSet::eigenbasis(g.adjacency()));
    const double rounded = gw_round(g, r.y, 100, static_cast<std::uint64_t>(t)).value;
    const double exact = brute_force_maxcut(g).value;
    v.require(rounded <= exact, "rounded <= exact on graph " + std::to_string(t));
    v.require(exact <= r.sp, "exact <= SP on graph " + std::to_string(t) + " (" + fmt(exact, 17) + " vs " +
                                 fmt(r.sp, 17) + ")");
    tight += rounded == exact;
  }
  v.detail << " 30 graphs, n in [6,14]; rounding found the optimum on " << tight;
}

void criterion9(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> first{5, 6, 7, 8}, second{1, 2, 3, 4};
  auto recovered = [&](const CovMatrix& c) {
    const auto rounds = sparse_pca(c, {4, 4});
    auto one_based = [](std::vector<int> s) {
      for (int& i : s) ++i;
      std::sort(s.begin(), s.end());
      return s;
    };
    return one_based(rounds[0].component.support) == first && one_based(rounds[1].component.support) == second;
  };
  v.require(recovered(synthetic_covariance()), "recovery on the true covariance");
  int hits = 0;
  for (std::uint64_t s = 0; s < 10; ++s) hits += recovered(synthetic_sample_covariance(20000, s));
  v.require(hits >= 9, "recovery in at least 9 of 10 sample covariances");

  std::vector<double> ratios;
  int converged = 0;
  SpcaOptions lp;
  lp.solver.interior_point = true;
  SpcaReferenceOptions ro;
  ro.rel_tol = 1e-3;
  ro.max_iter = 20000;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const CovMatrix c = wishart_covariance(80, 20.0, s);
    const auto rounds = sparse_pca(c, {5}, lp);
    v.require(rounds[0].report.optimal(), "LSPCA optimal on draw " + std::to_string(s));
    // The ADMM primal value is feasible for the SDP, so the ratio errs low.
    const SolveReport ref = spca_reference(c, 5, ro);
    converged += ref.optimal();
    ratios.push_back(ref.objective / rounds[0].report.objective);
  }
  const double dt = seconds_since(t0);
  v.detail << " synthetic recovery " << hits << "/10 sample covariances (20000 draws) plus the true covariance;"
           << " median SDP/LSPCA over 20 Wishart p=80 draws=" << fmt(median(ratios), 4) << " (>= 0.75, "
           << converged << "/20 references at 1e-3 gap) (" << fmt(dt, 3) << "s)";
  v.require(median(ratios) >= 0.75, "median ratio");
  v.require(dt < 600.0, "under 10 min");
}

void criterion10(Verdict& v) {
  const double c5 = theta_reference(ThetaInstance(cycle(5))).objective;
  const double k4 = theta_reference(ThetaInstance(complete(4))).objective;
  const double e6 = theta_reference(ThetaInstance(Graph(6, {}))).objective;
  v.require(std::abs(c5 - std::sqrt(5.0)) <= 1e-3, "theta(C5)");
  v.require(std::abs(k4 - 1.0) <= 1e-3, "theta(K4)");
  v.require(std::abs(e6 - 6.0) <= 1e-4, "theta(empty_6)");
  v.detail << " theta(C5)=" << fmt(c5, 8) << " theta(K4)=" << fmt(k4, 8) << " theta(E6)=" << fmt(e6, 8) << ";";

  const Graph g = gen_regular(50, 6, std::uint64_t{0});
  const double ref = theta_reference(ThetaInstance(g)).objective;
  ThetaExperimentOptions o;
  o.budget = 250;
  o.batch = 10;
  double ratio[2];
  for (int k = 0; k < 2; ++k) {
    o.policy = k == 0 ? CutPolicy::Eigen : CutPolicy::Oracle;
    const auto t0 = std::chrono::steady_clock::now();
    const ThetaExperimentResult r = theta_experiment(g, o, ref);
    ratio[k] = r.trace.back().ratio;
    Trace t;
    for (const auto& p : r.trace) t.push_back({p.cuts, p.objective});
    g_traces.push_back({std::string("C10 ") + (k == 0 ? "eigen" : "oracle"), t});
    v.detail << " " << (k == 0 ? "eigen" : "oracle") << " ratio=" << fmt(ratio[k], 4) << " after "
             << r.trace.back().cuts << " cuts (" << fmt(seconds_since(t0), 3) << "s);";
  }
  v.require(ratio[0] >= 0.85, "eigen policy ratio");
  v.require(ratio[1] < 0.15, "oracle policy ratio");
}

void criterion11(Verdict& v) {
  std::size_t points = 0;
  for (const auto& [name, t] : g_traces) {
    points += t.size();
    v.require(!t.empty(), name + " has a trace");
    v.require(trace_monotone(t, Sense::Maximize, 1e-7), name + " monotone");
  }
  v.detail << " " << g_traces.size() << " traces, " << points << " points";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
      {"distance-regular tightness", criterion1},  {"eigenvalue-bound dominance", criterion2},
      {"sandwich and optimal cut set", criterion3}, {"SD spectral lower bound", criterion4},
      {"planted instances", criterion5},            {"ER gaps", criterion6},
      {"rounding guarantee", criterion7},           {"brute-force equivalence", criterion8},
      {"sparse PCA recovery and ratio", criterion9}, {"theta values and cut policies", criterion10},
      {"trace monotonicity", criterion11}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    failed += !v.pass;
    std::printf("criterion %2zu %s  %s:%s [%.1fs]\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first,
                v.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
