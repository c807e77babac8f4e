#include "cli.hpp"

#include <sdprelax/io.hpp>
#include <sdprelax/maxcut.hpp>
#include <sdprelax/rng.hpp>
#include <sdprelax/spca.hpp>
#include <sdprelax/theta.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>

namespace sdprelax::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// Accumulates time spent in a named phase.
template <class F>
auto timed(double& slot, F&& f) {
  Stopwatch w;
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    slot += w.seconds();
  } else {
    auto r = f();
    slot += w.seconds();
    return r;
  }
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double ratio(double a, double b) { return std::isfinite(a) && std::isfinite(b) && b != 0.0 ? a / b : kNaN; }

// Statuses that count as finishing as specified: converged, or a cut budget
// that ran out.
bool acceptable(SolveStatus s) { return s == SolveStatus::Optimal || s == SolveStatus::IterationLimit; }

std::optional<FileFormat> format_flag(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "edgelist") return FileFormat::EdgeList;
  if (name == "tsplib") return FileFormat::Tsplib;
  if (name == "csv") return FileFormat::CsvMatrix;
  throw std::invalid_argument("unknown input format '" + name + "' (expected edgelist, tsplib or csv)");
}

InstanceSpec instance_spec(const InstanceFlags& f) {
  if (f.file.empty() == f.gen.empty()) throw std::invalid_argument("give exactly one of --file and --gen");
  if (!f.gen.empty()) return parse_generator_spec(f.gen);
  InstanceSpec spec = file_spec(resolve_path(f.file), format_flag(f.input_format));
  spec.zero_based = f.zero_based;
  return spec;
}

Json instance_json(const InstanceSpec& spec, std::uint64_t seed, int n, double m_total) {
  Json j;
  j["source"] = spec.source == InstanceSpec::Source::File ? "file" : "generator";
  j["descriptor"] = spec.describe();
  j["seed"] = seed;
  j["rng"] = Rng::kAlgorithm;
  j["n"] = n;
  j["m_total"] = m_total;
  return j;
}

Json software_json() { return Json{{"name", "sdprelax"}, {"version", kVersion}}; }

Json tolerances_json(double psd_tol, const SolverOptions& so) {
  return Json{{"psd", psd_tol},
              {"lp_feasibility", so.feas_tol},
              {"lp_optimality", so.opt_tol},
              {"duplicate_cut", CutSet::kDuplicateTol},
              {"asymmetry", SymMatrix::kAsymmetryTol}};
}

Json trace_json(const std::vector<std::pair<std::size_t, double>>& trace, double (*map)(const Graph&, double),
                const Graph* g) {
  Json arr = Json::array();
  for (const auto& [cuts, value] : trace) arr.push_back(Json{{"cuts", cuts}, {"value", map ? map(*g, value) : value}});
  return arr;
}

// Unit-diagonal PSD matrix nearest in spirit to x, for rounding an
// interior-point solution that is PSD and unit-diagonal only to tolerance.
SymMatrix normalized_psd(const SymMatrix& x) {
  Matrix p = psd_projection(x).dense();
  const Vector d = p.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  p = d.asDiagonal() * p * d.asDiagonal();
  p.diagonal().setOnes();
  return SymMatrix(std::move(p));
}

}  // namespace

std::string resolve_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path) || fs::path(path).is_absolute()) return path;
  if (const char* dir = std::getenv("SDPRELAX_FIXTURES")) {
    const fs::path alt = fs::path(dir) / path;
    if (fs::exists(alt)) return alt.string();
  }
  return path;
}

Json error_json(const std::string& type, const std::string& message) {
  return Json{{"error", Json{{"type", type}, {"message", message}}}};
}

Outcome run_maxcut(const MaxcutFlags& f) {
  Stopwatch total;
  double t_build = 0, t_solve = 0, t_eig = 0, t_ref = 0, t_round = 0;
  const InstanceSpec spec = instance_spec(f.instance);
  if (spec.source == InstanceSpec::Source::File && spec.format == FileFormat::CsvMatrix) {
    throw std::invalid_argument("maxcut needs a graph, not a matrix file");
  }
  const CutPolicy policy = parse_cut_policy(f.cuts);
  if (f.sdp_ref != "ipm" && f.sdp_ref != "cutting-plane" && f.sdp_ref != "none") {
    throw std::invalid_argument("--sdp-ref must be ipm, cutting-plane or none");
  }
  if (f.rounds < 1) throw std::invalid_argument("--rounds must be at least 1");

  const Graph g = make_graph(spec, f.seed);
  const SdpInstance inst = gw_instance(g);
  SolverOptions so;
  Outcome out;

  const CutSet eig_w = timed(t_eig, [&] { return CutSet::eigenbasis(g.adjacency()); });
  const CutSet seed_set = policy == CutPolicy::Oracle ? CutSet(g.n()) : eig_w;

  SolveReport sp;
  CutSet final_cuts = seed_set;
  std::vector<std::pair<std::size_t, double>> trace;
  if (policy == CutPolicy::Eigen) {
    const RelaxationModel model = timed(t_build, [&] { return build_LS(inst, seed_set); });
    sp = timed(t_solve, [&] { return solve(model, so); });
    trace.emplace_back(seed_set.size(), sp.objective);
  } else {
    CuttingPlaneOptions cp;
    cp.budget = f.budget;
    cp.batch = f.batch;
    cp.tol = f.tol;
    cp.solver = so;
    CuttingPlaneResult res = timed(t_solve, [&] { return cutting_plane(inst, seed_set, cp); });
    sp = std::move(res.report);
    final_cuts = std::move(res.cuts);
    trace = std::move(res.trace);
  }
  out.ok &= acceptable(sp.status);
  if (!sp.primal_X) throw NumericalFailure(std::string("SP relaxation ended with status ") + to_string(sp.status));

  // Inner bound over S, the positive eigenvectors of the SP solution and the
  // standard basis.
  CutSet sd_set = final_cuts;
  {
    const EigenDecomposition e = timed(t_eig, [&] { return eig_decompose(*sp.primal_X); });
    const double scale = std::max(1.0, std::abs(e.max_value()));
    for (Eigen::Index k = 0; k < e.size(); ++k) {
      if (e.values(k) > 1e-9 * scale) sd_set.add(e.vectors.col(k), CutOrigin::Eigen);
    }
    sd_set.add_all(CutSet::standard_basis(g.n()));
  }
  const RelaxationModel sd_model = timed(t_build, [&] { return build_SD(g, sd_set); });
  const SolveReport sd = timed(t_solve, [&] { return solve(sd_model, so); });
  out.ok &= sd.optimal();

  Json cuts = Json::object();
  CutResult best{{}, -1.0, ""};
  auto consider = [&](const CutResult& c, const char* key) {
    cuts[key] = c.value;
    if (c.value > best.value) best = c;
  };
  timed(t_round, [&] {
    const SymMatrix y = rounding_matrix(g, sp, final_cuts, so);
    consider(gw_round(g, y, f.rounds, f.seed), "lp_rounding");
  });

  SolveReport ref;
  bool have_ref = false;
  if (f.sdp_ref == "ipm") {
    ref = timed(t_ref, [&] { return reference_sdp(inst); });
    have_ref = true;
    out.ok &= ref.optimal();
    if (ref.primal_X) {
      timed(t_round, [&] { consider(gw_round(g, normalized_psd(*ref.primal_X), f.rounds, f.seed), "gw_sdp"); });
    }
  } else if (f.sdp_ref == "cutting-plane") {
    CuttingPlaneOptions cp;
    cp.budget = f.ref_budget;
    cp.batch = f.ref_batch;
    cp.tol = f.tol;
    cp.solver = so;
    CutSet start = eig_w;
    start.add_all(CutSet::standard_basis(g.n()));
    CuttingPlaneResult res = timed(t_ref, [&] { return cutting_plane(inst, start, cp); });
    ref = std::move(res.report);
    have_ref = true;
    out.ok &= acceptable(ref.status);
  }

  for (const auto& b : f.baselines) {
    if (b == "greedy") {
      consider(greedy_cut(g), "greedy");
    } else if (b == "sweep") {
      consider(timed(t_eig, [&] { return sweep_cut(g); }), "sweep");
    } else if (b == "brute") {
      if (g.n() <= 22) consider(brute_force_maxcut(g), "brute_force");
    } else {
      throw std::invalid_argument("unknown baseline '" + b + "' (expected greedy, sweep or brute)");
    }
  }

  const double z_sp = cut_bound_from_raw(g, sp.objective);
  const double z_sd = sd.optimal() ? cut_bound_from_raw(g, sd.objective) : kNaN;
  // Only a converged reference is the SDP value; a truncated cutting-plane
  // run is an upper bound and is reported separately.
  const double z_ref = have_ref && ref.optimal() ? cut_bound_from_raw(g, ref.objective) : kNaN;
  const double ref_bound = have_ref && acceptable(ref.status) ? cut_bound_from_raw(g, ref.objective) : kNaN;
  const double bound = timed(t_eig, [&] { return eigenvalue_bound(g); });

  Json r;
  r["command"] = "maxcut";
  r["software"] = software_json();
  r["instance"] = instance_json(spec, f.seed, g.n(), g.m_total());
  r["parameters"] = Json{{"cuts", f.cuts},      {"sdp_ref", f.sdp_ref},     {"budget", f.budget},
                         {"batch", f.batch},    {"ref_budget", f.ref_budget}, {"ref_batch", f.ref_batch},
                         {"rounds", f.rounds},  {"baselines", f.baselines}};
  r["tolerances"] = tolerances_json(f.tol, so);
  Json res;
  res["z_sp"] = z_sp;
  res["z_sd"] = number(z_sd);
  res["z_ref"] = number(z_ref);
  res["ref_upper_bound"] = number(ref_bound);
  res["raw"] = Json{{"sp", sp.objective}, {"sd", number(sd.optimal() ? sd.objective : kNaN)},
                    {"ref", number(have_ref ? ref.objective : kNaN)}};
  res["eigenvalue_bound"] = bound;
  res["lp_gap"] = number(ratio(z_sp, z_sd));
  res["opt_gap"] = number(ratio(z_sp, z_ref));
  res["bound_gap"] = number(ratio(bound, z_ref));
  res["best_cut"] = Json{{"value", best.value}, {"method", best.method}};
  res["cuts"] = cuts;
  res["cut_count"] = final_cuts.size();
  res["sd_vectors"] = sd_set.size();
  res["statuses"] = Json{{"sp", to_string(sp.status)},
                         {"sd", to_string(sd.status)},
                         {"ref", have_ref ? Json(to_string(ref.status)) : Json(nullptr)}};
  r["results"] = res;
  r["traces"] = Json{{"sp", trace_json(trace, cut_bound_from_raw, &g)}};
  r["timings"] = Json{{"build", t_build}, {"solve", t_solve}, {"eig", t_eig}, {"reference", t_ref},
                      {"rounding", t_round}, {"total", total.seconds()}};
  r["status"] = out.ok ? "ok" : "incomplete";
  out.report = std::move(r);
  return out;
}

Outcome run_theta(const ThetaFlags& f) {
  Stopwatch total;
  double t_ref = 0, t_run = 0;
  const InstanceSpec spec = instance_spec(f.instance);
  if (spec.source == InstanceSpec::Source::File && spec.format == FileFormat::CsvMatrix) {
    throw std::invalid_argument("theta needs a graph, not a matrix file");
  }
  if (f.sdp_ref != "ipm" && f.sdp_ref != "cutting-plane" && f.sdp_ref != "none") {
    throw std::invalid_argument("--sdp-ref must be ipm, cutting-plane or none");
  }
  const Graph g = make_graph(spec, f.seed);
  const ThetaInstance ti(g);
  Outcome out;

  SolveReport ref;
  double z_ref = kNaN;
  if (f.sdp_ref == "ipm") {
    ref = timed(t_ref, [&] { return theta_reference(ti); });
    out.ok &= ref.optimal();
    if (ref.optimal()) z_ref = ref.objective;
  } else if (f.sdp_ref == "cutting-plane") {
    CuttingPlaneOptions cp;
    cp.budget = f.ref_budget;
    cp.batch = f.ref_batch;
    cp.tol = f.tol;
    CuttingPlaneResult res =
        timed(t_ref, [&] {
          CutSet start = CutSet::eigenbasis(ti.shifted_objective);
          start.add_all(CutSet::standard_basis(g.n()));
          return cutting_plane(theta_sdp(ti, false), start, cp);
        });
    ref = std::move(res.report);
    out.ok &= acceptable(ref.status);
    if (ref.optimal()) z_ref = ref.objective;
  }

  ThetaExperimentOptions eo;
  eo.policy = parse_cut_policy(f.cuts);
  eo.socp = f.socp;
  eo.budget = f.budget;
  eo.batch = f.batch;
  eo.tol = f.tol;
  const ThetaExperimentResult exp = timed(t_run, [&] { return theta_experiment(g, eo, z_ref); });
  out.ok &= acceptable(exp.final_report.status);

  Json trace = Json::array();
  for (const auto& p : exp.trace) {
    trace.push_back(Json{{"cuts", p.cuts}, {"objective", p.objective}, {"ratio", number(p.ratio)}});
  }
  Json r;
  r["command"] = "theta";
  r["software"] = software_json();
  r["instance"] = instance_json(spec, f.seed, g.n(), g.m_total());
  r["parameters"] = Json{{"cuts", f.cuts},   {"sdp_ref", f.sdp_ref},       {"socp", f.socp},
                         {"budget", f.budget}, {"batch", f.batch},           {"ref_budget", f.ref_budget},
                         {"ref_batch", f.ref_batch}};
  r["tolerances"] = tolerances_json(f.tol, eo.solver);
  Json res;
  res["z_ref"] = number(z_ref);
  res["z_lp"] = exp.trace.back().objective;
  res["final_ratio"] = number(exp.trace.back().ratio);
  res["cut_count"] = exp.cuts.size();
  res["statuses"] = Json{{"lp", to_string(exp.final_report.status)},
                         {"ref", f.sdp_ref == "none" ? Json(nullptr) : Json(to_string(ref.status))}};
  r["results"] = res;
  r["traces"] = Json{{"ratio", trace}};
  r["timings"] = Json{{"reference", t_ref}, {"experiment", t_run}, {"total", total.seconds()}};
  r["status"] = out.ok ? "ok" : "incomplete";
  out.report = std::move(r);
  return out;
}

Outcome run_spca(const SpcaFlags& f) {
  Stopwatch total;
  double t_lp = 0, t_ref = 0;
  const int sources = (!f.matrix_file.empty()) + f.synthetic + (f.wishart > 0);
  if (sources != 1) throw std::invalid_argument("give exactly one of a matrix file, --synthetic and --wishart");
  if (f.sdp_ref != "admm" && f.sdp_ref != "ipm" && f.sdp_ref != "none") {
    throw std::invalid_argument("--sdp-ref must be admm, ipm or none");
  }
  std::vector<std::string> names;
  std::string descriptor;
  std::optional<CovMatrix> c;
  if (!f.matrix_file.empty()) {
    const std::string path = resolve_path(f.matrix_file);
    const std::string text = read_text_file(path);
    c.emplace(parse_csv_matrix(text));
    names = csv_header(text);
    descriptor = path;
  } else if (f.synthetic) {
    if (f.samples > 0) {
      c.emplace(synthetic_sample_covariance(f.samples, f.seed));
      descriptor = "synthetic:samples=" + std::to_string(f.samples);
    } else {
      c.emplace(synthetic_covariance());
      descriptor = "synthetic";
    }
  } else {
    c.emplace(wishart_covariance(f.wishart, f.variance, f.seed));
    std::ostringstream d;
    d << "wishart:p=" << f.wishart << ",variance=" << f.variance;
    descriptor = d.str();
  }
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != c->dim()) names.clear();

  SpcaOptions so;
  so.policy = parse_cut_policy(f.cuts);
  so.alpha = f.alpha;
  so.budget = f.budget;
  so.batch = f.batch;
  so.solver.interior_point = so.policy == CutPolicy::Eigen && c->dim() > 40;
  const std::vector<SpcaRound> rounds = timed(t_lp, [&] { return sparse_pca(*c, f.ks, so); });

  Outcome out;
  Json comps = Json::array();
  std::vector<SparseComponent> found;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const SpcaRound& rd = rounds[i];
    out.ok &= acceptable(rd.report.status);
    found.push_back(rd.component);
    Json support = Json::array(), support_names = Json::array(), loadings = Json::array();
    for (int s : rd.component.support) {
      support.push_back(s + 1);
      if (!names.empty()) support_names.push_back(names[s]);
    }
    for (Eigen::Index k = 0; k < rd.component.loading.size(); ++k) loadings.push_back(rd.component.loading(k));
    double z_ref = kNaN;
    Json ref_status = nullptr;
    if (f.sdp_ref != "none") {
      const SolveReport ref = timed(t_ref, [&] {
        SpcaReferenceOptions ro;
        ro.rel_tol = f.ref_tol;
        ro.max_iter = f.ref_iterations;
        return f.sdp_ref == "admm" ? spca_reference(*rd.input, f.ks[i], ro)
                                   : reference_sdp(spca_instance(*rd.input, f.ks[i], std::min(f.alpha, 1.0)));
      });
      out.ok &= ref.optimal();
      ref_status = to_string(ref.status);
      if (ref.optimal()) z_ref = ref.objective;
    }
    Json cj;
    cj["k"] = f.ks[i];
    cj["support"] = support;
    if (!names.empty()) cj["support_names"] = support_names;
    cj["loadings"] = loadings;
    cj["objective"] = rd.component.objective;
    cj["lp_objective"] = rd.report.objective;
    cj["z_ref"] = number(z_ref);
    cj["ratio"] = number(ratio(z_ref, rd.report.objective));
    cj["cut_count"] = rd.cuts;
    cj["statuses"] = Json{{"lp", to_string(rd.report.status)}, {"ref", ref_status}};
    Json tr = Json::array();
    for (const auto& [cuts, value] : rd.trace) tr.push_back(Json{{"cuts", cuts}, {"value", value}});
    cj["trace"] = tr;
    comps.push_back(cj);
  }

  Json r;
  r["command"] = "spca";
  r["software"] = software_json();
  r["instance"] = Json{{"source", f.matrix_file.empty() ? "generator" : "file"},
                       {"descriptor", descriptor},
                       {"seed", f.seed},
                       {"rng", Rng::kAlgorithm},
                       {"p", c->dim()}};
  r["parameters"] = Json{{"ks", f.ks},         {"alpha", f.alpha}, {"cuts", f.cuts},
                         {"sdp_ref", f.sdp_ref}, {"ref_tol", f.ref_tol},
                         {"ref_iterations", f.ref_iterations}, {"budget", f.budget}, {"batch", f.batch}};
  r["tolerances"] = tolerances_json(f.tol, so.solver);
  r["results"] = Json{{"components", comps}, {"explained_variance", explained_variance(*c, found)}};
  r["timings"] = Json{{"lp", t_lp}, {"reference", t_ref}, {"total", total.seconds()}};
  r["status"] = out.ok ? "ok" : "incomplete";
  out.report = std::move(r);
  return out;
}

namespace {

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream o;
    o.precision(10);
    o << v.get<double>();
    return o.str();
  }
  return v.dump();
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : c) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      line += q + "\"";
    } else {
      line += c;
    }
  }
  return line + "\n";
}

const Json& at_or_null(const Json& j, const char* key) {
  static const Json kNull = nullptr;
  return j.contains(key) ? j.at(key) : kNull;
}

}  // namespace

std::string csv_line(const std::vector<std::string>& cells) { return join_row(cells); }

std::vector<std::string> aggregate_header() {
  return {"Graph", "Optimality gap", "LP Gap", "LP cut value", "Greedy", "sweep", "GW", "OPT", "Row", "Command",
          "Status", "Error"};
}

std::vector<std::string> aggregate_row(std::size_t index, const std::string& line, const Json* report,
                                       const std::string& error) {
  std::vector<std::string> row(aggregate_header().size());
  row[8] = std::to_string(index);
  row[9] = line;
  if (report) {
    const Json& rep = *report;
    row[0] = cell(rep.contains("instance") ? at_or_null(rep["instance"], "descriptor") : Json(nullptr));
    if (rep.value("command", "") == "maxcut") {
      const Json& res = rep["results"];
      const Json& cuts = res["cuts"];
      row[1] = cell(res["opt_gap"]);
      row[2] = cell(res["lp_gap"]);
      row[3] = cell(at_or_null(cuts, "lp_rounding"));
      row[4] = cell(at_or_null(cuts, "greedy"));
      row[5] = cell(at_or_null(cuts, "sweep"));
      row[6] = cell(at_or_null(cuts, "gw_sdp"));
      row[7] = cell(at_or_null(cuts, "brute_force"));
    }
    row[10] = cell(rep["status"]);
  } else {
    row[10] = "error";
  }
  row[11] = error;
  return row;
}

std::string report_csv(const Json& rep) {
  std::string out;
  const std::string cmd = rep.value("command", "");
  if (cmd == "maxcut") {
    out += join_row({"Graph", "Optimality gap", "LP Gap", "LP cut value", "Greedy", "sweep", "GW", "OPT", "z_sp",
                     "z_sd", "z_ref", "eigenvalue_bound"});
    const Json& res = rep["results"];
    const Json& cuts = res["cuts"];
    out += join_row({cell(rep["instance"]["descriptor"]), cell(res["opt_gap"]), cell(res["lp_gap"]),
                     cell(at_or_null(cuts, "lp_rounding")), cell(at_or_null(cuts, "greedy")),
                     cell(at_or_null(cuts, "sweep")), cell(at_or_null(cuts, "gw_sdp")),
                     cell(at_or_null(cuts, "brute_force")), cell(res["z_sp"]), cell(res["z_sd"]), cell(res["z_ref"]),
                     cell(res["eigenvalue_bound"])});
  } else if (cmd == "theta") {
    out += join_row({"cuts", "objective", "ratio"});
    for (const auto& p : rep["traces"]["ratio"]) out += join_row({cell(p["cuts"]), cell(p["objective"]), cell(p["ratio"])});
  } else if (cmd == "spca") {
    out += join_row({"component", "k", "support", "objective", "lp_objective", "z_ref", "ratio"});
    std::size_t i = 0;
    for (const auto& c : rep["results"]["components"]) {
      std::string support;
      for (const auto& s : c["support"]) support += (support.empty() ? "" : " ") + cell(s);
      out += join_row({std::to_string(++i), cell(c["k"]), support, cell(c["objective"]), cell(c["lp_objective"]),
                       cell(c["z_ref"]), cell(c["ratio"])});
    }
  }
  return out;
}

}  // namespace sdprelax::cli
