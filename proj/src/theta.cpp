#include <sdprelax/theta.hpp>

#include <chrono>
#include <cmath>

namespace sdprelax {

namespace {

SymMatrix shifted(const Graph& g) {
  const Eigen::Index n = g.n();
  return SymMatrix(Matrix(Matrix::Ones(n, n) - g.adjacency().dense()));
}

}  // namespace

ThetaInstance::ThetaInstance(Graph g) : graph(std::move(g)), shifted_objective(shifted(graph)) {}

SdpInstance theta_sdp(const ThetaInstance& inst, bool socp) {
  const Graph& g = inst.graph;
  const int n = g.n();
  SdpInstance sdp(inst.shifted_objective, Sense::Maximize);
  sdp.name = "theta";
  MatrixConstraint tr{"trace", {}, RowSense::Equal, 1.0};
  for (int i = 0; i < n; ++i) tr.terms.push_back({i, i, 1.0});
  sdp.constraints.push_back(std::move(tr));
  for (const auto& e : g.edges()) {
    sdp.constraints.push_back({"edge:" + pair_tag(e.u, e.v), {{e.u, e.v, 0.5}}, RowSense::Equal, 0.0});
  }
  for (int i = 0; i < n; ++i) {
    sdp.entry_bounds.push_back({i, i, 0.0, 1.0, {}});
    for (int j = i + 1; j < n; ++j) sdp.entry_bounds.push_back({i, j, -1.0, 1.0, {}});
  }
  if (socp) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const int xi = sdp.entry_var(i, i), xj = sdp.entry_var(j, j), xij = sdp.entry_var(i, j);
        ConeRow cone{"soc:" + pair_tag(i, j),
                     {AffineExpr{{{xij, 2.0}}, 0.0}, AffineExpr{{{xi, 1.0}, {xj, -1.0}}, 0.0}},
                     AffineExpr{{{xi, 1.0}, {xj, 1.0}}, 0.0}};
        sdp.extra_socp.push_back({std::move(cone), true});
      }
    }
  }
  return sdp;
}

RelaxationModel build_LTn(const ThetaInstance& inst, const CutSet& S, bool socp) {
  return build_LS(theta_sdp(inst, socp), S);
}

SolveReport theta_reference(const ThetaInstance& inst, const ReferenceOptions& opts) {
  return reference_sdp(theta_sdp(inst, false), opts);
}

ThetaExperimentResult theta_experiment(const Graph& g, const ThetaExperimentOptions& opts,
                                       std::optional<double> reference) {
  if (opts.batch < 1 || opts.budget < opts.batch) {
    throw std::invalid_argument("theta_experiment needs budget >= batch >= 1");
  }
  const ThetaInstance inst(g);
  ThetaExperimentResult res{{}, {}, CutSet(g.n()), 0.0};
  if (!reference) {
    const SolveReport ref = theta_reference(inst);
    if (!ref.optimal()) throw NumericalFailure(std::string("theta reference ended with status ") + to_string(ref.status));
    reference = ref.objective;
  }
  res.reference = *reference;

  const CutSet basis = CutSet::eigenbasis(inst.shifted_objective);
  std::size_t next_basis = opts.policy == CutPolicy::Oracle ? basis.size() : 0;
  LpSession session(build_LTn(inst, res.cuts, opts.socp), opts.solver);
  auto record = [&](const SolveReport& rep) {
    res.trace.push_back({res.cuts.size(), rep.objective, res.reference / rep.objective});
  };
  auto add = [&](const Vector& v, CutOrigin origin) {
    if (!res.cuts.add(v, origin)) return false;
    session.add_cut(res.cuts.vectors().back(), "cut:" + std::to_string(res.cuts.size()));
    return true;
  };

  SolveReport rep = session.solve();
  if (!rep.optimal()) {
    throw NumericalFailure(std::string("theta relaxation ended with status ") + to_string(rep.status));
  }
  record(rep);
  std::size_t since_record = 0;
  while (res.cuts.size() < opts.budget) {
    std::size_t added = 0;
    if (next_basis < basis.size()) {
      while (added < opts.batch && next_basis < basis.size() && res.cuts.size() < opts.budget) {
        added += add(basis.vector(next_basis++), CutOrigin::Eigen) ? 1 : 0;
      }
    } else {
      const auto cut = min_eig_cut(*rep.primal_X, opts.tol);
      if (!cut || !add(cut->vector, CutOrigin::Oracle)) break;
      added = 1;
    }
    if (added == 0) continue;
    rep = session.solve();
    if (!rep.optimal()) {
      throw NumericalFailure(std::string("theta relaxation ended with status ") + to_string(rep.status));
    }
    since_record += added;
    if (since_record >= opts.batch || res.cuts.size() >= opts.budget) {
      record(rep);
      since_record = 0;
    }
  }
  if (res.trace.back().cuts != res.cuts.size()) record(rep);
  res.final_report = std::move(rep);
  return res;
}

}  // namespace sdprelax
