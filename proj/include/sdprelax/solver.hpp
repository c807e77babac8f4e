#pragma once

#include <sdprelax/model.hpp>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace sdprelax {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

const char* to_string(SolveStatus s);

class ConeUnsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend {
  /// Simplex with cone rows handled by tangent outer approximation.
  Auto,
  /// Plain simplex; models with cone rows are rejected with ConeUnsupported.
  Simplex,
};

bool supports_cones(Backend b);

struct SolverOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  Backend backend = Backend::Auto;
  /// Cap on tangent-cut rounds when cone rows are present.
  int cone_rounds = 500;
  double time_limit = kInf;
  /// Interior point with crossover instead of dual simplex for the first
  /// solve; pays off on large one-shot models.
  bool interior_point = false;
};

/// Duals follow the Lagrangian convention c = A^T y + z in the model's own
/// objective sense, where z are the bound multipliers. For a maximization
/// model a binding "<=" row therefore has y >= 0 and a binding ">=" row has
/// y <= 0.
struct SolveReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::optional<SymMatrix> primal_X;
  Vector aux;
  Vector primal;
  Vector row_duals;
  Vector col_duals;
  /// Multiplier per row tag, per cone tag and per tagged variable bound.
  std::map<std::string, double> duals;
  /// C - sum_i y_i A_i, set by solvers that certify optimality through a dual
  /// matrix; negative semidefinite at a max-sense optimum.
  std::optional<SymMatrix> dual_slack;
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  long iterations = 0;
  double wall_time = 0.0;
  std::string backend;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// A solver session keeps one LP alive so that rows appended between solves
/// are warm-started from the previous basis. One thread of control per
/// session.
class LpSession {
 public:
  LpSession(RelaxationModel model, SolverOptions opts = {});
  ~LpSession();
  LpSession(LpSession&&) noexcept;
  LpSession& operator=(LpSession&&) noexcept;

  const RelaxationModel& model() const { return model_; }
  const SolverOptions& options() const { return opts_; }

  int add_row(LinearRow row);
  int add_cut(const Vector& v, std::string tag);

  SolveReport solve();

 private:
  struct Impl;
  RelaxationModel model_;
  SolverOptions opts_;
  std::unique_ptr<Impl> impl_;
};

SolveReport solve(const RelaxationModel& model, const SolverOptions& opts = {});

}  // namespace sdprelax
