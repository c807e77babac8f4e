#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdprelax::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = SDPRELAX_VERSION;

/// Where an instance comes from: exactly one of file or generator is set.
struct InstanceFlags {
  std::string file;
  std::string gen;
  std::string input_format;  // "", "edgelist", "tsplib", "csv"
  bool zero_based = false;
};

struct MaxcutFlags {
  InstanceFlags instance;
  std::uint64_t seed = 0;
  std::string cuts = "eigen";
  std::string sdp_ref = "ipm";
  std::size_t budget = 100;
  std::size_t batch = 1;
  std::size_t ref_budget = 300;
  std::size_t ref_batch = 20;
  int rounds = 100;
  std::vector<std::string> baselines{"greedy", "sweep"};
  double tol = 1e-6;
};

struct SpcaFlags {
  std::string matrix_file;
  bool synthetic = false;
  int samples = 0;
  int wishart = 0;
  double variance = 20.0;
  std::uint64_t seed = 0;
  std::vector<int> ks{1};
  double alpha = 1.0;
  std::string cuts = "eigen";
  std::string sdp_ref = "admm";
  double ref_tol = 1e-4;
  int ref_iterations = 50000;
  std::size_t budget = 100;
  std::size_t batch = 5;
  double tol = 1e-6;
};

struct ThetaFlags {
  InstanceFlags instance;
  std::uint64_t seed = 0;
  std::string cuts = "eigen";
  std::string sdp_ref = "ipm";
  bool socp = false;
  std::size_t budget = 250;
  std::size_t batch = 10;
  std::size_t ref_budget = 300;
  std::size_t ref_batch = 20;
  double tol = 1e-6;
};

/// A finished command: the report and whether every requested computation
/// ended as specified.
struct Outcome {
  Json report;
  bool ok = true;
};

Outcome run_maxcut(const MaxcutFlags& flags);
Outcome run_spca(const SpcaFlags& flags);
Outcome run_theta(const ThetaFlags& flags);

/// Flat rendering of a report: the table row for maxcut, the cut trace for
/// theta, one row per component for spca.
std::string report_csv(const Json& report);

/// Column header of the bench aggregate.
std::vector<std::string> aggregate_header();
/// Aggregate row for one manifest entry; `error` is non-empty on failure.
std::vector<std::string> aggregate_row(std::size_t index, const std::string& line, const Json* report,
                                       const std::string& error);

/// One CSV line with quoting, newline-terminated.
std::string csv_line(const std::vector<std::string>& cells);

/// Resolves a relative path that does not exist against $SDPRELAX_FIXTURES.
std::string resolve_path(const std::string& path);

/// Structured error document printed on stderr.
Json error_json(const std::string& type, const std::string& message);

}  // namespace sdprelax::cli
