#include "cli.hpp"

#include <sdprelax/io.hpp>
#include <sdprelax/solver.hpp>
#include <sdprelax/spca.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace sdprelax::cli;

namespace {

enum ExitCode { kOk = 0, kError = 1, kIncomplete = 2, kPartialFailure = 3 };

struct Commands {
  MaxcutFlags maxcut;
  SpcaFlags spca;
  ThetaFlags theta;
  std::string format = "json";
  std::string out;
  CLI::App* maxcut_cmd = nullptr;
  CLI::App* spca_cmd = nullptr;
  CLI::App* theta_cmd = nullptr;
};

void add_output_options(CLI::App* cmd, Commands& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("--out", c.out, "Write the report to this file instead of stdout");
}

void add_instance_options(CLI::App* cmd, InstanceFlags& f, std::uint64_t& seed) {
  cmd->add_option("--file", f.file, "Instance file (edge list or TSPLIB)");
  cmd->add_option("--gen", f.gen, "Generator, e.g. er:n=50,p=0.25, regular:n=50,d=6, planted:n=64,d=4,l=5");
  cmd->add_option("--input-format", f.input_format, "Override the format guessed from the extension")
      ->check(CLI::IsMember({"edgelist", "tsplib"}));
  cmd->add_flag("--zero-based", f.zero_based, "Edge list vertices start at 0");
  cmd->add_option("--seed", seed, "Generator and rounding seed")->capture_default_str();
}

void register_commands(CLI::App& app, Commands& c) {
  app.require_subcommand(1);

  auto* mc = app.add_subcommand("maxcut", "Max-cut relaxations, roundings and baselines");
  add_instance_options(mc, c.maxcut.instance, c.maxcut.seed);
  mc->add_option("--cuts", c.maxcut.cuts, "Cut policy")
      ->check(CLI::IsMember({"eigen", "oracle", "hybrid"}))
      ->capture_default_str();
  mc->add_option("--sdp-ref", c.maxcut.sdp_ref, "Reference SDP solve")
      ->check(CLI::IsMember({"ipm", "cutting-plane", "none"}))
      ->capture_default_str();
  mc->add_option("--budget", c.maxcut.budget, "Oracle cuts added to the relaxation")->capture_default_str();
  mc->add_option("--batch", c.maxcut.batch, "Oracle cuts per solve")->check(CLI::PositiveNumber)->capture_default_str();
  mc->add_option("--ref-budget", c.maxcut.ref_budget, "Cut budget of the cutting-plane reference")
      ->capture_default_str();
  mc->add_option("--ref-batch", c.maxcut.ref_batch, "Cuts per solve of the cutting-plane reference")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mc->add_option("--rounds", c.maxcut.rounds, "Random hyperplane trials per rounding")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mc->add_option("--baselines", c.maxcut.baselines, "Comma-separated subset of greedy,sweep,brute")
      ->delimiter(',')
      ->capture_default_str();
  mc->add_option("--tol", c.maxcut.tol, "PSD tolerance of the cut loop")->capture_default_str();
  add_output_options(mc, c);
  c.maxcut_cmd = mc;

  auto* sp = app.add_subcommand("spca", "Sparse PCA by linear relaxation");
  sp->add_option("matrix", c.spca.matrix_file, "Covariance matrix CSV");
  sp->add_flag("--synthetic", c.spca.synthetic, "Use the synthetic ten-variable covariance");
  sp->add_option("--samples", c.spca.samples, "With --synthetic: sample covariance of this many draws");
  sp->add_option("--wishart", c.spca.wishart, "Random A^T A covariance of this dimension");
  sp->add_option("--variance", c.spca.variance, "Entry variance of the Wishart factor")->capture_default_str();
  sp->add_option("--seed", c.spca.seed, "Seed for sampled covariances")->capture_default_str();
  sp->add_option("--k", c.spca.ks, "Support size per component, comma-separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sp->add_option("--alpha", c.spca.alpha, "Pairwise row coefficient")->capture_default_str();
  sp->add_option("--cuts", c.spca.cuts, "Cut policy")
      ->check(CLI::IsMember({"eigen", "oracle", "hybrid"}))
      ->capture_default_str();
  sp->add_option("--sdp-ref", c.spca.sdp_ref, "Reference SDP solve")
      ->check(CLI::IsMember({"admm", "ipm", "none"}))
      ->capture_default_str();
  sp->add_option("--ref-tol", c.spca.ref_tol, "Relative bound gap at which the ADMM reference stops")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sp->add_option("--ref-iterations", c.spca.ref_iterations, "Iteration cap of the ADMM reference")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sp->add_option("--budget", c.spca.budget, "Oracle cuts per component")->capture_default_str();
  sp->add_option("--batch", c.spca.batch, "Oracle cuts per solve")->check(CLI::PositiveNumber)->capture_default_str();
  sp->add_option("--tol", c.spca.tol, "PSD tolerance of the cut loop")->capture_default_str();
  add_output_options(sp, c);
  c.spca_cmd = sp;

  auto* th = app.add_subcommand("theta", "Lovasz theta by linear relaxation");
  add_instance_options(th, c.theta.instance, c.theta.seed);
  th->add_option("--cuts", c.theta.cuts, "Cut policy")
      ->check(CLI::IsMember({"eigen", "oracle", "hybrid"}))
      ->capture_default_str();
  th->add_option("--sdp-ref", c.theta.sdp_ref, "Reference SDP solve")
      ->check(CLI::IsMember({"ipm", "cutting-plane", "none"}))
      ->capture_default_str();
  th->add_flag("--socp", c.theta.socp, "Add the 2x2 minor cones");
  th->add_option("--budget", c.theta.budget, "Cuts added in total")->capture_default_str();
  th->add_option("--batch", c.theta.batch, "Cuts per solve and trace interval")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  th->add_option("--ref-budget", c.theta.ref_budget, "Cut budget of the cutting-plane reference")
      ->capture_default_str();
  th->add_option("--ref-batch", c.theta.ref_batch, "Cuts per solve of the cutting-plane reference")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  th->add_option("--tol", c.theta.tol, "PSD tolerance")->capture_default_str();
  add_output_options(th, c);
  c.theta_cmd = th;
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const sdprelax::ParseError*>(&e)) return "parse_error";
  if (dynamic_cast<const sdprelax::GeneratorError*>(&e)) return "generator_error";
  if (dynamic_cast<const sdprelax::NumericalFailure*>(&e)) return "numerical_failure";
  if (dynamic_cast<const sdprelax::InvalidMatrix*>(&e)) return "invalid_matrix";
  if (dynamic_cast<const sdprelax::DegenerateComponent*>(&e)) return "degenerate_component";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
  return "runtime_error";
}

/// Runs whichever subcommand was parsed.
Outcome dispatch(const Commands& c) {
  if (c.maxcut_cmd->parsed()) return run_maxcut(c.maxcut);
  if (c.spca_cmd->parsed()) return run_spca(c.spca);
  return run_theta(c.theta);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string render(const Json& report, const std::string& format) {
  return format == "csv" ? report_csv(report) : report.dump(2) + "\n";
}

// Whitespace-separated words; single or double quotes group.
std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char ch : line) {
    if (quote) {
      if (ch == quote) {
        quote = 0;
      } else {
        cur += ch;
      }
    } else if (ch == '"' || ch == '\'') {
      quote = ch;
      in_word = true;
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      if (in_word) words.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur += ch;
      in_word = true;
    }
  }
  if (quote) throw std::invalid_argument("unterminated quote");
  if (in_word) words.push_back(std::move(cur));
  return words;
}

struct BenchRow {
  std::string line;
  std::optional<Json> report;
  std::string error;
  bool ok = false;
};

BenchRow run_manifest_line(const std::string& line) {
  BenchRow row{line, std::nullopt, "", false};
  try {
    std::vector<std::string> words = split_words(line);
    if (!words.empty() && words.front() == "sdprelax") words.erase(words.begin());
    CLI::App app("manifest row");
    Commands c;
    register_commands(app, c);
    std::reverse(words.begin(), words.end());
    app.parse(words);
    Outcome o = dispatch(c);
    row.ok = o.ok;
    if (!o.ok) row.error = "not every computation reached an accepted status";
    row.report = std::move(o.report);
  } catch (const CLI::ParseError& e) {
    row.error = std::string("usage: ") + e.what();
  } catch (const std::exception& e) {
    row.error = error_type(e) + ": " + e.what();
  }
  return row;
}

int run_bench(const std::string& manifest, const std::string& out_dir, unsigned jobs) {
  const std::string text = sdprelax::read_text_file(resolve_path(manifest));
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(first, last - first + 1));
  }
  fs::create_directories(out_dir);

  std::vector<BenchRow> rows(lines.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < lines.size();) {
      rows[i] = run_manifest_line(lines[i]);
      std::ostringstream name;
      name << std::setw(3) << std::setfill('0') << i + 1 << ".json";
      const Json doc = rows[i].report ? *rows[i].report : error_json("row_failed", rows[i].error);
      write_output(doc.dump(2) + "\n", (fs::path(out_dir) / name.str()).string());
      std::lock_guard lock(io);
      std::cerr << "[" << i + 1 << "/" << lines.size() << "] " << (rows[i].ok ? "ok" : "failed") << ": "
                << lines[i] << "\n";
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, lines.size()))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = csv_line(aggregate_header());
  bool all_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    all_ok &= rows[i].ok;
    csv += csv_line(aggregate_row(i + 1, rows[i].line, rows[i].report ? &*rows[i].report : nullptr, rows[i].error));
  }
  write_output(csv, (fs::path(out_dir) / "aggregate.csv").string());
  return all_ok ? kOk : kPartialFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Linear relaxations of SDPs by eigenvector cuts");
  app.set_version_flag("--version", std::string("sdprelax ") + kVersion);
  Commands c;
  register_commands(app, c);
  app.require_subcommand(1);

  std::string manifest, out_dir = "bench-out";
  unsigned jobs = 1;
  auto* bench = app.add_subcommand("bench", "Run every command line of a manifest");
  bench->add_option("manifest", manifest, "File with one command per line; '#' starts a comment")->required();
  bench->add_option("--out-dir", out_dir, "Directory for the reports and aggregate.csv")->capture_default_str();
  bench->add_option("--jobs", jobs, "Rows evaluated concurrently")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_json("usage", e.what()).dump() << "\n";
    return kError;
  }

  try {
    if (bench->parsed()) return run_bench(manifest, out_dir, jobs);
    const Outcome o = dispatch(c);
    write_output(render(o.report, c.format), c.out);
    return o.ok ? kOk : kIncomplete;
  } catch (const std::exception& e) {
    std::cerr << error_json(error_type(e), e.what()).dump() << "\n";
    return kError;
  }
}
