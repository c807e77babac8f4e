#pragma once

#include <sdprelax/graph.hpp>
#include <sdprelax/linalg.hpp>
#include <sdprelax/rng.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdprelax {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EdgeListOptions {
  bool zero_based = false;
};

/// Lines "u v [w]"; '#' starts a comment. A leading "# n=<count>" line fixes
/// the vertex count, otherwise it is the largest index seen.
Graph parse_edgelist(std::string_view text, EdgeListOptions opts = {});

/// TSPLIB: EUC_2D, GEO or EXPLICIT with FULL_MATRIX, UPPER_ROW or
/// LOWER_DIAG_ROW. Produces the complete weighted graph.
Graph parse_tsplib(std::string_view text);

/// Square numeric CSV with an optional header row.
SymMatrix parse_csv_matrix(std::string_view text);
/// Cells of the header row, or empty when the first row is numeric.
std::vector<std::string> csv_header(std::string_view text);

std::string read_text_file(const std::string& path);

/// Each pair independently with probability p, 0 < p < 1.
Graph gen_er(int n, double p, std::uint64_t seed);
Graph gen_er(int n, double p, Rng& rng);

/// Uniform-ish random d-regular simple graph by the pairing model: stubs are
/// matched at random, pairs forming loops or repeated edges are redrawn, and
/// a dead end restarts the pairing (at most 1000 restarts).
Graph gen_regular(int n, int d, std::uint64_t seed);
Graph gen_regular(int n, int d, Rng& rng);

enum class FileFormat { EdgeList, Tsplib, CsvMatrix };

/// File source or generator call such as "er:n=50,p=0.25",
/// "regular:n=50,d=6" or "planted:n=64,d=4,l=5".
struct InstanceSpec {
  enum class Source { File, Generator };
  Source source = Source::File;
  std::string path;
  FileFormat format = FileFormat::EdgeList;
  bool zero_based = false;
  std::string generator;
  std::map<std::string, double> params;

  std::string describe() const;
};

InstanceSpec parse_generator_spec(const std::string& text);
InstanceSpec file_spec(const std::string& path, std::optional<FileFormat> format = std::nullopt);
FileFormat guess_format(const std::string& path);

/// Builds the graph; generators consume `seed`. CsvMatrix is rejected here.
Graph make_graph(const InstanceSpec& spec, std::uint64_t seed);

}  // namespace sdprelax
