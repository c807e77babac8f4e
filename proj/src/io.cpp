#include <sdprelax/io.hpp>
#include <sdprelax/maxcut.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

namespace sdprelax {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, long long& out) {
  s = trim(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Graph parse_edgelist(std::string_view text, EdgeListOptions opts) {
  std::vector<Edge> edges;
  int declared_n = -1;
  long long max_index = -1;
  const auto lines = lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const int lineno = static_cast<int>(ln) + 1;
    std::string_view line = lines[ln];
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
      std::string_view comment = trim(line.substr(hash + 1));
      if (comment.rfind("n=", 0) == 0) {
        long long n;
        if (!parse_int(comment.substr(2), n) || n < 1) throw ParseError("bad vertex count directive", lineno);
        declared_n = static_cast<int>(n);
      }
      line = line.substr(0, hash);
    }
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 3) {
      throw ParseError("expected 'u v [w]', got " + std::to_string(tok.size()) + " fields", lineno);
    }
    long long u, v;
    if (!parse_int(tok[0], u) || !parse_int(tok[1], v)) throw ParseError("vertex index is not an integer", lineno);
    double w = 1.0;
    if (tok.size() == 3 && !parse_double(tok[2], w)) throw ParseError("weight is not a number", lineno);
    const long long base = opts.zero_based ? 0 : 1;
    u -= base;
    v -= base;
    if (u < 0 || v < 0) throw ParseError("vertex index out of range", lineno);
    if (u == v) throw ParseError("self-loop at vertex " + std::to_string(u + base), lineno);
    if (w < 0.0) throw ParseError("negative edge weight", lineno);
    max_index = std::max({max_index, u, v});
    edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
  }
  const int n = declared_n > 0 ? declared_n : static_cast<int>(max_index + 1);
  if (n < 1) throw ParseError("edge list has no vertices");
  if (max_index >= n) throw ParseError("vertex index out of range for n=" + std::to_string(n));
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      const int base = opts.zero_based ? 0 : 1;
      throw ParseError("duplicate edge (" + std::to_string(e.u + base) + "," + std::to_string(e.v + base) + ")");
    }
  }
  return Graph(n, std::move(edges));
}

namespace {

long tsplib_nint(double x) { return static_cast<long>(x + 0.5); }

double geo_radians(double x) {
  constexpr double kPi = 3.141592;
  const double deg = static_cast<double>(static_cast<long>(x));
  const double min = x - deg;
  return kPi * (deg + 5.0 * min / 3.0) / 180.0;
}

}  // namespace

Graph parse_tsplib(std::string_view text) {
  std::map<std::string, std::string> header;
  std::vector<std::array<double, 2>> coords;
  std::vector<double> weights;
  enum class Section { Header, Coords, Weights, Skip } section = Section::Header;
  const auto lines = lines_of(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const int lineno = static_cast<int>(ln) + 1;
    const std::string_view line = trim(lines[ln]);
    if (line.empty()) continue;
    const std::string head = upper(split_ws(line)[0]);
    if (head == "EOF") break;
    if (head == "NODE_COORD_SECTION") {
      section = Section::Coords;
      continue;
    }
    if (head == "EDGE_WEIGHT_SECTION") {
      section = Section::Weights;
      continue;
    }
    if (head.size() > 8 && head.substr(head.size() - 8) == "_SECTION") {
      section = Section::Skip;
      continue;
    }
    const std::size_t colon = line.find(':');
    if (colon != std::string_view::npos && std::isalpha(static_cast<unsigned char>(line[0]))) {
      header[upper(trim(line.substr(0, colon)))] = upper(trim(line.substr(colon + 1)));
      section = Section::Header;
      continue;
    }
    if (section == Section::Coords) {
      const auto tok = split_ws(line);
      double x, y;
      if (tok.size() < 3 || !parse_double(tok[1], x) || !parse_double(tok[2], y)) {
        throw ParseError("malformed coordinate line", lineno);
      }
      coords.push_back({x, y});
    } else if (section == Section::Weights) {
      for (const auto& tok : split_ws(line)) {
        double w;
        if (!parse_double(tok, w)) throw ParseError("malformed edge weight", lineno);
        weights.push_back(w);
      }
    } else if (section == Section::Header) {
      throw ParseError("unrecognized line '" + std::string(line) + "'", lineno);
    }
  }

  if (!header.count("DIMENSION")) throw ParseError("missing DIMENSION");
  long long dim;
  if (!parse_int(header["DIMENSION"], dim) || dim < 1) throw ParseError("bad DIMENSION");
  const int n = static_cast<int>(dim);
  const std::string type = header.count("EDGE_WEIGHT_TYPE") ? header["EDGE_WEIGHT_TYPE"] : "";
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);

  if (type == "EUC_2D" || type == "GEO") {
    if (static_cast<int>(coords.size()) != n) {
      throw ParseError("DIMENSION " + std::to_string(n) + " but " + std::to_string(coords.size()) + " coordinates");
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double w;
        if (type == "EUC_2D") {
          const double dx = coords[i][0] - coords[j][0];
          const double dy = coords[i][1] - coords[j][1];
          w = static_cast<double>(tsplib_nint(std::sqrt(dx * dx + dy * dy)));
        } else {
          constexpr double kRadius = 6378.388;
          const double lat_i = geo_radians(coords[i][0]), lon_i = geo_radians(coords[i][1]);
          const double lat_j = geo_radians(coords[j][0]), lon_j = geo_radians(coords[j][1]);
          const double q1 = std::cos(lon_i - lon_j);
          const double q2 = std::cos(lat_i - lat_j);
          const double q3 = std::cos(lat_i + lat_j);
          w = static_cast<double>(
              static_cast<long>(kRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0));
        }
        edges.push_back({i, j, w});
      }
    }
  } else if (type == "EXPLICIT") {
    const std::string format = header.count("EDGE_WEIGHT_FORMAT") ? header["EDGE_WEIGHT_FORMAT"] : "";
    Matrix w = Matrix::Zero(n, n);
    std::size_t expected;
    if (format == "FULL_MATRIX") {
      expected = static_cast<std::size_t>(n) * n;
    } else if (format == "UPPER_ROW") {
      expected = static_cast<std::size_t>(n) * (n - 1) / 2;
    } else if (format == "LOWER_DIAG_ROW") {
      expected = static_cast<std::size_t>(n) * (n + 1) / 2;
    } else {
      throw ParseError("unsupported EDGE_WEIGHT_FORMAT '" + format + "'");
    }
    if (weights.size() != expected) {
      throw ParseError("EDGE_WEIGHT_SECTION has " + std::to_string(weights.size()) + " entries, expected " +
                       std::to_string(expected) + " for " + format);
    }
    std::size_t k = 0;
    if (format == "FULL_MATRIX") {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w(i, j) = weights[k++];
      if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
        throw ParseError("FULL_MATRIX is not symmetric");
      }
    } else if (format == "UPPER_ROW") {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) w(i, j) = weights[k++];
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) w(j, i) = weights[k++];
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges.push_back({i, j, w(i, j)});
  } else {
    throw ParseError("unsupported EDGE_WEIGHT_TYPE '" + type + "'");
  }
  return Graph(n, std::move(edges));
}

SymMatrix parse_csv_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  const auto lines = lines_of(text);
  bool first = true;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const int lineno = static_cast<int>(ln) + 1;
    const std::string_view line = trim(lines[ln]);
    if (line.empty()) continue;
    std::vector<double> row;
    bool numeric = true;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      double v;
      if (parse_double(cell, v)) {
        row.push_back(v);
      } else {
        numeric = false;
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw ParseError("non-numeric cell", lineno);
    }
    first = false;
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw ParseError("empty matrix");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw ParseError("matrix is not square: row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " cells, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  try {
    return SymMatrix(std::move(m));
  } catch (const InvalidMatrix& e) {
    throw ParseError(e.what());
  }
}

std::vector<std::string> csv_header(std::string_view text) {
  for (const auto& raw : lines_of(text)) {
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    bool numeric = true;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      double v;
      if (!parse_double(cell, v)) numeric = false;
      cells.emplace_back(cell);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return numeric ? std::vector<std::string>{} : cells;
  }
  return {};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Graph gen_er(int n, double p, Rng& rng) {
  if (n < 1) throw GeneratorError("er: n must be positive");
  if (!(p > 0.0 && p < 1.0)) throw GeneratorError("er: p must lie in (0,1)");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
    }
  }
  return Graph(n, std::move(edges));
}

Graph gen_er(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  return gen_er(n, p, rng);
}

Graph gen_regular(int n, int d, Rng& rng) {
  if (n < 1 || d < 0 || d >= n) throw GeneratorError("regular: need 0 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0) throw GeneratorError("regular: n*d must be even");
  constexpr int kRestarts = 1000;
  for (int attempt = 0; attempt < kRestarts; ++attempt) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    std::set<std::pair<int, int>> present;
    std::vector<Edge> edges;
    bool dead_end = false;
    while (!stubs.empty()) {
      // Any admissible pair left? Otherwise this pairing cannot complete.
      bool admissible = false;
      for (std::size_t a = 0; a < stubs.size() && !admissible; ++a) {
        for (std::size_t b = a + 1; b < stubs.size(); ++b) {
          const int u = std::min(stubs[a], stubs[b]), v = std::max(stubs[a], stubs[b]);
          if (u != v && !present.count({u, v})) {
            admissible = true;
            break;
          }
        }
      }
      if (!admissible) {
        dead_end = true;
        break;
      }
      while (true) {
        const std::size_t a = rng.below(stubs.size());
        std::size_t b = rng.below(stubs.size() - 1);
        if (b >= a) ++b;
        const int u = std::min(stubs[a], stubs[b]), v = std::max(stubs[a], stubs[b]);
        if (u == v || present.count({u, v})) continue;
        present.emplace(u, v);
        edges.push_back({u, v, 1.0});
        const std::size_t hi = std::max(a, b), lo = std::min(a, b);
        stubs[hi] = stubs.back();
        stubs.pop_back();
        stubs[lo] = stubs.back();
        stubs.pop_back();
        break;
      }
    }
    if (!dead_end) {
      std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.u, x.v) < std::tie(y.u, y.v);
      });
      return Graph(n, std::move(edges));
    }
  }
  throw GeneratorError("regular: pairing retry cap exceeded");
}

Graph gen_regular(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  return gen_regular(n, d, rng);
}

std::string InstanceSpec::describe() const {
  if (source == Source::File) return path;
  std::string s = generator + ":";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) s += ",";
    first = false;
    std::ostringstream o;
    o << v;
    s += k + "=" + o.str();
  }
  return s;
}

InstanceSpec parse_generator_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw GeneratorError("generator spec '" + text + "' lacks ':'");
  InstanceSpec spec;
  spec.source = InstanceSpec::Source::Generator;
  spec.generator = text.substr(0, colon);
  std::string_view rest(text);
  rest.remove_prefix(colon + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    std::size_t comma = rest.find(',', start);
    if (comma == std::string_view::npos) comma = rest.size();
    const std::string_view kv = trim(rest.substr(start, comma - start));
    if (!kv.empty()) {
      const std::size_t eq = kv.find('=');
      double v;
      if (eq == std::string_view::npos || !parse_double(kv.substr(eq + 1), v)) {
        throw GeneratorError("bad parameter '" + std::string(kv) + "' in '" + text + "'");
      }
      spec.params[std::string(trim(kv.substr(0, eq)))] = v;
    }
    start = comma + 1;
  }
  static const std::map<std::string, std::vector<std::string>> kParams = {
      {"er", {"n", "p"}}, {"regular", {"d", "n"}}, {"planted", {"d", "l", "n"}}};
  auto it = kParams.find(spec.generator);
  if (it == kParams.end()) throw GeneratorError("unknown generator '" + spec.generator + "'");
  std::vector<std::string> keys;
  for (const auto& [k, v] : spec.params) keys.push_back(k);
  if (keys != it->second) throw GeneratorError("generator '" + spec.generator + "' takes parameters exactly " + [&] {
    std::string s;
    for (const auto& k : it->second) s += (s.empty() ? "" : ",") + k;
    return s;
  }());
  for (const auto& k : {"n", "d", "l"}) {
    auto p = spec.params.find(k);
    if (p != spec.params.end() && (p->second < 0 || p->second != std::floor(p->second))) {
      throw GeneratorError(std::string("parameter ") + k + " must be a non-negative integer");
    }
  }
  return spec;
}

FileFormat guess_format(const std::string& path) {
  auto ends = [&](const std::string& suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends(".tsp")) return FileFormat::Tsplib;
  if (ends(".csv")) return FileFormat::CsvMatrix;
  return FileFormat::EdgeList;
}

InstanceSpec file_spec(const std::string& path, std::optional<FileFormat> format) {
  InstanceSpec spec;
  spec.source = InstanceSpec::Source::File;
  spec.path = path;
  spec.format = format ? *format : guess_format(path);
  return spec;
}

Graph make_graph(const InstanceSpec& spec, std::uint64_t seed) {
  if (spec.source == InstanceSpec::Source::File) {
    const std::string text = read_text_file(spec.path);
    switch (spec.format) {
      case FileFormat::EdgeList:
        return parse_edgelist(text, {spec.zero_based});
      case FileFormat::Tsplib:
        return parse_tsplib(text);
      case FileFormat::CsvMatrix:
        throw std::invalid_argument("'" + spec.path + "' is a matrix, not a graph");
    }
  }
  const auto& p = spec.params;
  if (spec.generator == "er") return gen_er(static_cast<int>(p.at("n")), p.at("p"), seed);
  if (spec.generator == "regular") return gen_regular(static_cast<int>(p.at("n")), static_cast<int>(p.at("d")), seed);
  return planted_instance(static_cast<int>(p.at("n")), static_cast<int>(p.at("d")), static_cast<int>(p.at("l")), seed);
}

}  // namespace sdprelax
