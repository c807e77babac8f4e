#include "helpers.hpp"

#include <sdprelax/maxcut.hpp>

#include <doctest.h>

#include <algorithm>
#include <set>

#include <sstream>

using namespace sdprelax;
using namespace testing;

namespace {

bool same_graph(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.edge_count() != b.edge_count()) return false;
  for (std::size_t k = 0; k < a.edge_count(); ++k) {
    const Edge& x = a.edges()[k];
    const Edge& y = b.edges()[k];
    if (x.u != y.u || x.v != y.v || x.w != y.w) return false;
  }
  return true;
}

std::string parse_error_message(const std::string& text) {
  try {
    parse_edgelist(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("edge lists") {
    const Graph a = parse_edgelist("1 2");
    CHECK(a.n() == 2);
    CHECK(a.m_total() == 1.0);

    const Graph t = parse_edgelist("1 2\n2 3\n3 1");
    CHECK(t.n() == 3);
    CHECK(t.m_total() == 3.0);
    CHECK(t.has_edge(0, 2));

    const Graph w = parse_edgelist("1 2 2.5");
    CHECK(w.m_total() == 2.5);

    const Graph z = parse_edgelist("0 1\n1 2", {true});
    CHECK(z.n() == 3);
    CHECK(z.has_edge(0, 1));

    const Graph padded = parse_edgelist("# n=6\n1 2  # trailing comment\n\n");
    CHECK(padded.n() == 6);
    CHECK(padded.edge_count() == 1);
  }

  TEST_CASE("edge list errors carry line numbers") {
    CHECK(parse_error_message("1 2\n1 x") == "line 2: vertex index is not an integer");
    CHECK(parse_error_message("1 2\n3") == "line 2: expected 'u v [w]', got 1 fields");
    CHECK(parse_error_message("2 2") == "line 1: self-loop at vertex 2");
    CHECK(parse_error_message("1 2\n2 1") == "duplicate edge (2,1)");
    CHECK(parse_error_message("0 1").find("out of range") != std::string::npos);
    CHECK(parse_error_message("# n=2\n1 3").find("out of range") != std::string::npos);
    CHECK(parse_error_message("1 2 -1") == "line 1: negative edge weight");
  }

  TEST_CASE("fixture graphs") {
    const Graph c5 = load_graph("c5.edges");
    CHECK(c5.n() == 5);
    CHECK(c5.m_total() == 5.0);
    const Graph p = load_graph("petersen.edges");
    CHECK(p.n() == 10);
    CHECK(p.m_total() == 15.0);
    for (int d : p.degrees()) CHECK(d == 3);
    CHECK(eig_decompose(p.adjacency()).min_value() == doctest::Approx(-2.0));
  }

  TEST_CASE("edge list round trip") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
      const Graph g = gen_er(12, 0.4, rng);
      CHECK(same_graph(parse_edgelist(to_edgelist(g)), g));
    }
    const Graph w(4, {{0, 1, 2.5}, {2, 3, 0.125}});
    CHECK(same_graph(parse_edgelist(to_edgelist(w)), w));
    const Graph isolated(7, {{0, 1, 1.0}});
    CHECK(same_graph(parse_edgelist(to_edgelist(isolated)), isolated));
  }

  TEST_CASE("TSPLIB") {
    SUBCASE("EUC_2D right triangle") {
      const Graph g = parse_tsplib(
          "NAME: t\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n");
      CHECK(g.n() == 3);
      CHECK(g.m_total() == 12.0);
      std::vector<double> w;
      for (const auto& e : g.edges()) w.push_back(e.w);
      std::sort(w.begin(), w.end());
      CHECK(w == std::vector<double>{3.0, 4.0, 5.0});
    }
    SUBCASE("EUC_2D rounds to the nearest integer") {
      const Graph g =
          parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n");
      CHECK(g.m_total() == 1.0);
    }
    SUBCASE("explicit full matrix") {
      const Graph g = parse_tsplib(
          "DIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 7\n7 0\nEOF\n");
      REQUIRE(g.edge_count() == 1);
      CHECK(g.edges()[0].w == 7.0);
    }
    SUBCASE("explicit upper row and lower diagonal row agree") {
      const Graph up = parse_tsplib(
          "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW\nEDGE_WEIGHT_SECTION\n1 2\n3\nEOF\n");
      const Graph lo = parse_tsplib(
          "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW\nEDGE_WEIGHT_SECTION\n0\n1 0\n2 3 0\n"
          "EOF\n");
      CHECK(same_graph(up, lo));
      CHECK(up.m_total() == 6.0);
    }
    SUBCASE("GEO uses the TSPLIB formula") {
      // Two points one degree of latitude apart on the TSPLIB sphere.
      const Graph g = parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 10.00 0.00\n2 11.00 0.00\nEOF\n");
      const double rrr = 6378.388, pi = 3.141592;
      const double deg = pi * 1.0 / 180.0;
      CHECK(g.m_total() == std::floor(rrr * deg + 1.0));
    }
    SUBCASE("unsupported types are named") {
      try {
        parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: ATT\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n");
        FAIL("expected ParseError");
      } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("ATT") != std::string::npos);
      }
      CHECK_THROWS_AS(parse_tsplib("DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF\n"),
                      ParseError);
    }
    SUBCASE("berlin52 checksum") {
      const std::string text = read_text_file(fixture("berlin52.tsp"));
      const Graph g = parse_tsplib(text);
      CHECK(g.n() == 52);
      CHECK(g.edge_count() == 52u * 51u / 2u);
      // Independent recomputation from the coordinate lines.
      std::vector<std::pair<double, double>> xy;
      std::istringstream in(text.substr(text.find("NODE_COORD_SECTION") + 18));
      int id;
      double x, y;
      while (in >> id >> x >> y) xy.emplace_back(x, y);
      REQUIRE(xy.size() == 52);
      double total = 0;
      for (std::size_t i = 0; i < xy.size(); ++i)
        for (std::size_t j = i + 1; j < xy.size(); ++j)
          total += std::floor(std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second) + 0.5);
      CHECK(g.m_total() == total);
      CHECK(g.m_total() == 762783.0);
    }
  }

  TEST_CASE("CSV matrices") {
    CHECK(parse_csv_matrix("1,0\n0,1").dense() == Matrix::Identity(2, 2));
    const SymMatrix m = parse_csv_matrix("2,1\n1,2\n");
    CHECK(m(0, 1) == 1.0);
    CHECK(m(1, 1) == 2.0);
    CHECK(parse_csv_matrix("a,b\n1,0\n0,1").dim() == 2);
    CHECK(csv_header("a, b\n1,0\n0,1") == std::vector<std::string>{"a", "b"});
    CHECK(csv_header("1,0\n0,1").empty());
    CHECK_THROWS_AS(parse_csv_matrix("1,0,0\n0,1,0"), ParseError);
    CHECK_THROWS_AS(parse_csv_matrix("1,0\n0,x"), ParseError);
    CHECK_THROWS_AS(parse_csv_matrix("1,5\n0,1"), ParseError);

    const SymMatrix pit = parse_csv_matrix(read_text_file(fixture("pitprops.csv")));
    CHECK(pit.dim() == 13);
    for (int i = 0; i < 13; ++i) CHECK(pit(i, i) == 1.0);
    CHECK(csv_header(read_text_file(fixture("pitprops.csv"))).size() == 13);
    CHECK(eig_decompose(pit).min_value() > 0.0);
  }

  TEST_CASE("Erdos-Renyi generator") {
    const Graph dense = gen_er(10, 0.999, 4);
    CHECK(dense.edge_count() >= 43);

    double total = 0;
    for (std::uint64_t s = 0; s < 5; ++s) total += gen_er(100, 0.5, s).m_total();
    const double mean = total / 5;
    const double sigma = std::sqrt(4950 * 0.25 / 5);
    CHECK(std::abs(mean - 2475.0) <= 4 * sigma);

    CHECK(same_graph(gen_er(30, 0.3, 9), gen_er(30, 0.3, 9)));
    CHECK_FALSE(same_graph(gen_er(30, 0.3, 9), gen_er(30, 0.3, 10)));
    CHECK_THROWS_AS(gen_er(10, 1.0, 0), GeneratorError);
    CHECK_THROWS_AS(gen_er(10, 0.0, 0), GeneratorError);
  }

  TEST_CASE("regular generator") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Graph g = gen_regular(50, 6, s);
      CHECK(g.n() == 50);
      for (int d : g.degrees()) CHECK(d == 6);
    }
    CHECK(same_graph(gen_regular(20, 3, 1), gen_regular(20, 3, 1)));
    CHECK_THROWS_AS(gen_regular(5, 3, 0), GeneratorError);
    CHECK_THROWS_AS(gen_regular(4, 4, 0), GeneratorError);
  }

  TEST_CASE("generator specs") {
    const InstanceSpec er = parse_generator_spec("er:n=50,p=0.25");
    CHECK(er.generator == "er");
    CHECK(er.params.at("n") == 50);
    CHECK(er.params.at("p") == 0.25);
    CHECK(er.describe() == "er:n=50,p=0.25");
    CHECK(make_graph(er, 3).n() == 50);

    const InstanceSpec pl = parse_generator_spec("planted:n=64,d=4,l=5");
    CHECK(make_graph(pl, 1).m_total() == 165.0);
    CHECK(make_graph(parse_generator_spec("regular:n=50,d=6"), 0).m_total() == 150.0);

    CHECK_THROWS_AS(parse_generator_spec("er:n=50"), GeneratorError);
    CHECK_THROWS_AS(parse_generator_spec("ws:n=50,p=0.1"), GeneratorError);
    CHECK_THROWS_AS(parse_generator_spec("er n=50"), GeneratorError);
    CHECK_THROWS_AS(parse_generator_spec("regular:n=50.5,d=6"), GeneratorError);

    CHECK(guess_format("x.tsp") == FileFormat::Tsplib);
    CHECK(guess_format("x.csv") == FileFormat::CsvMatrix);
    CHECK(guess_format("x.edges") == FileFormat::EdgeList);
    CHECK_THROWS_AS(make_graph(file_spec(fixture("identity3.csv")), 0), std::invalid_argument);
    CHECK(make_graph(file_spec(fixture("petersen.edges")), 0).n() == 10);
  }

  TEST_CASE("generated graphs are simple") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      for (const Graph& g : {gen_er(25, 0.3, rng), gen_regular(24, 5, rng), planted_instance(36, 3, 4, trial)}) {
        std::set<std::pair<int, int>> seen;
        for (const Edge& e : g.edges()) {
          CHECK(e.u < e.v);
          CHECK(seen.emplace(e.u, e.v).second);
        }
      }
    }
  }
}
