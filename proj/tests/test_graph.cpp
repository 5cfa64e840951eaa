#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "ohmlab/errors.hpp"
#include "ohmlab/graph.hpp"
#include "oracles.hpp"

using namespace ohmlab;

TEST_CASE("multigraph construction rejects bad edges") {
  CHECK_THROWS_AS(Multigraph(3, {{0, 0, 1.0}}), ArgumentError);
  CHECK_THROWS_AS(Multigraph(3, {{0, 3, 1.0}}), ArgumentError);
  CHECK_THROWS_AS(Multigraph(3, {{0, 1, 0.5}}), ArgumentError);
  Multigraph g(3, {{0, 1, 1.0}, {0, 1, 2.0}});
  CHECK(g.num_edges() == 2);
  CHECK(g.weighted_degree(0) == 3.0);
  CHECK(g.weighted_degree(2) == 0.0);
  CHECK_FALSE(g.is_connected());
  CHECK_FALSE(g.is_unit_weight());
}

TEST_CASE("volume and cut weight") {
  Multigraph c4 = cycle_graph(4);
  VertexSet s(4, {0, 1});
  CHECK(volume(c4, s) == 4.0);
  CHECK(cut_weight(c4, s) == 2.0);
  CHECK(cut_conductance(c4, s) == doctest::Approx(0.5));
  CHECK(std::isinf(cut_conductance(c4, VertexSet(4))));
}

TEST_CASE("exact conductance of named graphs") {
  CHECK(conductance_exact(complete_graph(2)).phi == 1.0);
  CHECK(conductance_exact(cycle_graph(4)).phi == doctest::Approx(0.5));
  // K4: best cut is 2|2 with 4 crossing edges over volume 6.
  CHECK(conductance_exact(complete_graph(4)).phi == doctest::Approx(4.0 / 6.0));
  // Petersen: a 5-cycle cut has 5 crossing edges and volume 15.
  CHECK(conductance_exact(petersen_graph()).phi == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("exact conductance matches subset enumeration") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    Multigraph g = oracle::random_connected(9, 8, 3, seed);
    ConductanceCertificate cert = conductance_exact(g);
    CHECK(cert.phi == doctest::Approx(oracle::conductance(g)).epsilon(1e-12));
    CHECK(cut_conductance(g, cert.witness) == doctest::Approx(cert.phi).epsilon(1e-12));
    CHECK(cert.kind == CertificateKind::exact);
  }
}

TEST_CASE("exact conductance errors and disconnected input") {
  CHECK_THROWS_AS(conductance_exact(Multigraph(1, {})), ArgumentError);
  GraphLimits small;
  small.max_exact_conductance_vertices = 5;
  CHECK_THROWS_AS(conductance_exact(cycle_graph(6), small), SizeError);
  Multigraph split(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  ConductanceCertificate cert = conductance_exact(split);
  CHECK(cert.phi == 0.0);
  CHECK(cut_weight(split, cert.witness) == 0.0);
}

TEST_CASE("cheeger bracket contains the exact conductance") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Multigraph g = gen_random_regular(14, 3, seed);
    double phi = conductance_exact(g).phi;
    ConductanceBounds b = conductance_bounds(g);
    CHECK(b.lower.phi <= phi + 1e-12);
    CHECK(b.upper.phi >= phi - 1e-12);
    CHECK(cut_conductance(g, b.upper.witness) == doctest::Approx(b.upper.phi));
  }
  CHECK_THROWS_AS(conductance_bounds(Multigraph(4, {{0, 1, 1.0}, {2, 3, 1.0}})), StructuralError);
}

TEST_CASE("girth") {
  CHECK(girth(cycle_graph(7)) == 7);
  CHECK(girth(petersen_graph()) == 5);
  CHECK(girth(complete_graph(4)) == 3);
  CHECK_FALSE(girth(path_graph(5)).has_value());
  CHECK(girth(Multigraph(2, {{0, 1, 1.0}, {1, 0, 1.0}})) == 2);
}

TEST_CASE("random regular graphs") {
  for (int d : {3, 4}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Multigraph g = gen_random_regular(16, d, seed);
      CHECK(g.num_vertices() == 16);
      CHECK(g.num_edges() == 16 * d / 2);
      CHECK(g.is_connected());
      std::set<std::pair<int, int>> seen;
      for (const Edge& e : g.edges()) {
        CHECK(e.tail < e.head);
        CHECK(seen.insert({e.tail, e.head}).second);
      }
      for (int v = 0; v < 16; ++v) CHECK(g.weighted_degree(v) == d);
    }
  }
  CHECK(gen_random_regular(20, 3, 7) == gen_random_regular(20, 3, 7));
  CHECK_FALSE(gen_random_regular(20, 3, 7) == gen_random_regular(20, 3, 8));
  CHECK_THROWS_AS(gen_random_regular(9, 3, 1), ArgumentError);
  CHECK_THROWS_AS(gen_random_regular(4, 4, 1), ArgumentError);
  CHECK_THROWS_AS(gen_random_regular(10, 2, 1), ArgumentError);
}

TEST_CASE("gadget subdivision") {
  Multigraph base = gen_random_regular(10, 3, 1);
  for (int k = 1; k <= 4; ++k) {
    Multigraph g = gadget_subdivide(base, k);
    CHECK(g.num_edges() == base.num_edges() * k * k);
    CHECK(g.num_vertices() == base.num_vertices() + base.num_edges() * k * (k - 1));
    CHECK(g.is_unit_weight());
    for (int v = base.num_vertices(); v < g.num_vertices(); ++v) CHECK(g.weighted_degree(v) == 2.0);
    for (int v = 0; v < base.num_vertices(); ++v) CHECK(g.weighted_degree(v) == 3.0 * k);
  }
  CHECK(gadget_subdivide(base, 1) == base);
  CHECK_THROWS_AS(gadget_subdivide(base, 0), ArgumentError);
  CHECK_THROWS_AS(gadget_subdivide(Multigraph(2, {{0, 1, 2.0}}), 2), ContractError);
  GraphLimits tight;
  tight.max_edges = 100;
  CHECK_THROWS_AS(gadget_subdivide(base, 3, tight), SizeError);
}

TEST_CASE("union and weighted expansion") {
  Multigraph a = path_graph(3);
  Multigraph b = cycle_graph(4);
  Multigraph u = graph_union(a, b);
  CHECK(u.num_vertices() == 4);
  CHECK(u.num_edges() == a.num_edges() + b.num_edges());

  Multigraph w = weighted_to_multigraph(path_graph(2), {3}, {2});
  CHECK(w.num_vertices() == 3);
  CHECK(w.num_edges() == 6);
}

TEST_CASE("graph text round trip") {
  Multigraph g(4, {{0, 1, 1.0}, {1, 2, 2.5}, {2, 3, 1.0}, {3, 0, 7.0}});
  std::stringstream ss;
  write_graph(ss, g);
  CHECK(read_graph(ss) == g);

  std::istringstream commented("# header\n\n3 2\n0 1 1\n# mid\n1 2 2\n");
  Multigraph h = read_graph(commented);
  CHECK(h.num_edges() == 2);
  CHECK(h.edge(1).weight == 2.0);

  std::istringstream short_file("3 2\n0 1 1\n");
  CHECK_THROWS_AS(read_graph(short_file), ArgumentError);
}
