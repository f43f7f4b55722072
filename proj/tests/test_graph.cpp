#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>

#include "fixtures.hpp"
#include "trisketch/oracle.hpp"

using namespace trisketch;

TEST_CASE("parse") {
  UndirectedGraph g = parse_graph("3 3\n0 1\n1 2\n0 2");
  CHECK(g == fx::k3());
  CHECK_THROWS_AS(parse_graph("2 1\n0 0"), NotSimple);
  CHECK_THROWS_AS(parse_graph("2 2\n0 1\n1 0"), NotSimple);
  CHECK_THROWS_AS(parse_graph("2 1\n0 2"), IdOutOfRange);
  CHECK_THROWS_AS(parse_graph(""), ParseError);
  CHECK_THROWS_AS(parse_graph("3 2\n0 1"), ParseError);
  CHECK_THROWS_AS(parse_graph("3 1\n0 1\n1 2"), ParseError);
  CHECK_THROWS_AS(parse_graph("3 1\n0 x"), ParseError);
}

TEST_CASE("canonical text round trip") {
  UndirectedGraph g = gen_er_sparse(200, 5, 9);
  CHECK(parse_graph(format_graph(g)) == g);
  CHECK(format_graph(fx::graph(3, {{1, 2}, {0, 1}})) == "3 2\n0 1\n1 2\n");
  auto path = std::filesystem::temp_directory_path() / "trisketch_graph_rt.txt";
  write_graph_file(g, path.string());
  CHECK(read_graph_file(path.string()) == g);
  std::filesystem::remove(path);
  CHECK_THROWS(read_graph_file("/nonexistent/graph.txt"));
}

TEST_CASE("orientation") {
  OrientedGraph k3(fx::k3());
  REQUIRE(k3.arcs().size() == 3);
  CHECK(k3.arcs()[0] == Arc{0, 1});
  CHECK(k3.arcs()[1] == Arc{0, 2});
  CHECK(k3.arcs()[2] == Arc{1, 2});
  CHECK(k3.out_degree(0) == 2);
  CHECK(k3.out_degree(1) == 1);
  CHECK(k3.out_degree(2) == 0);

  OrientedGraph star(fx::graph(4, {{0, 3}, {1, 3}, {2, 3}}));
  CHECK(star.out_degree(3) == 0);
  for (Vertex leaf = 0; leaf < 3; ++leaf) {
    REQUIRE(star.out_neighbors(leaf).size() == 1);
    CHECK(star.out_neighbors(leaf)[0] == 3);
  }

  OrientedGraph empty(fx::graph(5, {}));
  for (Vertex v = 0; v < 5; ++v) CHECK(empty.out_degree(v) == 0);
}

TEST_CASE("orientation is a total order: every edge oriented once, arcs ascending") {
  OrientedGraph g(gen_er_sparse(500, 8, 2));
  CHECK(g.arcs().size() == g.m());
  CHECK(std::is_sorted(g.arcs().begin(), g.arcs().end()));
  for (const Arc& a : g.arcs()) {
    REQUIRE(g.precedes(a.from, a.to));
    REQUIRE_FALSE(g.precedes(a.to, a.from));
  }
}

TEST_CASE("adjacency") {
  UndirectedGraph k3 = fx::k3();
  CHECK(k3.is_adjacent(1, 2));
  CHECK_FALSE(k3.is_adjacent(1, 1));
  UndirectedGraph p3 = fx::graph(3, {{0, 1}, {1, 2}});
  CHECK_FALSE(p3.is_adjacent(0, 2));
}

TEST_CASE("planted generator") {
  PlantedGraph small = gen_planted_triangle(3, 3, 1);
  CHECK(small.graph == fx::k3());
  CHECK(small.planted == std::array<Vertex, 3>{0, 1, 2});

  PlantedGraph pg = gen_planted_triangle(300, 900, 4);
  CHECK(pg.graph.m() == 900);
  TriangleSet tris = enumerate_triangles(pg.graph);
  CHECK(tris.size() >= 1);
  CHECK(std::binary_search(tris.begin(), tris.end(), pg.planted));

  CHECK(gen_planted_triangle(100, 300, 7).graph == gen_planted_triangle(100, 300, 7).graph);
  CHECK_FALSE(gen_planted_triangle(100, 300, 7).graph == gen_planted_triangle(100, 300, 8).graph);
  CHECK_THROWS_AS(gen_planted_triangle(3, 2, 7), InfeasibleParams);
}

TEST_CASE("triangle-free generator") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK_FALSE(has_triangle(gen_triangle_free(200, 600, seed)));
  UndirectedGraph c4 = gen_triangle_free(4, 4, 1);
  CHECK(c4.m() == 4);
  CHECK_FALSE(has_triangle(c4));
  CHECK(gen_triangle_free(100, 200, 3) == gen_triangle_free(100, 200, 3));
  CHECK_THROWS_AS(gen_triangle_free(4, 5, 1), InfeasibleParams);
}

TEST_CASE("sparse ER generator") {
  CHECK(gen_er_sparse(100, 0, 1).m() == 0);
  CHECK(gen_er_sparse(101, 3, 1).m() == 152);  // ceil(101 * 3 / 2)
  UndirectedGraph g = gen_er_sparse(50, 4, 6);
  CHECK(g.m() == 100);
  std::size_t brute = 0;
  for (Vertex a = 0; a < 50; ++a)
    for (Vertex b = a + 1; b < 50; ++b)
      for (Vertex c = b + 1; c < 50; ++c) brute += g.is_adjacent(a, b) && g.is_adjacent(a, c) && g.is_adjacent(b, c);
  CHECK(enumerate_triangles(g).size() == brute);
  CHECK_THROWS_AS(gen_er_sparse(5, 10, 1), InfeasibleParams);
}

TEST_CASE("digest depends on content only") {
  CHECK(fx::k3().digest() == parse_graph("3 3\n1 2\n0 2\n0 1").digest());
  CHECK(fx::k3().digest() != fx::graph(3, {{0, 1}, {1, 2}}).digest());
}
