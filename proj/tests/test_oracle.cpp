#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "trisketch/oracle.hpp"

using namespace trisketch;

TEST_CASE("enumeration") {
  CHECK(enumerate_triangles(fx::k3()) == TriangleSet{{0, 1, 2}});
  CHECK(enumerate_triangles(fx::k4()).size() == 4);
  CHECK(enumerate_triangles(gen_triangle_free(300, 900, 1)).empty());
  TriangleSet t = enumerate_triangles(fx::k4());
  CHECK(std::is_sorted(t.begin(), t.end()));
}

TEST_CASE("has_triangle") {
  CHECK_FALSE(has_triangle(fx::cycle(5)));
  CHECK(has_triangle(fx::graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 2}})));
  CHECK_FALSE(has_triangle(fx::graph(4, {})));
}

TEST_CASE("has_triangle agrees with enumeration") {
  for (int k = 0; k < 60; ++k) {
    UndirectedGraph g = fx::corpus_graph(k, 100, 2 + k % 5);
    CHECK(has_triangle(g) == !enumerate_triangles(g).empty());
  }
}

TEST_CASE("naive replay matches the sketch") {
  CHECK(naive_sketch_replay(OrientedGraph(fx::graph(6, {})), fx::seeds("1", fx::reduced(6))) == SketchSummary{});

  OrientedGraph k3(fx::k3());
  SeedBundle s = fx::k3_seeds();
  SketchSummary want = summarize(build_sketches(k3, s));
  CHECK(naive_sketch_replay(k3, s) == want);
  CHECK_FALSE(want.classes.empty());

  for (int k = 0; k < 40; ++k) {
    OrientedGraph g(fx::corpus_graph(k, 120, 5));
    SeedBundle sb = fx::seeds(fx::hex_seed(k), fx::reduced(120, {{"c_M", k % 2 ? "1" : "4"}}));
    REQUIRE(naive_sketch_replay(g, sb) == summarize(build_sketches(g, sb)));
  }
}

TEST_CASE("naive replay refuses large instances") {
  OrientedGraph g(gen_er_sparse(5000, 5, 1));
  CHECK_THROWS_AS(naive_sketch_replay(g, fx::seeds("1", fx::reduced(5000))), InstanceTooLarge);
}
