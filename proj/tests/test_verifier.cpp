#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "mutate.hpp"
#include "trisketch/verifier.hpp"

using namespace trisketch;

namespace {
struct Honest {
  OrientedGraph g;
  RunArtifacts run;
};

Honest honest_no(int k, bool class_gate = false, std::uint32_t n = 128) {
  OrientedGraph g(gen_triangle_free(n, 3 * n, 500 + k));
  SeedBundle s = fx::seeds(fx::hex_seed(k), fx::reduced(n, {{"class_gate", class_gate ? "1" : "0"}}));
  return {g, run_detection(g, s)};
}
}  // namespace

TEST_CASE("empty graph has an empty domain") {
  OrientedGraph g(fx::graph(7, {}));
  CHECK(reconstruct_should_check_domain(g, fx::seeds("1", fx::reduced(7)).record()).empty());
  CHECK_THROWS_AS(reconstruct_should_check_domain(g, fx::seeds("1", fx::reduced(8)).record()), ParamMismatch);
}

TEST_CASE("K3 domain equals the logged pairs") {
  OrientedGraph g(fx::k3());
  RunArtifacts r = run_detection(g, fx::k3_seeds());
  auto q = reconstruct_should_check_domain(g, r.cert.seeds);
  CHECK_FALSE(q.empty());
  CHECK(q == log_pairs(r.cert));
}

TEST_CASE("domain identity on a random corpus") {
  for (int k = 0; k < 200; ++k) {
    OrientedGraph g(fx::corpus_graph(k, 64 + 32 * (k % 4)));
    SeedBundle s = fx::seeds(fx::hex_seed(k), fx::reduced(g.n(), {{"class_gate", k % 2 ? "0" : "1"}}));
    RunArtifacts r = run_detection(g, s, QueryOptions{k % 3 == 0});
    REQUIRE(reconstruct_should_check_domain(g, r.cert.seeds) == log_pairs(r.cert));
  }
}

TEST_CASE("honest NO certificates are accepted") {
  for (int k = 0; k < 20; ++k) {
    Honest h = honest_no(k, k % 2);
    VerifyVerdict v = verify_no(h.g, h.run.cert);
    CHECK_MESSAGE(v.kind == VerifyVerdict::Kind::AcceptNo, describe(v));
  }
}

TEST_CASE("deleting a collision record reports exactly the missing key") {
  Honest h = honest_no(3);
  Certificate c = h.run.cert;
  auto it = std::find_if(c.class_logs.begin(), c.class_logs.end(), [](const auto& e) { return !e.collisions.empty(); });
  REQUIRE(it != c.class_logs.end());
  const auto& rec = it->collisions.front();
  ShouldCheckKey key{it->key.layer, it->key.anchor, it->key.prefix, rec.group, std::min(rec.j, rec.j_star)};
  it->collisions.erase(it->collisions.begin());
  VerifyVerdict v = verify_no(h.g, c);
  REQUIRE(v.kind == VerifyVerdict::Kind::RejectCoverage);
  CHECK(v.missing == std::set<ShouldCheckKey>{key});
  CHECK(v.extra.empty());
}

TEST_CASE("altering a slot triple is a replay rejection at that field") {
  Honest h = honest_no(4);
  Certificate c = h.run.cert;
  REQUIRE(c.slot_logs.size() > 2);
  c.slot_logs[2].triple.b = FieldElement{(c.slot_logs[2].triple.b.value + 1) % c.seeds.params.prime};
  VerifyVerdict v = verify_no(h.g, c);
  CHECK(v.kind == VerifyVerdict::Kind::RejectReplay);
  CHECK(v.path == "slot_logs[2].triple");
}

TEST_CASE("altering a class triple or pass bit") {
  Honest h = honest_no(5);
  Certificate c = h.run.cert;
  c.class_logs[1].sigma.a = FieldElement{c.class_logs[1].sigma.a.value ^ 1};
  VerifyVerdict v = verify_no(h.g, c);
  CHECK(v.path == "class_logs[1].sigma");
  c = h.run.cert;
  c.class_logs[0].pass_class = !c.class_logs[0].pass_class;
  CHECK(verify_no(h.g, c).path == "class_logs[0].pass_class");
}

TEST_CASE("adjacency bit contradicting the graph") {
  Honest h = honest_no(0);
  for (int k = 1; h.run.cert.adj_logs.empty() && k < 50; ++k) h = honest_no(k, false, 512);
  Certificate c = h.run.cert;
  REQUIRE_FALSE(c.adj_logs.empty());
  c.adj_logs[0].adjacent = true;
  VerifyVerdict v = verify_no(h.g, c);
  CHECK(v.kind == VerifyVerdict::Kind::RejectReplay);
  CHECK(v.path == "adj_logs[0].adjacent");
}

TEST_CASE("mismatched graph is rejected") {
  Honest h = honest_no(7);
  OrientedGraph other(gen_triangle_free(128, 384, 9999));
  CHECK_FALSE(verify_no(other, h.run.cert).accepted());
  OrientedGraph smaller(gen_triangle_free(100, 300, 1));
  VerifyVerdict v = verify_no(smaller, h.run.cert);
  CHECK(v.path == "seeds.params.n");
}

TEST_CASE("YES certificates") {
  OrientedGraph k3(fx::k3());
  RunArtifacts r = run_detection(k3, fx::k3_seeds());
  REQUIRE(r.cert.outcome.has_value());
  VerifyVerdict v = verify_yes(k3, r.cert);
  REQUIRE(v.kind == VerifyVerdict::Kind::AcceptYes);
  CHECK(verify_no(k3, r.cert).kind == VerifyVerdict::Kind::AcceptYes);

  OrientedGraph p3(fx::graph(3, {{0, 1}, {1, 2}}));
  Certificate forged = r.cert;
  forged.outcome = TriangleClaim{0, 1, 2};
  CHECK(verify_yes(p3, forged).kind == VerifyVerdict::Kind::RejectReplay);
  forged.outcome = TriangleClaim{0, 1, 7};
  CHECK(verify_yes(k3, forged).kind == VerifyVerdict::Kind::RejectReplay);
}

TEST_CASE("NO outcome with a confirming probe is accepted as YES") {
  OrientedGraph k3(fx::k3());
  RunArtifacts r = run_detection(k3, fx::k3_seeds());
  Certificate c = r.cert;
  c.outcome.reset();
  VerifyVerdict v = verify_no(k3, c);
  REQUIRE(v.kind == VerifyVerdict::Kind::AcceptYes);
  CHECK(k3.base().is_adjacent(v.triangle->v, v.triangle->w));
}

TEST_CASE("soundness: AcceptYes only names real triangles") {
  for (int k = 0; k < 60; ++k) {
    OrientedGraph g(fx::corpus_graph(k, 64, 8));
    RunArtifacts r = run_detection(g, fx::seeds(fx::hex_seed(k), fx::reduced(64, {{"class_gate", "0"}})));
    VerifyVerdict v = verify_no(g, r.cert);
    REQUIRE(v.accepted());
    if (v.kind == VerifyVerdict::Kind::AcceptYes) {
      const auto& t = *v.triangle;
      CHECK(g.is_adjacent(t.x, t.v));
      CHECK(g.is_adjacent(t.x, t.w));
      CHECK(g.is_adjacent(t.v, t.w));
    }
  }
}

TEST_CASE("single-field mutations never pass") {
  for (int k = 0; k < 4; ++k) {
    Honest h = honest_no(k, k % 2);
    fx::MutationStats st = fx::fuzz_certificate(h.g, h.run.cert, 300, 77 + k);
    CHECK_MESSAGE(st.accepted == 0, st.first_accepted);
    CHECK(st.applied > 200);
  }
}

TEST_CASE("verifier cost grows near-linearly") {
  std::vector<double> per_unit;
  for (std::uint32_t n : {512u, 1024u, 2048u}) {
    Honest h = honest_no(1, true, n);
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
      auto t0 = std::chrono::steady_clock::now();
      (void)verify_no(h.g, h.run.cert);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    per_unit.push_back(best / (h.g.m() * std::log2(n)));
  }
  MESSAGE("verify seconds per m log n: ", per_unit[0], " ", per_unit[1], " ", per_unit[2]);
  CHECK(spread(per_unit) < 2.0);
}
