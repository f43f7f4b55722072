#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "fixtures.hpp"

using namespace trisketch;

TEST_CASE("accounting on the empty graph") {
  OrientedGraph g(fx::graph(16, {}));
  SeedBundle s = fx::seeds("1", fx::reduced(16));
  RunArtifacts r = run_detection(g, s);
  AccountingReport a = accounting_audit(r.state.counters(), s.params());
  CHECK(a.pass);
  CHECK(a.max_ratio == 0);
  CHECK(a.bound == doctest::Approx(double(s.params().C0) * s.params().num_groups()));
}

TEST_CASE("accounting holds on the corpus") {
  for (int k = 0; k < 30; ++k) {
    OrientedGraph g(fx::corpus_graph(k, 256));
    SeedBundle s = fx::seeds(fx::hex_seed(k), fx::reduced(256));
    RunArtifacts r = run_detection(g, s);
    AccountingReport a = accounting_audit(r.state.counters(), s.params());
    REQUIRE(a.pass);
    std::uint64_t checks = 0;
    for (const auto& row : a.rows) checks += row.executed_checks;
    CHECK(checks == r.state.total_collisions());
  }
}

TEST_CASE("accounting flags corrupted counters") {
  OrientedGraph g(fx::corpus_graph(1, 256));
  SeedBundle s = fx::seeds("5", fx::reduced(256));
  Counters c = run_detection(g, s).state.counters();
  REQUIRE_FALSE(c.per_level.empty());
  auto& lc = c.per_level.begin()->second;
  lc.executed_checks = std::uint64_t{s.params().C0} * s.params().num_groups() * lc.active_classes + 1;
  AccountingReport a = accounting_audit(c, s.params());
  CHECK_FALSE(a.pass);
  CHECK(a.max_ratio > a.bound);
}

TEST_CASE("keep concentration holds for the presets") {
  for (int k = 0; k < 10; ++k) {
    OrientedGraph g(fx::corpus_graph(k, 512, 12));
    SeedBundle s = fx::seeds(fx::hex_seed(k), fx::reduced(512));
    RunArtifacts r = run_detection(g, s);
    ConcentrationReport c = keep_concentration_audit(r.state.counters(), g, s.params());
    CHECK(c.pass);
    CHECK(c.exceed_fraction == 0);
  }
}

TEST_CASE("keep concentration fails when deep layers keep a quarter of the arcs") {
  OrientedGraph g(gen_er_sparse(256, 30, 11));
  SeedBundle s = fx::seeds("9", fx::reduced(256, {{"keep_log2", "2"}, {"layers", "24"}}));
  RunArtifacts r = run_detection(g, s);
  ConcentrationReport c = keep_concentration_audit(r.state.counters(), g, s.params());
  CHECK_FALSE(c.pass);
  CHECK(c.max_edge_keeps > 1);
  CHECK(c.exceed_fraction > 0);
}

TEST_CASE("zero groups never register a collision") {
  SeedBundle s = fx::seeds("3", fx::reduced(128, {{"groups", "0"}}));
  PlantedGraph pg = gen_planted_triangle(128, 384, 3);
  OrientedGraph g(pg.graph);
  RunArtifacts r = run_detection(g, s);
  CHECK(r.state.total_collisions() == 0);
  CHECK_FALSE(r.result.outcome.has_value());
}

TEST_CASE("hit rate experiment is reproducible") {
  HitRateConfig cfg;
  cfg.n_values = {64, 128};
  cfg.trials = 40;
  cfg.overrides = {{"class_gate", "0"}};
  cfg.seed = 17;
  cfg.threads = 4;
  HitRateReport a = hit_rate_experiment(cfg);
  cfg.threads = 1;
  HitRateReport b = hit_rate_experiment(cfg);
  REQUIRE(a.rows.size() == 4);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].hits == b.rows[i].hits);
    CHECK(a.rows[i].trials == 40);
  }
  // more groups never hurt on the same trial graphs and seeds
  CHECK(a.rows[1].hits >= a.rows[0].hits);
  std::ostringstream os;
  write_hit_rate_csv(os, a);
  CHECK(os.str().rfind("n,groups,trials,hits,frequency,fitted_slope\n", 0) == 0);
}

TEST_CASE("scaling bench rows") {
  BenchConfig cfg;
  cfg.n_values = {128, 256};
  cfg.repeats = 1;
  auto rows = scaling_bench(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.m > 0);
    CHECK(r.build_s > 0);
    CHECK(r.bytes > 0);
    CHECK(r.norm_time > 0);
  }
  std::ostringstream os;
  write_bench_csv(os, rows);
  std::string header = os.str().substr(0, os.str().find('\n'));
  CHECK(header == "n,m,build_s,query_s,verify_s,bytes,time_per_m_log2sq_n,bytes_per_m_log_n");
}

TEST_CASE("spread") {
  CHECK(spread({2, 4, 3}) == doctest::Approx(2));
  CHECK(spread({0, 5, 5}) == doctest::Approx(1));
  CHECK(spread({}) == doctest::Approx(1));
}

TEST_CASE("csv writers") {
  AccountingReport a;
  a.rows.push_back({1, 0, 3, 2, 2.0 / 3, true});
  std::ostringstream os;
  write_accounting_csv(os, a);
  CHECK(os.str().find("layer,level,active_classes,executed_checks,ratio,bound,ok") == 0);
  ConcentrationReport c;
  std::ostringstream ks;
  write_concentration_csv(ks, c);
  CHECK_FALSE(ks.str().empty());
}
