#include "trisketch/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "trisketch/verifier.hpp"

namespace trisketch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

MasterSeed derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{seed, a, b, std::uint64_t{0x5eed}};
  std::mt19937_64 rng(seq);
  MasterSeed out{};
  for (std::size_t k = 0; k < out.size(); k += 8) {
    std::uint64_t w = rng();
    for (std::size_t q = 0; q < 8; ++q) out[k + q] = static_cast<std::uint8_t>(w >> (8 * q));
  }
  return out;
}

Params make_params(const std::string& preset, std::uint32_t n,
                   const std::vector<std::pair<std::string, std::string>>& overrides) {
  Params p = Params::preset_for(preset, n);
  for (const auto& [k, v] : overrides) p.apply_override(k, v);
  return p;
}

template <class Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t k = next++; k < count; k = next++) fn(k);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

RunArtifacts run_detection(const OrientedGraph& g, const SeedBundle& s, const QueryOptions& q, bool counters) {
  BuildOptions bo;
  bo.counters = counters;
  SketchState state = build_sketches(g, s, bo);
  const auto t0 = Clock::now();
  QueryResult result = query_triangle(state, g, s, q);
  if (counters) state.counters().query_seconds = seconds_since(t0);
  Certificate cert = emit_certificate(state, result, s);
  return {std::move(state), std::move(result), std::move(cert)};
}

AccountingReport accounting_audit(const Counters& c, const Params& p) {
  AccountingReport rep;
  rep.bound = static_cast<double>(p.C0) * p.num_groups();
  for (const auto& [ir, lc] : c.per_level) {
    AccountingRow row{ir.first, ir.second, lc.active_classes, lc.executed_checks, 0, true};
    if (lc.active_classes > 0) row.ratio = static_cast<double>(lc.executed_checks) / static_cast<double>(lc.active_classes);
    else if (lc.executed_checks > 0) row.ratio = INFINITY;
    row.ok = static_cast<double>(lc.executed_checks) <= rep.bound * static_cast<double>(lc.active_classes);
    rep.pass = rep.pass && row.ok;
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

ConcentrationReport keep_concentration_audit(const Counters& c, const OrientedGraph& g, const Params& p, double C) {
  ConcentrationReport rep;
  rep.threshold_c = C;
  const double slack = 6.0 * std::log(static_cast<double>(std::max<std::uint64_t>(p.n, 2)));
  std::uint64_t exceed = 0;
  for (Vertex x = 0; x < c.keep_per_anchor.size(); ++x) {
    const double k = static_cast<double>(c.keep_per_anchor[x]);
    const double dplus = static_cast<double>(g.out_degree(x));
    rep.max_statistic = std::max(rep.max_statistic, (k - slack) / std::max(1.0, dplus));
    if (k > C * dplus + slack) ++exceed;
  }
  for (auto k : c.keep_per_edge) rep.max_edge_keeps = std::max(rep.max_edge_keeps, k);
  if (!c.keep_per_anchor.empty())
    rep.exceed_fraction = static_cast<double>(exceed) / static_cast<double>(c.keep_per_anchor.size());
  rep.pass = exceed == 0;
  return rep;
}

HitRateReport hit_rate_experiment(const HitRateConfig& cfg) {
  HitRateReport rep;
  for (std::uint32_t n : cfg.n_values) {
    const auto m = static_cast<std::uint64_t>(std::ceil(n * cfg.avg_degree / 2.0));
    std::vector<std::vector<char>> hit(cfg.group_counts.size(), std::vector<char>(cfg.trials, 0));
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t k) {
      const PlantedGraph pg = gen_planted_triangle(n, m, cfg.seed * 1'000'003 + n * 7919ull + k);
      const OrientedGraph g(pg.graph);
      const MasterSeed ms = derive_seed(cfg.seed, n, k);
      for (std::size_t gi = 0; gi < cfg.group_counts.size(); ++gi) {
        Params p = make_params(cfg.preset, n, cfg.overrides);
        if (cfg.group_counts[gi] != 0) p.groups = cfg.group_counts[gi];
        const SeedBundle s(ms, p);
        BuildOptions bo;
        bo.counters = false;
        const SketchState st = build_sketches(g, s, bo);
        hit[gi][k] = query_triangle(st, g, s).outcome.has_value();
      }
    });
    for (std::size_t gi = 0; gi < cfg.group_counts.size(); ++gi) {
      const std::uint32_t R =
          cfg.group_counts[gi] ? cfg.group_counts[gi] : make_params(cfg.preset, n, cfg.overrides).num_groups();
      rep.rows.push_back({n, R, cfg.trials, static_cast<std::uint64_t>(std::count(hit[gi].begin(), hit[gi].end(), 1))});
    }
  }
  double num = 0, den = 0;
  for (const auto& row : rep.rows) {
    if (row.groups != 1) continue;
    const double u = 1.0 / std::max(1.0, std::log2(static_cast<double>(row.n)));
    num += row.frequency() * u;
    den += u * u;
  }
  rep.fitted_slope = den > 0 ? num / den : 0;
  return rep;
}

std::vector<BenchRow> scaling_bench(const BenchConfig& cfg) {
  std::vector<BenchRow> rows;
  for (std::uint32_t n : cfg.n_values) {
    const auto m = static_cast<std::uint64_t>(std::ceil(n * cfg.avg_degree / 2.0));
    const OrientedGraph g(gen_triangle_free(n, m, cfg.seed + n));
    const SeedBundle s(derive_seed(cfg.seed, n, 0), make_params(cfg.preset, n, cfg.overrides));
    BenchRow row{n, g.m(), INFINITY, INFINITY, INFINITY, 0, 0, 0};
    for (unsigned rep = 0; rep < std::max(1u, cfg.repeats); ++rep) {
      auto t0 = Clock::now();
      BuildOptions bo;
      bo.counters = false;
      const SketchState st = build_sketches(g, s, bo);
      row.build_s = std::min(row.build_s, seconds_since(t0));
      t0 = Clock::now();
      const QueryResult qr = query_triangle(st, g, s);
      row.query_s = std::min(row.query_s, seconds_since(t0));
      const Certificate cert = emit_certificate(st, qr, s);
      t0 = Clock::now();
      (void)verify_no(g, cert);
      row.verify_s = std::min(row.verify_s, seconds_since(t0));
      row.bytes = st.approx_bytes();
    }
    const double lg = std::max(1.0, std::log2(static_cast<double>(n)));
    const double md = std::max<double>(1.0, static_cast<double>(row.m));
    row.norm_time = (row.build_s + row.query_s) / (md * lg * lg);
    row.norm_bytes = static_cast<double>(row.bytes) / (md * lg);
    rows.push_back(row);
  }
  return rows;
}

double spread(const std::vector<double>& column) {
  double lo = INFINITY, hi = 0;
  for (double v : column) {
    if (v <= 0) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi > 0 ? hi / lo : 1.0;
}

void write_accounting_csv(std::ostream& os, const AccountingReport& r) {
  os << "layer,level,active_classes,executed_checks,ratio,bound,ok\n";
  for (const auto& row : r.rows) {
    os << row.layer << ',' << row.level << ',' << row.active_classes << ',' << row.executed_checks << ','
       << row.ratio << ',' << r.bound << ',' << (row.ok ? 1 : 0) << '\n';
  }
}

void write_concentration_csv(std::ostream& os, const ConcentrationReport& r) {
  os << "threshold_c,max_statistic,exceed_fraction,max_edge_keeps,pass\n";
  os << r.threshold_c << ',' << r.max_statistic << ',' << r.exceed_fraction << ',' << r.max_edge_keeps << ','
     << (r.pass ? 1 : 0) << '\n';
}

void write_hit_rate_csv(std::ostream& os, const HitRateReport& r) {
  os << "n,groups,trials,hits,frequency,fitted_slope\n";
  for (const auto& row : r.rows) {
    os << row.n << ',' << row.groups << ',' << row.trials << ',' << row.hits << ',' << row.frequency() << ','
       << r.fitted_slope << '\n';
  }
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "n,m,build_s,query_s,verify_s,bytes,time_per_m_log2sq_n,bytes_per_m_log_n\n";
  for (const auto& row : rows) {
    os << row.n << ',' << row.m << ',' << row.build_s << ',' << row.query_s << ',' << row.verify_s << ','
       << row.bytes << ',' << row.norm_time << ',' << row.norm_bytes << '\n';
  }
}

}  // namespace trisketch
