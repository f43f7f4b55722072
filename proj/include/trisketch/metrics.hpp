#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trisketch/certificate.hpp"
#include "trisketch/counters.hpp"
#include "trisketch/graph.hpp"
#include "trisketch/query.hpp"
#include "trisketch/seeds.hpp"
#include "trisketch/sketch.hpp"

namespace trisketch {

/// build -> query -> certificate, timed.
struct RunArtifacts {
  SketchState state;
  QueryResult result;
  Certificate cert;
};

RunArtifacts run_detection(const OrientedGraph& g, const SeedBundle& s, const QueryOptions& q = {},
                           bool counters = true);

struct AccountingRow {
  std::uint32_t layer = 0, level = 0;
  std::uint64_t active_classes = 0, executed_checks = 0;
  double ratio = 0;  // Q / |S|
  bool ok = true;
};

struct AccountingReport {
  bool pass = true;
  double bound = 0;      // C0 * R
  double max_ratio = 0;  // max over (i, r) of Q / |S|
  std::vector<AccountingRow> rows;
};

/// Q_{i,r} <= C0 * R * |S_{i,r}| for every (layer, level).
AccountingReport accounting_audit(const Counters& c, const Params& p);

struct ConcentrationReport {
  bool pass = true;
  double threshold_c = 3;
  double max_statistic = 0;        // max_x (K_tot(x) - 6 ln n) / max(1, d+(x))
  double exceed_fraction = 0;      // share of x with K_tot(x) > C d+(x) + 6 ln n
  std::uint64_t max_edge_keeps = 0;  // max_e K_e
};

ConcentrationReport keep_concentration_audit(const Counters& c, const OrientedGraph& g, const Params& p,
                                             double C = 3.0);

struct HitRateRow {
  std::uint32_t n = 0;
  std::uint32_t groups = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double frequency() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
};

struct HitRateConfig {
  std::vector<std::uint32_t> n_values;
  std::uint64_t trials = 100;
  std::string preset = "reduced";
  std::vector<std::pair<std::string, std::string>> overrides;
  double avg_degree = 6;
  /// Group counts to try per n; 0 stands for the preset's R.
  std::vector<std::uint32_t> group_counts{1, 0};
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct HitRateReport {
  std::vector<HitRateRow> rows;
  /// Least-squares a in frequency ~ a / log2 n over the single-group rows.
  double fitted_slope = 0;
};

/// Planted-triangle detection frequency per (n, R). Trial k uses graph seed
/// and master seed derived from (seed, n, k), so reports are reproducible.
HitRateReport hit_rate_experiment(const HitRateConfig& cfg);

struct BenchRow {
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  double build_s = 0, query_s = 0, verify_s = 0;
  std::uint64_t bytes = 0;
  double norm_time = 0;   // (build + query) / (m log2^2 n)
  double norm_bytes = 0;  // bytes / (m log2 n)
};

struct BenchConfig {
  std::vector<std::uint32_t> n_values;
  std::string preset = "reduced";
  std::vector<std::pair<std::string, std::string>> overrides;
  double avg_degree = 6;
  std::uint64_t seed = 1;
  unsigned repeats = 3;  // minimum time over repeats
};

/// Runs on triangle-free graphs so the query and verifier always do full work.
std::vector<BenchRow> scaling_bench(const BenchConfig& cfg);

/// max/min of a column, ignoring non-positive entries.
double spread(const std::vector<double>& column);

void write_accounting_csv(std::ostream& os, const AccountingReport& r);
void write_concentration_csv(std::ostream& os, const ConcentrationReport& r);
void write_hit_rate_csv(std::ostream& os, const HitRateReport& r);
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace trisketch
