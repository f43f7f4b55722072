// trisketch: generate graphs, detect triangles, certify and verify NO answers,
// run audits and benches. Exit codes: 0 ok/accept, 1 reject, 2 input or
// schema error, 3 internal invariant violation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "trisketch/certificate.hpp"
#include "trisketch/graph.hpp"
#include "trisketch/metrics.hpp"
#include "trisketch/oracle.hpp"
#include "trisketch/verifier.hpp"

using namespace trisketch;

namespace {

enum Exit { kOk = 0, kReject = 1, kInput = 2, kInternal = 3 };

struct RunConfig {
  std::string graph;
  std::string seed;
  std::string preset = "full";
  std::vector<std::string> params;
  std::string out;
  std::string cert;
  bool no_early_stop = false;
  bool instrument = false;
  bool corrupt_counters = false;
};

void add_run_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--graph", cfg.graph, "graph file")->required();
  cmd->add_option("--seed", cfg.seed, "master seed, 1-64 hex digits")->required();
  cmd->add_option("--preset", cfg.preset, "parameter preset")->check(CLI::IsMember({"full", "reduced"}));
  cmd->add_option("--param", cfg.params, "override K=V (repeatable)");
  cmd->add_flag("--no-early-stop", cfg.no_early_stop, "examine every registered collision");
  cmd->add_flag("--instrument", cfg.instrument, "print workload counters");
}

SeedBundle make_seeds(const RunConfig& cfg, std::uint32_t n) {
  Params p = Params::preset_for(cfg.preset, n);
  for (const auto& kv : cfg.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParamError("--param expects K=V, got " + kv);
    p.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return SeedBundle(parse_master_seed(cfg.seed), std::move(p));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

void print_instrumentation(const SketchState& st, const QueryResult& qr) {
  const Counters& c = st.counters();
  std::cout << "kept_edges " << c.kept_edges << "\nmaterializations " << c.materializations << "\nactive_classes "
            << st.classes().size() << "\ncollisions " << st.total_collisions() << "\ntrace_entries "
            << qr.trace.size() << "\napprox_bytes " << st.approx_bytes() << "\nbuild_seconds " << c.build_seconds
            << "\nquery_seconds " << c.query_seconds << "\n";
}

std::string outcome_line(const QueryResult& qr) {
  if (!qr.outcome) return "NO";
  return "YES " + std::to_string(qr.outcome->x()) + " " + std::to_string(qr.outcome->v()) + " " +
         std::to_string(qr.outcome->w());
}

int cmd_gen(const std::string& kind, std::uint32_t n, const std::string& size, std::uint64_t seed,
            const std::string& out) {
  UndirectedGraph g;
  if (kind == "planted") {
    g = gen_planted_triangle(n, std::stoull(size), seed).graph;
  } else if (kind == "bipartite") {
    g = gen_triangle_free(n, std::stoull(size), seed);
  } else {
    g = gen_er_sparse(n, std::stod(size), seed);
  }
  if (out.empty()) std::cout << format_graph(g);
  else write_graph_file(g, out);
  return kOk;
}

int cmd_detect(const RunConfig& cfg, bool certify) {
  const OrientedGraph g(read_graph_file(cfg.graph));
  const SeedBundle s = make_seeds(cfg, g.n());
  RunArtifacts run = run_detection(g, s, QueryOptions{!cfg.no_early_stop});
  std::cout << outcome_line(run.result) << "\n";
  if (cfg.instrument) print_instrumentation(run.state, run.result);
  if (certify) {
    const std::string text = serialize(run.cert);
    if (cfg.out.empty()) std::cout << text;
    else write_file(cfg.out, text);
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const OrientedGraph g(read_graph_file(cfg.graph));
  const Certificate cert = deserialize(read_file(cfg.cert));
  const VerifyVerdict v = verify_no(g, cert);
  std::cout << describe(v) << "\n";
  return v.accepted() ? kOk : kReject;
}

int cmd_audit(const RunConfig& cfg) {
  const OrientedGraph g(read_graph_file(cfg.graph));
  const SeedBundle s = make_seeds(cfg, g.n());
  RunArtifacts run = run_detection(g, s, QueryOptions{!cfg.no_early_stop});
  Counters c = run.state.counters();
  if (cfg.corrupt_counters) {
    for (auto& [ir, lc] : c.per_level) lc.executed_checks += std::uint64_t{s.params().C0} * s.params().num_groups() * (lc.active_classes + 1);
    if (c.per_level.empty()) c.per_level[{1, 0}].executed_checks = 1;
  }
  const AccountingReport acc = accounting_audit(c, s.params());
  const ConcentrationReport conc = keep_concentration_audit(c, g, s.params());
  std::cout << "accounting " << (acc.pass ? "PASS" : "FAIL") << " max_ratio=" << acc.max_ratio
            << " bound=" << acc.bound << "\n";
  std::cout << "concentration " << (conc.pass ? "PASS" : "FAIL") << " max_statistic=" << conc.max_statistic
            << " exceed_fraction=" << conc.exceed_fraction << " max_edge_keeps=" << conc.max_edge_keeps << "\n";
  if (!cfg.out.empty()) {
    std::ofstream a(cfg.out + ".accounting.csv"), k(cfg.out + ".concentration.csv");
    if (!a || !k) throw std::ios_base::failure("cannot write CSV under " + cfg.out);
    write_accounting_csv(a, acc);
    write_concentration_csv(k, conc);
  }
  return acc.pass ? kOk : kInternal;
}

std::vector<std::uint32_t> parse_n_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-based triangle detection with verifiable NO certificates"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen", "write a random graph");
  std::string kind, size;
  std::uint32_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("kind", kind, "planted | bipartite | er")->required()->check(CLI::IsMember({"planted", "bipartite", "er"}));
  gen->add_option("n", gen_n, "vertex count")->required();
  gen->add_option("size", size, "edge count (er: average degree)")->required();
  gen->add_option("seed", gen_seed, "generator seed")->required();
  gen->add_option("--out", cfg.out, "output file (default stdout)");

  auto* detect = app.add_subcommand("detect", "print YES x v w or NO");
  add_run_flags(detect, cfg);

  auto* certify = app.add_subcommand("certify", "detect and write the certificate");
  add_run_flags(certify, cfg);
  certify->add_option("--out", cfg.out, "certificate file (default stdout)");

  auto* verify = app.add_subcommand("verify", "replay a certificate against a graph");
  verify->add_option("--graph", cfg.graph, "graph file")->required();
  verify->add_option("--cert", cfg.cert, "certificate file")->required();

  auto* audit = app.add_subcommand("audit", "accounting and keep-concentration audits");
  add_run_flags(audit, cfg);
  audit->add_option("--out", cfg.out, "CSV path prefix");
  audit->add_flag("--corrupt-counters", cfg.corrupt_counters)->group("");

  auto* bench = app.add_subcommand("bench", "scaling or hit-rate experiment (CSV)");
  std::string experiment = "scaling", n_list = "256,512,1024,2048";
  std::uint64_t trials = 100;
  std::uint64_t bench_seed = 1;
  double avg_degree = 6;
  bench->add_option("--experiment", experiment)->check(CLI::IsMember({"scaling", "hitrate"}));
  bench->add_option("--n", n_list, "comma separated vertex counts");
  bench->add_option("--trials", trials, "trials per point (hitrate)");
  bench->add_option("--seed", bench_seed, "experiment seed")->required();
  bench->add_option("--avg-degree", avg_degree);
  std::string bench_preset = "reduced";
  bench->add_option("--preset", bench_preset)->check(CLI::IsMember({"full", "reduced"}));
  bench->add_option("--param", cfg.params, "override K=V (repeatable)");
  bench->add_option("--out", cfg.out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(kind, gen_n, size, gen_seed, cfg.out);
    if (*detect) return cmd_detect(cfg, false);
    if (*certify) return cmd_detect(cfg, true);
    if (*verify) return cmd_verify(cfg);
    if (*audit) return cmd_audit(cfg);
    if (*bench) {
      std::vector<std::pair<std::string, std::string>> overrides;
      for (const auto& kv : cfg.params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParamError("--param expects K=V, got " + kv);
        overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
      }
      std::ostringstream csv;
      if (experiment == "scaling") {
        BenchConfig bc{parse_n_list(n_list), bench_preset, overrides, avg_degree, bench_seed, 3};
        write_bench_csv(csv, scaling_bench(bc));
      } else {
        HitRateConfig hc;
        hc.n_values = parse_n_list(n_list);
        hc.trials = trials;
        hc.preset = bench_preset;
        hc.overrides = overrides;
        hc.avg_degree = avg_degree;
        hc.seed = bench_seed;
        write_hit_rate_csv(csv, hit_rate_experiment(hc));
      }
      if (cfg.out.empty()) std::cout << csv.str();
      else write_file(cfg.out, csv.str());
      return kOk;
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kInput;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kInput;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInput;
  } catch (const NotSimple& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const IdOutOfRange& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {  // ParamError, ParamMismatch, InfeasibleParams, stoull
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
