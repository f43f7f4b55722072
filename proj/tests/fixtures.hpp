#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "trisketch/certificate.hpp"
#include "trisketch/graph.hpp"
#include "trisketch/metrics.hpp"
#include "trisketch/query.hpp"
#include "trisketch/seeds.hpp"
#include "trisketch/sketch.hpp"

namespace fx {

using namespace trisketch;

// K3 at the reduced preset with the class gate disabled registers a collision
// in anchor 0's level-0 class under this seed (found by scanning seeds 1..0xff).
inline constexpr const char* kK3Seed = "67";

inline UndirectedGraph graph(std::uint32_t n, std::vector<Edge> edges) { return UndirectedGraph(n, edges); }

inline UndirectedGraph k3() { return graph(3, {{0, 1}, {0, 2}, {1, 2}}); }
inline UndirectedGraph k4() { return graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
inline UndirectedGraph cycle(std::uint32_t n) {
  std::vector<Edge> e;
  for (std::uint32_t v = 0; v < n; ++v) {
    Vertex a = v, b = (v + 1) % n;
    e.emplace_back(std::min(a, b), std::max(a, b));
  }
  return graph(n, e);
}

inline Params reduced(std::uint64_t n, std::vector<std::pair<std::string, std::string>> overrides = {}) {
  Params p = Params::reduced(n);
  for (const auto& [k, v] : overrides) p.apply_override(k, v);
  return p;
}

inline SeedBundle seeds(const std::string& hex, Params p) { return SeedBundle(parse_master_seed(hex), std::move(p)); }

inline std::string hex_seed(std::uint64_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(k * 0x9e3779b97f4a7c15ull + 1));
  return buf;
}

inline SeedBundle k3_seeds() { return seeds(kK3Seed, reduced(3, {{"class_gate", "0"}})); }

/// Corpus graph k: cycles through planted / bipartite / ER generators.
inline UndirectedGraph corpus_graph(std::uint64_t k, std::uint32_t n, double avg_degree = 6) {
  const auto m = static_cast<std::uint64_t>(std::ceil(n * avg_degree / 2));
  switch (k % 3) {
    case 0: return gen_planted_triangle(n, m, 1000 + k).graph;
    case 1: return gen_triangle_free(n, m, 2000 + k);
    default: return gen_er_sparse(n, avg_degree, 3000 + k);
  }
}

}  // namespace fx
