#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace trisketch {

/// Per-(layer, level) workload.
struct LevelCounters {
  std::uint64_t active_classes = 0;   // |S_{i,r}|
  std::uint64_t executed_checks = 0;  // Q_{i,r}: registered collisions
  std::uint64_t materialized = 0;     // class contributions
};

/// Workload counters filled by build_sketches. Purely observational.
struct Counters {
  bool enabled = true;
  std::map<std::pair<std::uint32_t, std::uint32_t>, LevelCounters> per_level;
  std::uint64_t kept_edges = 0;       // sum over arcs and layers of c_i(e)
  std::uint64_t materializations = 0; // W: slot 1-sparse materializations
  std::vector<std::uint64_t> keep_per_edge;    // K_e, indexed like OrientedGraph::arcs()
  std::vector<std::uint64_t> keep_per_anchor;  // K_tot(x) = sum_i R_{x,i}
  std::map<std::uint64_t, std::uint64_t> retained_histogram;  // R_{x,i} value -> #(x,i) pairs, nonzero only
  double build_seconds = 0;
  double query_seconds = 0;
};

}  // namespace trisketch
