#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "trisketch/graph.hpp"
#include "trisketch/seeds.hpp"
#include "trisketch/sketch.hpp"

namespace trisketch {

class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sorted, duplicate-free list of triangles (a < b < c).
using TriangleSet = std::vector<std::array<Vertex, 3>>;

TriangleSet enumerate_triangles(const UndirectedGraph& g);
bool has_triangle(const UndirectedGraph& g);

/// Triples and multiplicities of a sketch run. Untouched and zero slots are
/// omitted so both producers agree on sparsity.
struct SketchSummary {
  using SlotKey = std::tuple<std::uint32_t, Vertex, std::uint64_t>;
  using ClassKey = std::tuple<std::uint32_t, Vertex, std::uint32_t, std::uint64_t>;  // i, x, r, bits
  using BinKey = std::tuple<ClassKey, std::uint32_t, std::uint32_t>;                 // class, t, j

  std::map<SlotKey, SparseTriple> slots;
  std::map<ClassKey, std::pair<SparseTriple, std::uint64_t>> classes;  // sigma, load
  std::map<BinKey, std::pair<SparseTriple, std::uint32_t>> bins;        // triple, multiplicity

  friend bool operator==(const SketchSummary&, const SketchSummary&) = default;
};

inline constexpr std::uint64_t kReplayEdgeLimit = 10'000;

/// Independent recomputation of the sketch (layer-outer, vertex-major).
/// Throws InstanceTooLarge above kReplayEdgeLimit edges.
SketchSummary naive_sketch_replay(const OrientedGraph& g, const SeedBundle& s);

SketchSummary summarize(const SketchState& state);

}  // namespace trisketch
