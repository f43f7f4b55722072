#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "trisketch/graph.hpp"
#include "trisketch/sketch.hpp"

namespace trisketch {

class StateMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A confirmed triangle (anchor, v, w). Construction checks all three
/// adjacencies against the graph.
class Triangle {
 public:
  Triangle(const UndirectedGraph& g, Vertex x, Vertex v, Vertex w);
  Vertex x() const { return x_; }
  Vertex v() const { return v_; }
  Vertex w() const { return w_; }
  std::array<Vertex, 3> sorted() const;
  friend bool operator==(const Triangle&, const Triangle&) = default;

 private:
  Vertex x_, v_, w_;
};

using QueryOutcome = std::optional<Triangle>;  // nullopt = NO

enum class GateVerdict {
  ClassNotOneSparse,
  BinJ,
  BinJStar,
  SlotGuardV,
  SlotGuardW,
  NotAdjacent,
  Confirmed,
};

std::string_view to_string(GateVerdict v);

struct TraceEntry {
  AnchorClassKey key;
  CollisionEntry collision;
  GateVerdict verdict = GateVerdict::ClassNotOneSparse;

  /// Gates 1-3 passed, so an adjacency probe was performed.
  bool reached_adjacency() const {
    return verdict == GateVerdict::NotAdjacent || verdict == GateVerdict::Confirmed;
  }
};

using GateTrace = std::vector<TraceEntry>;

struct QueryOptions {
  bool early_stop = true;
};

struct QueryResult {
  QueryOutcome outcome;
  GateTrace trace;
};

bool gate_class(const PrimeField& F, const SparseTriple& sigma);
bool gate_bin(const PrimeField& F, const BinRecord& bin, FieldElement expected_id);
bool gate_slot(const PrimeField& F, const SparseTriple& slot, FieldElement expected_id);

/// Walks registered collisions in canonical order through the class, bin,
/// slot and adjacency gates. Throws StateMismatch when `state` was not built
/// from (g, s).
QueryResult query_triangle(const SketchState& state, const OrientedGraph& g, const SeedBundle& s,
                           const QueryOptions& opts = {});

}  // namespace trisketch
