#include "trisketch/query.hpp"

#include <algorithm>

namespace trisketch {

Triangle::Triangle(const UndirectedGraph& g, Vertex x, Vertex v, Vertex w) : x_(x), v_(v), w_(w) {
  if (!g.is_adjacent(x, v) || !g.is_adjacent(x, w) || !g.is_adjacent(v, w))
    throw std::logic_error("triangle vertices are not pairwise adjacent");
}

std::array<Vertex, 3> Triangle::sorted() const {
  std::array<Vertex, 3> t{x_, v_, w_};
  std::sort(t.begin(), t.end());
  return t;
}

std::string_view to_string(GateVerdict v) {
  switch (v) {
    case GateVerdict::ClassNotOneSparse: return "class-1sparse";
    case GateVerdict::BinJ: return "bin-1sparse-j";
    case GateVerdict::BinJStar: return "bin-1sparse-jstar";
    case GateVerdict::SlotGuardV: return "slot-guard-v";
    case GateVerdict::SlotGuardW: return "slot-guard-w";
    case GateVerdict::NotAdjacent: return "adjacency";
    case GateVerdict::Confirmed: return "confirmed";
  }
  return "?";
}

bool gate_class(const PrimeField& F, const SparseTriple& sigma) { return F.one_sparse_test(sigma).has_value(); }

bool gate_bin(const PrimeField& F, const BinRecord& bin, FieldElement expected_id) {
  return F.decodes_to(bin.triple, expected_id);
}

bool gate_slot(const PrimeField& F, const SparseTriple& slot, FieldElement expected_id) {
  return F.decodes_to(slot, expected_id);
}

QueryResult query_triangle(const SketchState& state, const OrientedGraph& g, const SeedBundle& s,
                           const QueryOptions& opts) {
  if (!(state.seeds() == s.record())) throw StateMismatch("sketch was built from different seeds");
  if (state.graph_digest() != g.base().digest()) throw StateMismatch("sketch was built from a different graph");

  const PrimeField& F = s.field();
  const std::uint32_t groups = s.params().num_groups();
  QueryResult result;

  for (const auto& [key, cls] : state.classes()) {
    if (cls.collisions.empty()) continue;
    const bool class_ok = !s.params().class_gate || gate_class(F, cls.sigma);
    for (std::uint32_t t = 1; t <= groups; ++t) {
      for (const CollisionEntry& c : cls.collisions) {
        if (c.group != t) continue;
        TraceEntry entry{key, c, GateVerdict::ClassNotOneSparse};
        const Vertex v = c.wit_v.arc.to;
        const Vertex w = c.wit_w.arc.to;
        const BinRecord* bin_j = cls.bin(t, c.j);
        const BinRecord* bin_js = cls.bin(t, c.j_star);
        if (!class_ok) {
          entry.verdict = GateVerdict::ClassNotOneSparse;
        } else if (!bin_j || !gate_bin(F, *bin_j, s.id_hash(v))) {
          entry.verdict = GateVerdict::BinJ;
        } else if (!bin_js || !gate_bin(F, *bin_js, s.id_hash(w))) {
          entry.verdict = GateVerdict::BinJStar;
        } else if (!gate_slot(F, state.slot(key.layer, key.anchor, c.wit_v.slot), s.id_hash(v))) {
          entry.verdict = GateVerdict::SlotGuardV;
        } else if (!gate_slot(F, state.slot(key.layer, key.anchor, c.wit_w.slot), s.id_hash(w))) {
          entry.verdict = GateVerdict::SlotGuardW;
        } else if (!g.is_adjacent(v, w)) {
          entry.verdict = GateVerdict::NotAdjacent;
        } else {
          entry.verdict = GateVerdict::Confirmed;
        }
        result.trace.push_back(entry);
        if (entry.verdict == GateVerdict::Confirmed && !result.outcome) {
          result.outcome.emplace(g.base(), key.anchor, v, w);
          if (opts.early_stop) return result;
        }
      }
    }
  }
  return result;
}

}  // namespace trisketch
