#include "trisketch/oracle.hpp"

#include <algorithm>

namespace trisketch {

namespace {

// Walks each oriented wedge x->v, x->w with v < w and reports closed ones.
template <class Visit>
bool for_each_triangle(const UndirectedGraph& g, Visit&& visit) {
  const std::uint32_t n = g.n();
  auto before = [&](Vertex a, Vertex b) {
    auto da = g.degree(a), db = g.degree(b);
    return da != db ? da < db : a < b;
  };
  std::vector<Vertex> out;
  std::vector<char> mark(n, 0);
  for (Vertex x = 0; x < n; ++x) {
    out.clear();
    for (Vertex y : g.neighbors(x)) {
      if (before(x, y)) out.push_back(y);
    }
    for (Vertex y : out) mark[y] = 1;
    for (Vertex v : out) {
      for (Vertex w : g.neighbors(v)) {
        if (mark[w] && before(v, w)) {
          std::array<Vertex, 3> t{x, v, w};
          std::sort(t.begin(), t.end());
          if (visit(t)) {
            for (Vertex y : out) mark[y] = 0;
            return true;
          }
        }
      }
    }
    for (Vertex y : out) mark[y] = 0;
  }
  return false;
}

}  // namespace

TriangleSet enumerate_triangles(const UndirectedGraph& g) {
  TriangleSet out;
  for_each_triangle(g, [&](const std::array<Vertex, 3>& t) {
    out.push_back(t);
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool has_triangle(const UndirectedGraph& g) {
  return for_each_triangle(g, [](const std::array<Vertex, 3>&) { return true; });
}

SketchSummary naive_sketch_replay(const OrientedGraph& g, const SeedBundle& s) {
  if (g.m() > kReplayEdgeLimit) throw InstanceTooLarge("naive replay is limited to 10^4 edges");
  if (s.params().n != g.n()) throw ParamMismatch("seeds and graph disagree on n");
  const Params& p = s.params();
  const PrimeField& F = s.field();
  SketchSummary out;

  for (std::uint32_t i = 1; i <= p.num_layers(); ++i) {
    for (Vertex x = 0; x < g.n(); ++x) {
      const std::uint64_t d = g.base().degree(x);
      const std::uint64_t M = p.slots_for(d);
      std::map<std::uint64_t, SparseTriple> slots;  // this (i, x) only
      for (Vertex y : g.out_neighbors(x)) {
        if (!s.keep_coin(Arc{x, y}, i)) continue;
        const FieldElement h = s.id_hash(y);
        const FieldElement h2 = F.mul(h, h);
        const std::uint64_t sidx = s.slot_index(x, y, i, M);
        SparseTriple& z = slots[sidx];
        if (s.sign_hash(x, y, i) == Sign::Plus) {
          z = {F.add(z.a, FieldElement{1}), F.add(z.b, h), F.add(z.c, h2)};
        } else {
          z = {F.sub(z.a, FieldElement{1}), F.sub(z.b, h), F.sub(z.c, h2)};
        }
        // Slot holds exactly y: A != 0, B = A h, C = A h^2.
        if (z.a.value == 0 || F.mul(z.a, h) != z.b || F.mul(z.a, h2) != z.c) continue;

        const FieldElement delta = F.sub(s.base_key(i, y), s.base_key(i, x));
        const std::uint32_t top = p.level_horizon(d, i);
        for (std::uint32_t r = 0; r <= top; ++r) {
          const Prefix b = s.prefix(i, x, r);
          if (s.prefix(i, y, r) != b) continue;
          const SketchSummary::ClassKey ck{i, x, r, b.bits};
          auto& [sigma, load] = out.classes[ck];
          sigma = {F.add(sigma.a, z.a), F.add(sigma.b, z.b), F.add(sigma.c, z.c)};
          ++load;
          for (std::uint32_t t = 1; t <= p.num_groups(); ++t) {
            const std::uint32_t j = s.bucket(i, r, t, delta);
            bool probed = false;
            for (const ProbePair& pp : s.probed_pairs(i, x, r, b, t)) probed |= (pp.lo == j || pp.hi == j);
            if (!probed) continue;
            auto& [bt, mult] = out.bins[{ck, t, j}];
            bt = {F.add(bt.a, z.a), F.add(bt.b, z.b), F.add(bt.c, z.c)};
            ++mult;
          }
        }
      }
      for (const auto& [sidx, z] : slots) {
        if (!z.is_zero()) out.slots[{i, x, sidx}] = z;
      }
    }
  }
  return out;
}

SketchSummary summarize(const SketchState& state) {
  SketchSummary out;
  for (const auto& [key, arr] : state.slot_arrays()) {
    auto [i, x] = state.split_slot_key(key);
    for (std::uint64_t k = 0; k < arr.slots.size(); ++k) {
      if (!arr.slots[k].is_zero()) out.slots[{i, x, k}] = arr.slots[k];
    }
  }
  for (const auto& [key, cls] : state.classes()) {
    const SketchSummary::ClassKey ck{key.layer, key.anchor, key.prefix.length, key.prefix.bits};
    out.classes[ck] = {cls.sigma, cls.load};
    for (const auto& [tj, bin] : cls.bins) out.bins[{ck, tj.first, tj.second}] = {bin.triple, bin.multiplicity};
  }
  return out;
}

}  // namespace trisketch
