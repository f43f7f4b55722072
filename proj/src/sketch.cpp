#include "trisketch/sketch.hpp"

#include <algorithm>
#include <chrono>

namespace trisketch {

const ClassState* SketchState::find_class(const AnchorClassKey& key) const {
  auto it = classes_.find(key);
  return it == classes_.end() ? nullptr : &it->second;
}

SparseTriple SketchState::slot(std::uint32_t layer, Vertex anchor, std::uint64_t sidx) const {
  auto it = slots_.find(slot_key(layer, anchor));
  if (it == slots_.end() || sidx >= it->second.slots.size()) return {};
  return it->second.slots[sidx];
}

std::uint64_t SketchState::class_load(const AnchorClassKey& key) const {
  const ClassState* c = find_class(key);
  if (!c) throw InactiveClass();
  return c->load;
}

std::vector<CollisionEntry> SketchState::collisions_of(const AnchorClassKey& key, std::uint32_t group) const {
  std::vector<CollisionEntry> out;
  if (const ClassState* c = find_class(key)) {
    for (const auto& e : c->collisions) {
      if (e.group == group) out.push_back(e);
    }
  }
  return out;
}

std::size_t SketchState::total_collisions() const {
  std::size_t total = 0;
  for (const auto& [key, c] : classes_) total += c.collisions.size();
  return total;
}

std::size_t SketchState::approx_bytes() const {
  // Node overheads approximated as three pointers per tree/hash node.
  constexpr std::size_t node = 3 * sizeof(void*);
  std::size_t bytes = sizeof(*this);
  for (const auto& [key, arr] : slots_) bytes += node + sizeof(arr) + arr.slots.capacity() * sizeof(SparseTriple);
  for (const auto& [key, c] : classes_) {
    bytes += node + sizeof(key) + sizeof(c);
    bytes += c.probes.capacity() * sizeof(ProbePair);
    bytes += c.bins.size() * (node + sizeof(std::pair<std::uint32_t, std::uint32_t>) + sizeof(BinRecord));
    bytes += c.collisions.capacity() * sizeof(CollisionEntry);
  }
  return bytes;
}

SketchState build_sketches(const OrientedGraph& g, const SeedBundle& s, const BuildOptions& opts) {
  const Params& p = s.params();
  if (p.n != g.n())
    throw ParamMismatch("seeds configured for n=" + std::to_string(p.n) + " but graph has n=" + std::to_string(g.n()));
  p.validate_field_budget();

  const auto started = std::chrono::steady_clock::now();
  const PrimeField& F = s.field();
  const std::uint32_t layers = p.num_layers();
  const std::uint32_t groups = p.num_groups();
  const std::uint32_t T = p.num_buckets();

  SketchState st(s.record(), g.base().digest(), g.n());
  Counters& ctr = st.counters_;
  ctr.enabled = opts.counters;
  if (ctr.enabled) {
    ctr.keep_per_edge.assign(g.m(), 0);
    ctr.keep_per_anchor.assign(g.n(), 0);
  }

  std::span<const Arc> scan = opts.scan_order.value_or(std::span<const Arc>(g.arcs()));
  for (std::size_t e_idx = 0; e_idx < scan.size(); ++e_idx) {
    const Arc e = scan[e_idx];
    const Vertex x = e.from;
    const Vertex y = e.to;
    const std::uint64_t deg = g.base().degree(x);
    const FieldElement id = s.id_hash(y);

    for (std::uint32_t i = 1; i <= layers; ++i) {
      if (!s.keep_coin(e, i)) continue;

      SlotArray& arr = st.slots_[st.slot_key(i, x)];
      if (arr.slots.empty()) arr.slots.resize(p.slots_for(deg));
      ++arr.retained;
      if (ctr.enabled) {
        ++ctr.kept_edges;
        ++ctr.keep_per_anchor[x];
        // Counters are indexed by canonical arc position even under a custom scan.
        auto pos = std::lower_bound(g.arcs().begin(), g.arcs().end(), e) - g.arcs().begin();
        ++ctr.keep_per_edge[static_cast<std::size_t>(pos)];
      }

      const std::uint64_t sidx = s.slot_index(x, y, i, arr.slots.size());
      SparseTriple& slot = arr.slots[sidx];
      slot = F.accumulate(slot, s.sign_hash(x, y, i), id);
      if (!F.decodes_to(slot, id)) continue;  // slot 1-sparse and decodes to the mate

      const SparseTriple contribution = slot;
      if (ctr.enabled) ++ctr.materializations;
      if (opts.record_materializations) st.materializations_.push_back({e, i, sidx, contribution});

      const std::uint32_t horizon = p.level_horizon(deg, i);
      const FieldElement delta = s.pk_offset(i, x, y);
      for (std::uint32_t r = 0; r <= horizon; ++r) {
        const Prefix bx = s.prefix(i, x, r);
        if (bx != s.prefix(i, y, r)) continue;

        const AnchorClassKey key{i, x, bx};
        auto [it, fresh] = st.classes_.try_emplace(key);
        ClassState& cls = it->second;
        if (fresh) {
          cls.probes_per_group = std::min(p.C0, T / 2 + 1);
          cls.probes.reserve(std::size_t{groups} * cls.probes_per_group);
          for (std::uint32_t t = 1; t <= groups; ++t) {
            auto pp = s.probed_pairs(i, x, r, bx, t);
            cls.probes.insert(cls.probes.end(), pp.begin(), pp.end());
          }
          if (ctr.enabled) ++ctr.per_level[{i, r}].active_classes;
        }
        cls.sigma = F.add(cls.sigma, contribution);
        ++cls.load;
        if (ctr.enabled) ++ctr.per_level[{i, r}].materialized;

        for (std::uint32_t t = 1; t <= groups; ++t) {
          const std::uint32_t j = s.bucket(i, r, t, delta);
          const std::uint32_t js = complement(j, T);
          auto probes = cls.probes_of(t);
          if (std::none_of(probes.begin(), probes.end(), [&](const ProbePair& pp) { return pp.contains(j); }))
            continue;

          BinRecord& bin = cls.bins[{t, j}];
          bin.triple = F.add(bin.triple, contribution);
          ++bin.multiplicity;
          if (!bin.witness) bin.witness = Witness{e, sidx, t};

          bool fire = false;
          BinRecord* other = nullptr;
          if (j != js) {
            auto o = cls.bins.find({t, js});
            if (o != cls.bins.end()) other = &o->second;
            fire = other && other->witness && !bin.paired && !other->paired;
          } else {
            // A fixed-point bin pairs with itself once it holds two items.
            other = &bin;
            fire = bin.multiplicity >= 2 && !bin.paired;
          }
          if (fire) {
            cls.collisions.push_back({t, j, js, *bin.witness, *other->witness});
            bin.paired = true;
            other->paired = true;
            if (ctr.enabled) ++ctr.per_level[{i, r}].executed_checks;
          }
        }
      }
    }
  }

  if (ctr.enabled) {
    for (const auto& [key, arr] : st.slots_) ++ctr.retained_histogram[arr.retained];
    ctr.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return st;
}

}  // namespace trisketch
