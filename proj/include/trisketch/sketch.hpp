#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "trisketch/counters.hpp"
#include "trisketch/graph.hpp"
#include "trisketch/seeds.hpp"

namespace trisketch {

class InactiveClass : public std::out_of_range {
 public:
  InactiveClass() : std::out_of_range("anchor class is not active") {}
};

/// Anchor-class (i, x, r, b); r is prefix.length.
struct AnchorClassKey {
  std::uint32_t layer = 0;
  Vertex anchor = 0;
  Prefix prefix;

  std::uint32_t level() const { return prefix.length; }
  friend constexpr bool operator==(const AnchorClassKey&, const AnchorClassKey&) = default;
};

/// Enumeration order: layer, level, anchor, prefix bits.
struct ClassOrder {
  bool operator()(const AnchorClassKey& a, const AnchorClassKey& b) const {
    if (a.layer != b.layer) return a.layer < b.layer;
    if (a.prefix.length != b.prefix.length) return a.prefix.length < b.prefix.length;
    if (a.anchor != b.anchor) return a.anchor < b.anchor;
    return a.prefix.bits < b.prefix.bits;
  }
};

struct Witness {
  Arc arc;
  std::uint64_t slot = 0;
  std::uint32_t group = 0;
  friend constexpr bool operator==(const Witness&, const Witness&) = default;
};

struct BinRecord {
  SparseTriple triple;
  std::optional<Witness> witness;  // first accumulated arc, never replaced
  std::uint32_t multiplicity = 0;
  bool paired = false;
};

struct CollisionEntry {
  std::uint32_t group = 0;
  std::uint32_t j = 0;
  std::uint32_t j_star = 0;
  Witness wit_v;  // witness of bin j
  Witness wit_w;  // witness of bin j_star
  friend constexpr bool operator==(const CollisionEntry&, const CollisionEntry&) = default;
};

struct ClassState {
  SparseTriple sigma;
  std::uint64_t load = 0;
  std::uint32_t probes_per_group = 0;
  std::vector<ProbePair> probes;  // group t occupies [(t-1)*probes_per_group, t*probes_per_group)
  std::map<std::pair<std::uint32_t, std::uint32_t>, BinRecord> bins;  // (group, j), probed bins only
  std::vector<CollisionEntry> collisions;  // registration order across groups

  std::span<const ProbePair> probes_of(std::uint32_t group) const {
    return {probes.data() + std::size_t{group - 1} * probes_per_group, probes_per_group};
  }
  const BinRecord* bin(std::uint32_t group, std::uint32_t j) const {
    auto it = bins.find({group, j});
    return it == bins.end() ? nullptr : &it->second;
  }
};

struct SlotArray {
  std::vector<SparseTriple> slots;
  std::uint64_t retained = 0;  // R_{x,i}
};

/// One accepted slot materialization (instrumentation).
struct Materialization {
  Arc arc;
  std::uint32_t layer = 0;
  std::uint64_t slot = 0;
  SparseTriple slot_state;
};

struct BuildOptions {
  bool counters = true;
  bool record_materializations = false;
  /// Replaces the canonical arc scan order (tests only); must be a permutation of g.arcs().
  std::optional<std::span<const Arc>> scan_order;
};

class SketchState {
 public:
  using ClassMap = std::map<AnchorClassKey, ClassState, ClassOrder>;

  SketchState(SeedsRecord seeds, std::string graph_digest, std::uint32_t n)
      : seeds_(std::move(seeds)), graph_digest_(std::move(graph_digest)), n_(n) {}

  const SeedsRecord& seeds() const { return seeds_; }
  const std::string& graph_digest() const { return graph_digest_; }

  const ClassMap& classes() const { return classes_; }
  const ClassState* find_class(const AnchorClassKey& key) const;
  /// Current slot triple; zero for never-touched slots.
  SparseTriple slot(std::uint32_t layer, Vertex anchor, std::uint64_t sidx) const;
  const std::unordered_map<std::uint64_t, SlotArray>& slot_arrays() const { return slots_; }
  std::uint64_t slot_key(std::uint32_t layer, Vertex anchor) const {
    return std::uint64_t{layer} * n_ + anchor;
  }
  std::pair<std::uint32_t, Vertex> split_slot_key(std::uint64_t key) const {
    return {static_cast<std::uint32_t>(key / n_), static_cast<Vertex>(key % n_)};
  }

  /// Materialized contributions to an active class. Throws InactiveClass.
  std::uint64_t class_load(const AnchorClassKey& key) const;
  /// Registered entries of group t in registration order; empty if inactive.
  std::vector<CollisionEntry> collisions_of(const AnchorClassKey& key, std::uint32_t group) const;
  std::size_t total_collisions() const;

  const Counters& counters() const { return counters_; }
  Counters& counters() { return counters_; }
  const std::vector<Materialization>& materializations() const { return materializations_; }

  /// Rough resident size of the sketch structures.
  std::size_t approx_bytes() const;

 private:
  friend SketchState build_sketches(const OrientedGraph&, const SeedBundle&, const BuildOptions&);

  SeedsRecord seeds_;
  std::string graph_digest_;
  std::uint32_t n_ = 0;
  std::unordered_map<std::uint64_t, SlotArray> slots_;
  ClassMap classes_;
  Counters counters_;
  std::vector<Materialization> materializations_;
};

/// Single non-adaptive pass over the arcs. Throws ParamMismatch when the
/// seeds were configured for a different vertex count, ParamError when the
/// field is too small for n.
SketchState build_sketches(const OrientedGraph& g, const SeedBundle& s, const BuildOptions& opts = {});

}  // namespace trisketch
