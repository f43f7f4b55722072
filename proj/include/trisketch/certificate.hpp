#pragma once

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trisketch/query.hpp"
#include "trisketch/seeds.hpp"
#include "trisketch/sketch.hpp"

namespace trisketch {

inline constexpr std::string_view kCertSchema = "trisketch-cert/1";

/// Malformed certificate; `path()` names the offending field, e.g.
/// "class_logs[3].sigma[1]".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class TraceMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Canonical key (i, x, r, b, t, beta) of one obligated complementary-bin check.
struct ShouldCheckKey {
  std::uint32_t layer = 0;
  Vertex anchor = 0;
  Prefix prefix;
  std::uint32_t group = 0;
  std::uint32_t beta = 0;

  AnchorClassKey class_key() const { return {layer, anchor, prefix}; }
  friend constexpr auto operator<=>(const ShouldCheckKey&, const ShouldCheckKey&) = default;
};

std::string to_string(const ShouldCheckKey& k);

struct CollisionRecord {
  std::uint32_t group = 0;
  std::uint32_t j = 0;
  std::uint32_t j_star = 0;
  Witness wit_v;
  Witness wit_w;
  bool paired_once = true;
  friend bool operator==(const CollisionRecord&, const CollisionRecord&) = default;
};

struct ClassLogEntry {
  AnchorClassKey key;
  SparseTriple sigma;
  bool pass_class = false;
  std::vector<CollisionRecord> collisions;
  friend bool operator==(const ClassLogEntry&, const ClassLogEntry&) = default;
};

struct SlotLogEntry {
  std::uint32_t layer = 0;
  Vertex anchor = 0;
  std::uint64_t slot = 0;
  SparseTriple triple;
  bool pass_slot = false;
  FieldElement decoded;  // zero when pass_slot is false
  friend bool operator==(const SlotLogEntry&, const SlotLogEntry&) = default;
};

struct AdjLogEntry {
  ShouldCheckKey key;
  FieldElement fingerprint_v;  // h_id(v)
  FieldElement fingerprint_w;  // h_id(w)
  Arc arc_v;
  Arc arc_w;
  bool adjacent = false;
  friend bool operator==(const AdjLogEntry&, const AdjLogEntry&) = default;
};

/// Claimed triangle (anchor, v, w) of a YES certificate.
struct TriangleClaim {
  Vertex x = 0, v = 0, w = 0;
  friend bool operator==(const TriangleClaim&, const TriangleClaim&) = default;
};

struct Certificate {
  SeedsRecord seeds;
  std::vector<ClassLogEntry> class_logs;  // ClassOrder
  std::vector<SlotLogEntry> slot_logs;    // (layer, anchor, slot)
  std::vector<AdjLogEntry> adj_logs;      // ShouldCheckKey order
  std::optional<TriangleClaim> outcome;   // nullopt = NO
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// Builds the Seeds+Logs artifact of a run. Throws TraceMismatch when the
/// trace does not belong to `state`.
Certificate emit_certificate(const SketchState& state, const QueryResult& result, const SeedBundle& s);

/// Canonical byte form (sorted-key JSON, one trailing newline).
std::string serialize(const Certificate& c);
/// Throws SchemaError with a field path on malformed or non-canonical input.
Certificate deserialize(std::string_view bytes);

/// De-duplicated coverage keys of all collision records.
std::set<ShouldCheckKey> log_pairs(const Certificate& c);

/// SeedsRecord <-> JSON text (also embedded in certificates).
std::string serialize_seeds(const SeedsRecord& s);

}  // namespace trisketch
