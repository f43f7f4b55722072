#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trisketch/field.hpp"

namespace trisketch {

using Vertex = std::uint32_t;

/// Oriented edge anchor -> mate.
struct Arc {
  Vertex from = 0;
  Vertex to = 0;
  friend constexpr auto operator<=>(const Arc&, const Arc&) = default;
};

class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParamMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class VertexOutOfRange : public std::out_of_range {
 public:
  explicit VertexOutOfRange(std::uint64_t v)
      : std::out_of_range("vertex id out of range: " + std::to_string(v)) {}
};

class EmptySlotArray : public std::invalid_argument {
 public:
  EmptySlotArray() : std::invalid_argument("slot array of size zero") {}
};

enum class CoinMode { Prf, KWise };

std::string_view to_string(CoinMode m);
CoinMode coin_mode_from_string(std::string_view s);

/// Configuration constants and the quantities derived from them. Logs are
/// base 2 and floored at 1 so tiny graphs still get one layer/group/bucket
/// per constant unit.
struct Params {
  std::uint64_t n = 0;
  std::uint32_t c_M = 16;
  std::uint32_t c_B = 8;
  std::uint32_t c_T = 16;
  std::uint32_t c_R = 8;
  std::uint32_t c_G = 8;
  std::uint32_t c_k = 12;
  std::uint32_t kappa = 7;
  std::uint32_t C0 = 4;
  std::uint64_t prime = kMersenne61;
  CoinMode coin_mode = CoinMode::Prf;
  std::optional<std::uint32_t> layers;   // overrides I
  std::optional<std::uint32_t> groups;   // overrides R (0 allowed: no probes)
  std::optional<std::uint32_t> buckets;  // overrides T
  std::optional<std::uint32_t> keep_log2;  // test hook: p_i = 2^-keep_log2 for every layer
  bool class_gate = true;  // false skips the class 1-sparse gate in the query
  std::string preset = "full";

  static Params full(std::uint64_t n);
  static Params reduced(std::uint64_t n);
  /// "full" or "reduced"; throws ParamError otherwise.
  static Params preset_for(std::string_view name, std::uint64_t n);

  /// Applies one "key=value" override (CLI --param). Throws ParamError.
  void apply_override(std::string_view key, std::string_view value);

  std::uint32_t log2n() const;
  std::uint32_t num_layers() const;   // I
  std::uint32_t num_groups() const;   // R
  std::uint32_t num_buckets() const;  // T
  std::uint32_t independence() const; // k
  /// e with p_i = 2^-e; e = i + 2 on the dyadic schedule.
  std::uint32_t keep_exponent(std::uint32_t layer) const;
  double keep_rate(std::uint32_t layer) const;
  /// Lstar = ceil(log2 n) + 2.
  std::uint32_t prefix_bits() const;
  std::uint64_t slots_for(std::uint64_t degree) const { return std::uint64_t{c_M} * degree; }
  /// L(x,i) = ceil(log2(max(1, ceil(c_B * d(x) * p_i)))), computed exactly.
  std::uint32_t level_horizon(std::uint64_t degree, std::uint32_t layer) const;
  /// Upper bound of level_horizon over all degrees < n and layers.
  std::uint32_t max_level() const;

  /// Structural checks (constants >= 1, prime modulus, Lstar fits a word).
  void validate() const;
  /// validate() plus P >= n^kappa.
  void validate_field_budget() const;

  /// Stable textual form of every field, used for seed binding and logs.
  std::string canonical_string() const;

  friend bool operator==(const Params&, const Params&) = default;
};

using MasterSeed = std::array<std::uint8_t, 32>;

/// Up to 64 hex digits, left-padded with zeros. Throws ParamError.
MasterSeed parse_master_seed(std::string_view hex);
std::string master_seed_hex(const MasterSeed& seed);

inline constexpr std::string_view kPrfName = "blake2b-siphash24/1";
inline constexpr std::string_view kScanOrder = "arc-ascending/1";

/// Everything needed to re-derive all randomness.
struct SeedsRecord {
  MasterSeed master_seed{};
  std::string prf = std::string(kPrfName);
  std::string scan_order = std::string(kScanOrder);
  Params params;

  friend bool operator==(const SeedsRecord&, const SeedsRecord&) = default;
};

/// A length-r prefix of a prefix key; bit 0 of the key is the most
/// significant bit of `bits`.
struct Prefix {
  std::uint32_t length = 0;
  std::uint64_t bits = 0;
  friend constexpr auto operator<=>(const Prefix&, const Prefix&) = default;
  std::string to_string() const;  // "-" for the empty prefix, else '0'/'1' chars
  static Prefix from_string(std::string_view s);
};

/// Canonical complementary bucket pair (lo <= hi, hi = complement(lo)).
struct ProbePair {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  friend constexpr auto operator<=>(const ProbePair&, const ProbePair&) = default;
  bool contains(std::uint32_t j) const { return j == lo || j == hi; }
};

constexpr std::uint32_t complement(std::uint32_t j, std::uint32_t T) { return (T - j) % T; }

/// Keyed pseudorandom function over sequences of 64-bit words.
class Prf {
 public:
  Prf() = default;
  explicit Prf(const std::array<std::uint8_t, 16>& key) : key_(key) {}
  std::uint64_t operator()(std::initializer_list<std::uint64_t> words) const;
  std::uint64_t eval(const std::uint64_t* words, std::size_t count) const;

 private:
  std::array<std::uint8_t, 16> key_{};
};

/// Sole source of randomness for a run; immutable after construction.
class SeedBundle {
 public:
  explicit SeedBundle(SeedsRecord record);
  SeedBundle(const MasterSeed& seed, Params params);

  const SeedsRecord& record() const { return record_; }
  const Params& params() const { return record_.params; }
  const PrimeField& field() const { return field_; }

  FieldElement id_hash(Vertex v) const;
  Sign sign_hash(Vertex x, Vertex y, std::uint32_t layer) const;
  std::uint64_t slot_index(Vertex x, Vertex y, std::uint32_t layer, std::uint64_t num_slots) const;
  /// Lstar-bit key, returned in the low bits of the word.
  std::uint64_t prefix_key(std::uint32_t layer, Vertex v) const;
  Prefix prefix(std::uint32_t layer, Vertex v, std::uint32_t r) const;
  /// H_i(v).
  FieldElement base_key(std::uint32_t layer, Vertex v) const;
  /// H_i(y) - H_i(x).
  FieldElement pk_offset(std::uint32_t layer, Vertex x, Vertex y) const;
  bool keep_coin(Arc e, std::uint32_t layer) const;
  std::uint32_t bucket(std::uint32_t layer, std::uint32_t r, std::uint32_t group, FieldElement delta) const;
  std::vector<ProbePair> probed_pairs(std::uint32_t layer, Vertex x, std::uint32_t r, Prefix b,
                                      std::uint32_t group) const;

 private:
  struct Affine {
    FieldElement a;
    FieldElement b;
  };
  FieldElement apply(const Affine& f, FieldElement x) const {
    return field_.add(field_.mul(f.a, x), f.b);
  }
  void check_vertex(Vertex v) const;
  std::size_t bucket_index(std::uint32_t layer, std::uint32_t r, std::uint32_t group) const;

  SeedsRecord record_;
  PrimeField field_;
  std::uint32_t layers_ = 0;
  std::uint32_t groups_ = 0;
  std::uint32_t buckets_ = 0;
  std::uint32_t levels_ = 0;  // max_level() + 1
  std::uint32_t prefix_bits_ = 0;
  Prf sign_prf_, slot_prf_, prefix_prf_, coin_prf_, probe_prf_;
  Affine id_fn_{};
  std::vector<Affine> base_fns_;    // per layer
  std::vector<Affine> bucket_fns_;  // per (layer, level, group)
  std::vector<FieldElement> kwise_coeffs_;  // per layer, k coefficients each
};

}  // namespace trisketch
