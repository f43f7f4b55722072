#include "trisketch/seeds.hpp"

#include <sodium.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <mutex>
#include <sstream>

namespace trisketch {

namespace {

using u128 = unsigned __int128;

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  });
}

std::uint32_t ceil_log2(std::uint64_t v) {
  return v <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(v - 1));
}

std::uint32_t ceil_mul(std::uint32_t c, std::uint32_t log) {
  return static_cast<std::uint32_t>(std::uint64_t{c} * log);
}

std::uint32_t parse_u32(std::string_view key, std::string_view value) {
  std::uint32_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw ParamError("bad integer for parameter " + std::string(key) + ": " + std::string(value));
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw ParamError("bad integer for parameter " + std::string(key) + ": " + std::string(value));
  return out;
}

std::optional<std::uint32_t> parse_opt(std::string_view key, std::string_view value) {
  if (value == "-" || value == "auto") return std::nullopt;
  return parse_u32(key, value);
}

std::string opt_str(const std::optional<std::uint32_t>& v) {
  return v ? std::to_string(*v) : std::string("-");
}

/// Uniform draw from [0, P) (or [1, P)) by rejection over the PRF stream.
FieldElement draw_field(const Prf& prf, std::uint64_t tag, std::uint64_t index, std::uint64_t p,
                        bool nonzero) {
  int width = std::bit_width(p);
  for (std::uint64_t ctr = 0;; ++ctr) {
    std::uint64_t v = prf({tag, index, ctr});
    if (width < 64) v >>= (64 - width);
    if (v < p && (!nonzero || v != 0)) return FieldElement{v};
  }
}

std::uint64_t bounded(std::uint64_t word, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<u128>(word) * bound) >> 64);
}

enum : std::uint64_t {
  kTagId = 1,
  kTagBase = 2,
  kTagBucket = 3,
  kTagKWise = 4,
};

}  // namespace

std::string_view to_string(CoinMode m) { return m == CoinMode::Prf ? "prf" : "kwise"; }

CoinMode coin_mode_from_string(std::string_view s) {
  if (s == "prf") return CoinMode::Prf;
  if (s == "kwise") return CoinMode::KWise;
  throw ParamError("unknown coin mode: " + std::string(s));
}

Params Params::full(std::uint64_t n) {
  Params p;
  p.n = n;
  return p;
}

Params Params::reduced(std::uint64_t n) {
  Params p;
  p.n = n;
  p.c_M = 4;
  p.c_T = 4;
  p.c_R = 2;
  p.c_G = 2;
  p.C0 = 2;
  p.kappa = 5;
  p.preset = "reduced";
  return p;
}

Params Params::preset_for(std::string_view name, std::uint64_t n) {
  if (name == "full") return full(n);
  if (name == "reduced") return reduced(n);
  throw ParamError("unknown preset: " + std::string(name));
}

void Params::apply_override(std::string_view key, std::string_view value) {
  if (key == "n") n = parse_u64(key, value);
  else if (key == "c_M") c_M = parse_u32(key, value);
  else if (key == "c_B") c_B = parse_u32(key, value);
  else if (key == "c_T") c_T = parse_u32(key, value);
  else if (key == "c_R") c_R = parse_u32(key, value);
  else if (key == "c_G") c_G = parse_u32(key, value);
  else if (key == "c_k") c_k = parse_u32(key, value);
  else if (key == "kappa") kappa = parse_u32(key, value);
  else if (key == "C0") C0 = parse_u32(key, value);
  else if (key == "prime") prime = parse_u64(key, value);
  else if (key == "coin_mode") coin_mode = coin_mode_from_string(value);
  else if (key == "layers") layers = parse_opt(key, value);
  else if (key == "groups") groups = parse_opt(key, value);
  else if (key == "buckets") buckets = parse_opt(key, value);
  else if (key == "keep_log2") keep_log2 = parse_opt(key, value);
  else if (key == "class_gate") {
    if (value != "0" && value != "1") throw ParamError("class_gate expects 0 or 1");
    class_gate = value == "1";
  }
  else throw ParamError("unknown parameter: " + std::string(key));
}

std::uint32_t Params::log2n() const { return std::max<std::uint32_t>(1, ceil_log2(n)); }
std::uint32_t Params::num_layers() const { return layers.value_or(ceil_mul(c_R, log2n())); }
std::uint32_t Params::num_groups() const { return groups.value_or(ceil_mul(c_G, log2n())); }
std::uint32_t Params::num_buckets() const { return buckets.value_or(ceil_mul(c_T, log2n())); }
std::uint32_t Params::independence() const { return ceil_mul(c_k, log2n()); }
std::uint32_t Params::prefix_bits() const { return ceil_log2(n) + 2; }

std::uint32_t Params::keep_exponent(std::uint32_t layer) const {
  return keep_log2.value_or(layer + 2);
}

double Params::keep_rate(std::uint32_t layer) const {
  return std::ldexp(1.0, -static_cast<int>(keep_exponent(layer)));
}

std::uint32_t Params::level_horizon(std::uint64_t degree, std::uint32_t layer) const {
  u128 num = static_cast<u128>(c_B) * degree;
  std::uint32_t e = keep_exponent(layer);
  u128 budget;
  if (num == 0) budget = 0;
  else if (e >= 127) budget = 1;
  else budget = (num + ((u128{1} << e) - 1)) >> e;
  if (budget <= 1) return 0;
  std::uint64_t b = budget > ~std::uint64_t{0} ? ~std::uint64_t{0} : static_cast<std::uint64_t>(budget);
  return ceil_log2(b);
}

std::uint32_t Params::max_level() const {
  std::uint64_t dmax = n == 0 ? 0 : n - 1;
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i <= num_layers(); ++i) best = std::max(best, level_horizon(dmax, i));
  return best;
}

void Params::validate() const {
  for (auto [name, v] : {std::pair{"c_M", c_M}, {"c_B", c_B}, {"c_T", c_T}, {"c_R", c_R},
                         {"c_G", c_G}, {"c_k", c_k}, {"kappa", kappa}, {"C0", C0}}) {
    if (v == 0) throw ParamError(std::string("parameter must be >= 1: ") + name);
  }
  if (n == 0) throw ParamError("vertex count n must be >= 1");
  if (n > (std::uint64_t{1} << 32)) throw ParamError("vertex count exceeds 2^32");
  if (buckets && *buckets == 0) throw ParamError("bucket count must be >= 1");
  if (prime >= (std::uint64_t{1} << 63) || !is_prime_u64(prime)) throw ParamError("modulus is not a prime below 2^63");
  if (prime <= n) throw ParamError("modulus must exceed n");
  if (prefix_bits() > 63) throw ParamError("prefix key length exceeds a word");
  if (max_level() > prefix_bits()) throw ParamError("level horizon exceeds prefix key length");
  if (num_layers() > 4096 || num_groups() > 4096) throw ParamError("layer/group count unreasonably large");
}

void Params::validate_field_budget() const {
  validate();
  u128 pow = 1;
  for (std::uint32_t k = 0; k < kappa; ++k) {
    pow *= n;
    if (pow > prime) throw ParamError("field too small: P < n^kappa (lower kappa or raise prime)");
  }
}

std::string Params::canonical_string() const {
  std::ostringstream os;
  os << "n=" << n << ";c_M=" << c_M << ";c_B=" << c_B << ";c_T=" << c_T << ";c_R=" << c_R
     << ";c_G=" << c_G << ";c_k=" << c_k << ";kappa=" << kappa << ";C0=" << C0 << ";prime=" << prime
     << ";coin_mode=" << to_string(coin_mode) << ";layers=" << opt_str(layers)
     << ";groups=" << opt_str(groups) << ";buckets=" << opt_str(buckets)
     << ";keep_log2=" << opt_str(keep_log2) << ";class_gate=" << (class_gate ? 1 : 0) << ";preset=" << preset;
  return os.str();
}

MasterSeed parse_master_seed(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 64) throw ParamError("seed must be 1..64 hex digits");
  std::string padded(64 - hex.size(), '0');
  padded.append(hex);
  MasterSeed out{};
  for (std::size_t k = 0; k < 32; ++k) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(padded.data() + 2 * k, padded.data() + 2 * k + 2, v, 16);
    if (ec != std::errc{} || p != padded.data() + 2 * k + 2)
      throw ParamError("seed is not hexadecimal: " + std::string(hex));
    out[k] = static_cast<std::uint8_t>(v);
  }
  return out;
}

std::string master_seed_hex(const MasterSeed& seed) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (auto byte : seed) {
    s.push_back(digits[byte >> 4]);
    s.push_back(digits[byte & 15]);
  }
  return s;
}

std::string Prefix::to_string() const {
  if (length == 0) return "-";
  std::string s(length, '0');
  for (std::uint32_t k = 0; k < length; ++k) {
    if ((bits >> (length - 1 - k)) & 1) s[k] = '1';
  }
  return s;
}

Prefix Prefix::from_string(std::string_view s) {
  if (s == "-") return {};
  if (s.empty() || s.size() > 63) throw std::invalid_argument("bad prefix string");
  Prefix p{static_cast<std::uint32_t>(s.size()), 0};
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bad prefix string");
    p.bits = (p.bits << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return p;
}

std::uint64_t Prf::eval(const std::uint64_t* words, std::size_t count) const {
  std::array<unsigned char, 8 * 16> buf{};
  if (count > 16) throw std::length_error("PRF input too long");
  for (std::size_t k = 0; k < count; ++k) {
    for (int byte = 0; byte < 8; ++byte) buf[8 * k + byte] = static_cast<unsigned char>(words[k] >> (8 * byte));
  }
  unsigned char out[crypto_shorthash_siphash24_BYTES];
  crypto_shorthash_siphash24(out, buf.data(), 8 * count, key_.data());
  std::uint64_t v = 0;
  for (int byte = 7; byte >= 0; --byte) v = (v << 8) | out[byte];
  return v;
}

std::uint64_t Prf::operator()(std::initializer_list<std::uint64_t> words) const {
  return eval(words.begin(), words.size());
}

namespace {

std::array<std::uint8_t, 16> family_key(const SeedsRecord& rec, std::string_view label) {
  ensure_sodium();
  std::string msg = "trisketch|" + rec.prf + "|" + rec.scan_order + "|" + rec.params.canonical_string() +
                    "|" + std::string(label);
  std::array<std::uint8_t, 16> out{};
  crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(msg.data()), msg.size(),
                     rec.master_seed.data(), rec.master_seed.size());
  return out;
}

}  // namespace

SeedBundle::SeedBundle(const MasterSeed& seed, Params params)
    : SeedBundle(SeedsRecord{seed, std::string(kPrfName), std::string(kScanOrder), std::move(params)}) {}

SeedBundle::SeedBundle(SeedsRecord record) : record_(std::move(record)), field_(record_.params.prime) {
  const Params& p = record_.params;
  p.validate();
  if (record_.prf != kPrfName) throw ParamError("unsupported PRF: " + record_.prf);
  if (record_.scan_order != kScanOrder) throw ParamError("unsupported scan order: " + record_.scan_order);
  layers_ = p.num_layers();
  groups_ = p.num_groups();
  buckets_ = p.num_buckets();
  levels_ = p.max_level() + 1;
  prefix_bits_ = p.prefix_bits();

  sign_prf_ = Prf(family_key(record_, "sign"));
  slot_prf_ = Prf(family_key(record_, "slot"));
  prefix_prf_ = Prf(family_key(record_, "prefix"));
  coin_prf_ = Prf(family_key(record_, "coin"));
  probe_prf_ = Prf(family_key(record_, "probe"));
  Prf id_prf(family_key(record_, "id"));
  Prf base_prf(family_key(record_, "pairkey"));
  Prf bucket_prf(family_key(record_, "bucket"));

  const std::uint64_t P = p.prime;
  id_fn_ = {draw_field(id_prf, kTagId, 0, P, true), draw_field(id_prf, kTagId, 1, P, false)};
  base_fns_.reserve(layers_);
  for (std::uint32_t i = 1; i <= layers_; ++i) {
    base_fns_.push_back({draw_field(base_prf, kTagBase, 2 * i, P, true),
                         draw_field(base_prf, kTagBase, 2 * i + 1, P, false)});
  }
  bucket_fns_.resize(std::size_t{layers_} * levels_ * groups_);
  for (std::uint32_t i = 1; i <= layers_; ++i) {
    for (std::uint32_t r = 0; r < levels_; ++r) {
      for (std::uint32_t t = 1; t <= groups_; ++t) {
        std::size_t idx = bucket_index(i, r, t);
        bucket_fns_[idx] = {draw_field(bucket_prf, kTagBucket, 2 * idx, P, true),
                            draw_field(bucket_prf, kTagBucket, 2 * idx + 1, P, false)};
      }
    }
  }
  if (p.coin_mode == CoinMode::KWise) {
    Prf kw_prf(family_key(record_, "coin-kwise"));
    std::uint32_t k = std::max<std::uint32_t>(1, p.independence());
    kwise_coeffs_.reserve(std::size_t{layers_} * k);
    for (std::uint32_t i = 1; i <= layers_; ++i) {
      for (std::uint32_t c = 0; c < k; ++c)
        kwise_coeffs_.push_back(draw_field(kw_prf, kTagKWise, std::uint64_t{i} << 32 | c, P, false));
    }
  }
}

void SeedBundle::check_vertex(Vertex v) const {
  if (v >= record_.params.n) throw VertexOutOfRange(v);
}

std::size_t SeedBundle::bucket_index(std::uint32_t layer, std::uint32_t r, std::uint32_t group) const {
  return (std::size_t{layer - 1} * levels_ + r) * groups_ + (group - 1);
}

FieldElement SeedBundle::id_hash(Vertex v) const {
  check_vertex(v);
  FieldElement h = apply(id_fn_, FieldElement{v});
  return h.is_zero() ? FieldElement{1} : h;
}

Sign SeedBundle::sign_hash(Vertex x, Vertex y, std::uint32_t layer) const {
  return (sign_prf_({x, y, layer}) & 1) ? Sign::Plus : Sign::Minus;
}

std::uint64_t SeedBundle::slot_index(Vertex x, Vertex y, std::uint32_t layer, std::uint64_t num_slots) const {
  if (num_slots == 0) throw EmptySlotArray();
  return bounded(slot_prf_({x, y, layer}), num_slots);
}

std::uint64_t SeedBundle::prefix_key(std::uint32_t layer, Vertex v) const {
  return prefix_prf_({layer, v}) >> (64 - prefix_bits_);
}

Prefix SeedBundle::prefix(std::uint32_t layer, Vertex v, std::uint32_t r) const {
  if (r > prefix_bits_) throw std::out_of_range("prefix level exceeds key length");
  if (r == 0) return {};
  return {r, prefix_key(layer, v) >> (prefix_bits_ - r)};
}

FieldElement SeedBundle::base_key(std::uint32_t layer, Vertex v) const {
  if (layer == 0 || layer > layers_) throw std::out_of_range("layer index out of range");
  return apply(base_fns_[layer - 1], FieldElement{v});
}

FieldElement SeedBundle::pk_offset(std::uint32_t layer, Vertex x, Vertex y) const {
  return field_.sub(base_key(layer, y), base_key(layer, x));
}

bool SeedBundle::keep_coin(Arc e, std::uint32_t layer) const {
  const std::uint32_t exponent = record_.params.keep_exponent(layer);
  if (record_.params.coin_mode == CoinMode::KWise) {
    std::uint32_t k = std::max<std::uint32_t>(1, record_.params.independence());
    const FieldElement* coeffs = kwise_coeffs_.data() + std::size_t{layer - 1} * k;
    FieldElement point = field_.reduce(std::uint64_t{e.from} * record_.params.n + e.to + 1);
    FieldElement acc{0};
    for (std::uint32_t c = 0; c < k; ++c) acc = field_.add(field_.mul(acc, point), coeffs[c]);
    if (exponent >= 64) return false;
    return acc.value < (record_.params.prime >> exponent);
  }
  // Bernoulli(2^-exponent): the first `exponent` bits of the PRF stream are all zero.
  std::uint32_t remaining = exponent;
  for (std::uint64_t word = 0; remaining > 0; ++word) {
    std::uint64_t v = coin_prf_({layer, e.from, e.to, word});
    std::uint32_t take = std::min<std::uint32_t>(remaining, 64);
    if (take == 64 ? v != 0 : (v >> (64 - take)) != 0) return false;
    remaining -= take;
  }
  return true;
}

std::uint32_t SeedBundle::bucket(std::uint32_t layer, std::uint32_t r, std::uint32_t group,
                                 FieldElement delta) const {
  if (group == 0 || group > groups_) throw std::out_of_range("group index out of range");
  if (r >= levels_) throw std::out_of_range("level index out of range");
  return static_cast<std::uint32_t>(apply(bucket_fns_[bucket_index(layer, r, group)], delta).value % buckets_);
}

std::vector<ProbePair> SeedBundle::probed_pairs(std::uint32_t layer, Vertex x, std::uint32_t r, Prefix b,
                                                std::uint32_t group) const {
  const std::uint32_t T = buckets_;
  const std::uint32_t distinct = T / 2 + 1;
  const std::uint32_t want = std::min(record_.params.C0, distinct);
  std::vector<ProbePair> out;
  out.reserve(want);
  for (std::uint64_t s = 0; out.size() < want; ++s) {
    auto j = static_cast<std::uint32_t>(bounded(probe_prf_({layer, x, r, b.bits, group, s}), T));
    std::uint32_t js = complement(j, T);
    ProbePair pp{std::min(j, js), std::max(j, js)};
    bool seen = false;
    for (const auto& q : out) seen = seen || q == pp;
    if (!seen) out.push_back(pp);
  }
  return out;
}

}  // namespace trisketch
