#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace trisketch {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

class ZeroInverse : public std::domain_error {
 public:
  ZeroInverse() : std::domain_error("inverse of zero in prime field") {}
};

class ZeroId : public std::domain_error {
 public:
  ZeroId() : std::domain_error("identifier must be nonzero") {}
};

class NotPrime : public std::invalid_argument {
 public:
  explicit NotPrime(std::uint64_t p)
      : std::invalid_argument("modulus is not prime: " + std::to_string(p)) {}
};

bool is_prime_u64(std::uint64_t n);

/// Element of F_P, always fully reduced. Carries no modulus; the owning
/// PrimeField performs all arithmetic.
struct FieldElement {
  std::uint64_t value = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint64_t v) : value(v) {}

  constexpr bool is_zero() const { return value == 0; }
  friend constexpr auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

enum class Sign : std::int8_t { Minus = -1, Plus = 1 };

/// Signed moment triple (A, B, C) = sum of (v, v*id, v*id^2).
struct SparseTriple {
  FieldElement a;
  FieldElement b;
  FieldElement c;

  bool is_zero() const { return a.is_zero() && b.is_zero() && c.is_zero(); }
  friend constexpr bool operator==(const SparseTriple&, const SparseTriple&) = default;
};

class PrimeField {
 public:
  /// Throws NotPrime when `modulus` fails a deterministic Miller-Rabin test.
  explicit PrimeField(std::uint64_t modulus = kMersenne61);

  std::uint64_t modulus() const { return p_; }

  /// Reduces an arbitrary word into the field.
  FieldElement reduce(std::uint64_t v) const { return FieldElement{v % p_}; }
  FieldElement from_signed(Sign s) const {
    return s == Sign::Plus ? FieldElement{1} : FieldElement{p_ - 1};
  }

  FieldElement add(FieldElement x, FieldElement y) const {
    std::uint64_t s = x.value + y.value;  // both < 2^63
    return FieldElement{s >= p_ ? s - p_ : s};
  }
  FieldElement sub(FieldElement x, FieldElement y) const {
    return FieldElement{x.value >= y.value ? x.value - y.value : x.value + p_ - y.value};
  }
  FieldElement neg(FieldElement x) const { return FieldElement{x.value == 0 ? 0 : p_ - x.value}; }
  FieldElement mul(FieldElement x, FieldElement y) const;
  FieldElement pow(FieldElement base, std::uint64_t exp) const;
  /// Throws ZeroInverse on x = 0.
  FieldElement inv(FieldElement x) const;

  SparseTriple add(const SparseTriple& x, const SparseTriple& y) const {
    return {add(x.a, y.a), add(x.b, y.b), add(x.c, y.c)};
  }

  /// (a + sign, b + sign*id, c + sign*id^2). Throws ZeroId on id = 0.
  SparseTriple accumulate(const SparseTriple& t, Sign sign, FieldElement id) const;

  /// OneSparse(b/a) iff a != 0 and b^2 = a*c; nullopt otherwise.
  std::optional<FieldElement> one_sparse_test(const SparseTriple& t) const;

  /// One-sparse and decodes to exactly `expected`.
  bool decodes_to(const SparseTriple& t, FieldElement expected) const {
    auto d = one_sparse_test(t);
    return d && *d == expected;
  }

 private:
  std::uint64_t p_;
  bool mersenne61_;
};

}  // namespace trisketch
