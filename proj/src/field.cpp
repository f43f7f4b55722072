#include "trisketch/field.hpp"

#include <array>

namespace trisketch {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod_generic(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod_generic(result, base, m);
    base = mulmod_generic(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set for all n < 2^64.
  constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t a : bases) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_generic(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t modulus) : p_(modulus), mersenne61_(modulus == kMersenne61) {
  // add() relies on x + y not overflowing.
  if (modulus >= (std::uint64_t{1} << 63) || !is_prime_u64(modulus)) throw NotPrime(modulus);
}

FieldElement PrimeField::mul(FieldElement x, FieldElement y) const {
  u128 prod = static_cast<u128>(x.value) * y.value;
  if (mersenne61_) {
    std::uint64_t lo = static_cast<std::uint64_t>(prod) & kMersenne61;
    std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
    std::uint64_t s = lo + hi;
    if (s >= kMersenne61) s -= kMersenne61;
    return FieldElement{s};
  }
  return FieldElement{static_cast<std::uint64_t>(prod % p_)};
}

FieldElement PrimeField::pow(FieldElement base, std::uint64_t exp) const {
  FieldElement result{1 % p_};
  while (exp) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

FieldElement PrimeField::inv(FieldElement x) const {
  if (x.is_zero()) throw ZeroInverse();
  return pow(x, p_ - 2);
}

SparseTriple PrimeField::accumulate(const SparseTriple& t, Sign sign, FieldElement id) const {
  if (id.is_zero()) throw ZeroId();
  FieldElement sid = sign == Sign::Plus ? id : neg(id);
  return {add(t.a, from_signed(sign)), add(t.b, sid), add(t.c, mul(sid, id))};
}

std::optional<FieldElement> PrimeField::one_sparse_test(const SparseTriple& t) const {
  if (t.a.is_zero()) return std::nullopt;
  if (mul(t.b, t.b) != mul(t.a, t.c)) return std::nullopt;
  return mul(t.b, inv(t.a));
}

}  // namespace trisketch
