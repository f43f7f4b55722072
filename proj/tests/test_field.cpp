#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "trisketch/field.hpp"

using namespace trisketch;

namespace {
SparseTriple T(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return {FieldElement{a}, FieldElement{b}, FieldElement{c}}; }
}  // namespace

TEST_CASE("add wraps modulo P") {
  PrimeField F7(7);
  CHECK(F7.add(FieldElement{3}, FieldElement{5}) == FieldElement{1});
  CHECK(F7.add(FieldElement{0}, FieldElement{4}) == FieldElement{4});
  PrimeField F;
  CHECK(F.add(FieldElement{kMersenne61 - 1}, FieldElement{1}) == FieldElement{0});
}

TEST_CASE("inverse") {
  PrimeField F7(7);
  CHECK(F7.inv(FieldElement{1}) == FieldElement{1});
  CHECK(F7.inv(FieldElement{2}) == FieldElement{4});
  CHECK_THROWS_AS(F7.inv(FieldElement{0}), ZeroInverse);
}

TEST_CASE("inverse is an involution on F_10007") {
  PrimeField F(10007);
  for (std::uint64_t x = 1; x < 10007; ++x) {
    FieldElement y = F.inv(FieldElement{x});
    REQUIRE(F.mul(FieldElement{x}, y) == FieldElement{1});
    REQUIRE(F.inv(y) == FieldElement{x});
  }
}

TEST_CASE("mersenne multiply agrees with generic reduction") {
  PrimeField F;
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100000; ++k) {
    std::uint64_t a = rng() % kMersenne61, b = rng() % kMersenne61;
    auto want = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kMersenne61);
    REQUIRE(F.mul(FieldElement{a}, FieldElement{b}).value == want);
  }
}

TEST_CASE("non-prime moduli are rejected") {
  CHECK_THROWS_AS(PrimeField(10005), NotPrime);
  CHECK_THROWS_AS(PrimeField(1), NotPrime);
  CHECK(is_prime_u64(kMersenne61));
  CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("accumulate") {
  PrimeField F(101);
  SparseTriple t = F.accumulate({}, Sign::Plus, FieldElement{5});
  CHECK(t == T(1, 5, 25));
  CHECK(F.accumulate(t, Sign::Plus, FieldElement{3}) == T(2, 8, 34));
  CHECK(F.accumulate(t, Sign::Minus, FieldElement{5}) == T(0, 0, 0));
  CHECK_THROWS_AS(F.accumulate(t, Sign::Plus, FieldElement{0}), ZeroId);
}

TEST_CASE("one-sparse test") {
  PrimeField F(101);
  REQUIRE(F.one_sparse_test(T(1, 5, 25)).has_value());
  CHECK(*F.one_sparse_test(T(1, 5, 25)) == FieldElement{5});
  CHECK_FALSE(F.one_sparse_test(T(0, 0, 0)).has_value());
  CHECK_FALSE(F.one_sparse_test(T(2, 8, 34)).has_value());
  CHECK(F.decodes_to(T(1, 5, 25), FieldElement{5}));
  CHECK_FALSE(F.decodes_to(T(1, 5, 25), FieldElement{6}));
}

TEST_CASE("negative singleton decodes") {
  PrimeField F;
  SparseTriple t = F.accumulate({}, Sign::Minus, FieldElement{123456789});
  CHECK(F.decodes_to(t, FieldElement{123456789}));
}

TEST_CASE("accumulation is order independent") {
  PrimeField F(10007);
  std::mt19937_64 rng(11);
  std::vector<std::pair<Sign, FieldElement>> items;
  for (int k = 0; k < 40; ++k) items.push_back({rng() & 1 ? Sign::Plus : Sign::Minus, FieldElement{1 + rng() % 10006}});
  auto fold = [&] {
    SparseTriple t;
    for (auto [s, id] : items) t = F.accumulate(t, s, id);
    return t;
  };
  const SparseTriple ref = fold();
  for (int k = 0; k < 20; ++k) {
    std::shuffle(items.begin(), items.end(), rng);
    REQUIRE(fold() == ref);
  }
}

TEST_CASE("mixed triples rarely pass at small P") {
  PrimeField F(10007);
  std::mt19937_64 rng(3);
  const int trials = 1'000'000;
  int accepted = 0;
  for (int k = 0; k < trials; ++k) {
    SparseTriple t;
    const int items = 2 + static_cast<int>(rng() % 3);
    FieldElement first{1 + rng() % 10006};
    for (int q = 0; q < items; ++q) {
      FieldElement id = q == 0 ? first : FieldElement{1 + rng() % 10006};
      if (q == 1 && id == first) id = FieldElement{first.value % 10006 + 1};
      t = F.accumulate(t, Sign::Plus, id);
    }
    accepted += F.one_sparse_test(t).has_value();
  }
  CHECK(static_cast<double>(accepted) / trials <= 2.0 / 10007);
}
