#include "galwit/arith.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace galwit;

TEST_CASE("primality is deterministic and correct on small and large inputs", "[arith]") {
  auto primes = primes_below(2000);
  std::set<u64> pset(primes.begin(), primes.end());
  for (u64 n = 0; n < 2000; ++n) REQUIRE(is_prime(n) == (pset.count(n) > 0));
  REQUIRE(is_prime(2305843009213693951ull));  // 2^61 - 1
  REQUIRE(!is_prime(561));                    // Carmichael
  REQUIRE(!is_prime((1ull << 62) - 1));
  REQUIRE(next_prime(89) == 97);
}

TEST_CASE("factorize recovers prime decompositions", "[arith]") {
  auto f = factorize(960);
  REQUIRE(f == std::vector<std::pair<u64, unsigned>>{{2, 6}, {3, 1}, {5, 1}});
  auto g = factorize(1000003ull * 999983ull);
  REQUIRE(g.size() == 2);
  REQUIRE(g[0] == std::pair<u64, unsigned>{999983, 1});
  REQUIRE(g[1] == std::pair<u64, unsigned>{1000003, 1});
  REQUIRE(divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
  REQUIRE(euler_phi(40) == 16);
}

TEST_CASE("legendre symbol worked examples", "[arith]") {
  REQUIRE(legendre_symbol(1, 7) == 1);
  REQUIRE(legendre_symbol(2, 7) == 1);   // 3^2 = 9 = 2 mod 7
  REQUIRE(legendre_symbol(3, 7) == -1);  // squares mod 7 are {1,2,4}
  REQUIRE(legendre_symbol(14, 7) == 0);
  REQUIRE_THROWS_AS(legendre_symbol(3, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(legendre_symbol(3, 15), std::invalid_argument);
}

TEST_CASE("legendre symbol agrees with square enumeration and is multiplicative", "[arith]") {
  for (u64 p : primes_below(200)) {
    if (p == 2) continue;
    std::set<u64> squares;
    for (u64 x = 1; x < p; ++x) squares.insert(mul_mod(x, x, p));
    for (u64 a = 0; a < p; ++a) {
      int expected = (a == 0) ? 0 : (squares.count(a) ? 1 : -1);
      REQUIRE(legendre_symbol((i64)a, p) == expected);
    }
    for (u64 a = 1; a < p; ++a)
      for (u64 b : std::initializer_list<u64>{2, 3, p - 1}) {
        if (b % p == 0) continue;
        REQUIRE(legendre_symbol((i64)(a * b), p) ==
                legendre_symbol((i64)a, p) * legendre_symbol((i64)b, p));
      }
  }
}

TEST_CASE("quadratic reciprocity holds below 200", "[arith]") {
  auto primes = primes_below(200);
  for (u64 p : primes) {
    if (p == 2) continue;
    for (u64 q : primes) {
      if (q == 2 || q == p) continue;
      int lhs = legendre_symbol((i64)p, q) * legendre_symbol((i64)q, p);
      int rhs = ((p - 1) / 2 % 2 == 1 && (q - 1) / 2 % 2 == 1) ? -1 : 1;
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("multiplicative order worked examples", "[arith]") {
  REQUIRE(mult_order(1, 13) == 1);
  REQUIRE(mult_order(2, 5) == 4);
  REQUIRE(mult_order(2, 7) == 3);
  REQUIRE(mult_order(-1, 7) == 2);
  REQUIRE_THROWS_AS(mult_order(14, 7), std::invalid_argument);
  REQUIRE_THROWS_AS(mult_order(2, 8), std::invalid_argument);
}

TEST_CASE("multiplicative order is minimal and divides p-1, exhaustive p < 1000", "[arith]") {
  for (u64 p : primes_below(1000)) {
    for (u64 a = 1; a < p; ++a) {
      u64 ord = mult_order((i64)a, p);
      REQUIRE((p - 1) % ord == 0);
      REQUIRE(pow_mod(a, ord, p) == 1);
      for (auto [ell, e] : factorize(ord))
        REQUIRE(pow_mod(a, ord / ell, p) != 1);
      if (p < 200) {
        // independent oracle: direct iteration
        u64 k = 1, x = a % p;
        while (x != 1) { x = mul_mod(x, a, p); ++k; }
        REQUIRE(k == ord);
      }
    }
  }
}

TEST_CASE("splitting profile worked examples", "[arith]") {
  auto s = splitting_profile(89, 2);
  REQUIRE(s.in_Q_i == SplitKind::split);
  REQUIRE(s.in_Q_sqrt_l == SplitKind::split);
  REQUIRE(s.in_biquadratic);

  s = splitting_profile(7, 2);
  REQUIRE(s.in_Q_i == SplitKind::inert);
  REQUIRE(s.in_Q_sqrt_l == SplitKind::split);  // 7 = -1 mod 8
  REQUIRE(!s.in_biquadratic);

  s = splitting_profile(13, 3);
  REQUIRE(s.in_Q_i == SplitKind::split);
  REQUIRE(s.in_Q_sqrt_l == SplitKind::split);  // 4^2 = 16 = 3 mod 13
  REQUIRE(s.in_biquadratic);

  REQUIRE_THROWS_AS(splitting_profile(2, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(splitting_profile(5, 5), std::invalid_argument);
}

TEST_CASE("splitting in Q(i) tracks q mod 4 for all odd q < 10^4", "[arith]") {
  for (u64 q : primes_below(10000)) {
    if (q == 2) continue;
    for (u64 l : {2ull, 3ull, 5ull}) {
      if (q == l) continue;
      auto s = splitting_profile(q, l);
      REQUIRE((s.in_Q_i == SplitKind::split) == (q % 4 == 1));
      REQUIRE(s.in_biquadratic ==
              (s.in_Q_i == SplitKind::split && s.in_Q_sqrt_l == SplitKind::split));
      if (l != 2) REQUIRE((s.in_Q_sqrt_l == SplitKind::split) == (legendre_symbol((i64)l, q) == 1));
    }
  }
}

TEST_CASE("crt combines residue classes", "[arith]") {
  REQUIRE(crt_classes({{1, 4}, {4, 5}}) == std::pair<u64, u64>{9, 20});
  REQUIRE(crt_classes({{0, 1}}) == std::pair<u64, u64>{0, 1});
  REQUIRE(crt_classes({{1, 8}, {4, 5}}) == std::pair<u64, u64>{9, 40});
  REQUIRE_THROWS_AS(crt_classes({{1, 4}, {1, 6}}), std::invalid_argument);
}

TEST_CASE("kronecker symbol at 2 follows the discriminant rules", "[arith]") {
  REQUIRE(kronecker_at_prime(-4, 2) == 0);
  REQUIRE(kronecker_at_prime(-7, 2) == 1);    // -7 = 1 mod 8
  REQUIRE(kronecker_at_prime(-3, 2) == -1);   // -3 = 5 mod 8
  REQUIRE(kronecker_at_prime(-3, 7) == legendre_symbol(-3, 7));
}

TEST_CASE("prime powers validate their invariants", "[arith]") {
  PrimePower pp(2, 7);
  REQUIRE(pp.value() == 128);
  REQUIRE(PrimePower(13, 2).value() == 169);
  REQUIRE_THROWS_AS(PrimePower(4, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(PrimePower(5, 0), std::invalid_argument);
}
