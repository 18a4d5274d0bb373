#include "galwit/ffield.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace galwit;

TEST_CASE("make_field picks the minimal-value irreducible modulus", "[ffield]") {
  auto f2 = make_field(2, 1);
  REQUIRE(f2->modulus == std::vector<u64>{0, 1});  // modulus x

  auto f8 = make_field(2, 3);
  REQUIRE(f8->modulus == std::vector<u64>{1, 1, 0, 1});  // x^3 + x + 1

  auto f25 = make_field(5, 2);
  REQUIRE(f25->modulus == std::vector<u64>{2, 0, 1});  // x^2 + 2

  REQUIRE_THROWS_AS(make_field(6, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(FiniteField(2, 2, {0, 0, 1}), std::invalid_argument);  // x^2 reducible
}

TEST_CASE("element order worked examples", "[ffield]") {
  auto f8 = make_field(2, 3);
  FFElement one{f8, f8->one()};
  REQUIRE(element_order(one) == 1);
  FFElement x{f8, f8->gen()};
  REQUIRE(element_order(x) == 7);

  auto f5 = make_field(5, 1);
  FFElement two{f5, f5->from_int(2)};
  REQUIRE(element_order(two) == 4);

  FFElement zero{f5, f5->zero()};
  REQUIRE_THROWS_AS(element_order(zero), std::invalid_argument);
}

TEST_CASE("element order divides field size minus one, exhaustive up to 2^9", "[ffield]") {
  std::vector<std::pair<u64, unsigned>> shapes;
  for (u64 p : primes_below(512))
    for (unsigned r = 1;; ++r) {
      u64 sz = 1;
      bool fits = true;
      for (unsigned i = 0; i < r; ++i) {
        sz *= p;
        if (sz > 512) { fits = false; break; }
      }
      if (!fits) break;
      shapes.push_back({p, r});
    }
  for (auto [p, r] : shapes) {
    if (r == 1 && p > 100) continue;  // prime fields covered by mult_order tests
    auto K = make_field(p, r);
    u64 n = K->size() - 1;
    // enumerate all nonzero elements
    std::vector<u64> digits(r, 0);
    while (true) {
      FiniteField::V v(digits.begin(), digits.end());
      if (!K->is_zero(v)) {
        u64 ord = element_order(FFElement{K, v});
        REQUIRE(n % ord == 0);
        REQUIRE(K->eq(K->pow(v, ord), K->one()));
      }
      unsigned i = 0;
      while (i < r && digits[i] == p - 1) { digits[i] = 0; ++i; }
      if (i >= r) break;
      ++digits[i];
    }
  }
}

TEST_CASE("Frobenius is a field automorphism on all fields up to 2^16", "[ffield]") {
  std::mt19937_64 rng(7);
  for (u64 p : primes_below(256)) {
    for (unsigned r = 2;; ++r) {
      long double sz = 1;
      for (unsigned i = 0; i < r; ++i) sz *= (long double)p;
      if (sz > 65536.0L) break;
      auto K = make_field(p, r);
      ExtField E(K);
      for (int trial = 0; trial < 20; ++trial) {
        auto a = E.rand_elt(rng), b = E.rand_elt(rng);
        REQUIRE(K->frobenius(K->add(a, b)) == K->add(K->frobenius(a), K->frobenius(b)));
        REQUIRE(K->frobenius(K->mul(a, b)) == K->mul(K->frobenius(a), K->frobenius(b)));
      }
    }
  }
}

TEST_CASE("factor_poly worked examples", "[ffield]") {
  PrimeField f3(3);
  // x^2 - 1 = x^2 + 2 over F_3 -> (x+1)(x+2)
  auto res = ff_factor(f3, PolyV<PrimeField>{2, 0, 1});
  REQUIRE(res.factors.size() == 2);
  REQUIRE(res.factors[0].first == PolyV<PrimeField>{1, 1});
  REQUIRE(res.factors[0].second == 1);
  REQUIRE(res.factors[1].first == PolyV<PrimeField>{2, 1});

  PrimeField f2(2);
  auto res2 = ff_factor(f2, PolyV<PrimeField>{1, 1, 1});
  REQUIRE(res2.factors.size() == 1);
  REQUIRE(res2.factors[0] == std::pair<PolyV<PrimeField>, unsigned>{{1, 1, 1}, 1});

  PrimeField f5(5);
  auto res5 = ff_factor(f5, PolyV<PrimeField>{1, 0, 1});
  REQUIRE(res5.factors.size() == 2);
  REQUIRE(res5.factors[0].first == PolyV<PrimeField>{2, 1});
  REQUIRE(res5.factors[1].first == PolyV<PrimeField>{3, 1});

  REQUIRE_THROWS_AS(ff_factor(f5, PolyV<PrimeField>{}), std::invalid_argument);
}

TEST_CASE("factor_poly remultiplies exactly, factors are irreducible, seeds agree", "[ffield]") {
  std::mt19937_64 rng(42);
  for (u64 p : {2ull, 3ull, 5ull, 13ull}) {
    PrimeField f(p);
    for (int trial = 0; trial < 60; ++trial) {
      int deg = 1 + (int)(rng() % 12);
      PolyV<PrimeField> g(deg + 1);
      for (auto& c : g) c = rng() % p;
      g.back() = 1 + rng() % (p - 1 == 0 ? 1 : p - 1);
      if (p == 2) g.back() = 1;
      poly_normalize(f, g);
      if (poly_deg(g) < 1) continue;

      auto fac = ff_factor(f, g, 1);
      auto fac2 = ff_factor(f, g, 999);
      REQUIRE(fac.factors == fac2.factors);  // canonical order, seed-independent

      PolyV<PrimeField> prod{fac.lead};
      for (auto& [q, m] : fac.factors) {
        REQUIRE(ff_is_irreducible(f, q));
        REQUIRE(q.back() == 1);
        for (unsigned i = 0; i < m; ++i) prod = poly_mul(f, prod, q);
      }
      REQUIRE(poly_eq(f, prod, g));
    }
  }
}

TEST_CASE("squarefree edge case with high multiplicities in characteristic 2", "[ffield]") {
  PrimeField f2(2);
  PolyV<PrimeField> xp1{1, 1};
  PolyV<PrimeField> quad{1, 1, 1};
  PolyV<PrimeField> g{1};
  for (int i = 0; i < 4; ++i) g = poly_mul(f2, g, xp1);
  for (int i = 0; i < 2; ++i) g = poly_mul(f2, g, quad);
  auto fac = ff_factor(f2, g);
  REQUIRE(fac.factors.size() == 2);
  REQUIRE(fac.factors[0] == std::pair<PolyV<PrimeField>, unsigned>{{1, 1}, 4});
  REQUIRE(fac.factors[1] == std::pair<PolyV<PrimeField>, unsigned>{{1, 1, 1}, 2});
}

TEST_CASE("roots inside extension fields", "[ffield]") {
  PrimeField f5(5);
  auto roots = ff_roots(f5, PolyV<PrimeField>{1, 0, 1});
  REQUIRE(roots == std::vector<u64>{2, 3});

  // an F_3-irreducible quadratic picks up two roots in F_9
  auto K9 = make_field(3, 2);
  ExtField E9(K9);
  PolyV<ExtField> q;
  for (u64 c : K9->modulus) q.push_back(K9->from_int((i64)c));
  auto r9 = ff_roots(E9, q);
  REQUIRE(r9.size() == 2);
  for (auto& root : r9)
    REQUIRE(E9.is_zero(poly_eval(E9, q, root)));
}

TEST_CASE("minimal polynomials over the prime field", "[ffield]") {
  auto f8 = make_field(2, 3);
  auto m = minpoly_over_prime(*f8, f8->gen());
  REQUIRE(m == PolyV<PrimeField>{1, 1, 0, 1});
  REQUIRE(minpoly_over_prime(*f8, f8->one()) == PolyV<PrimeField>{1, 1});
  REQUIRE(subfield_degree(*f8, f8->gen()) == 3);
  REQUIRE(subfield_degree(*f8, f8->zero()) == 1);
}

TEST_CASE("canonical embeddings respect arithmetic", "[ffield]") {
  auto f4 = make_field(2, 2);
  auto f16 = make_field(2, 4);
  Embedding emb(*f4, f16);

  // the embedded generator must satisfy f4's modulus
  ExtField E(f16);
  PolyV<ExtField> m;
  for (u64 c : f4->modulus) m.push_back(f16->from_int((i64)c));
  REQUIRE(E.is_zero(poly_eval(E, m, emb.gen_pow[1])));

  std::mt19937_64 rng(3);
  ExtField E4(f4);
  for (int t = 0; t < 25; ++t) {
    auto a = E4.rand_elt(rng), b = E4.rand_elt(rng);
    REQUIRE(emb(f4->add(a, b)) == f16->add(emb(a), emb(b)));
    REQUIRE(emb(f4->mul(a, b)) == f16->mul(emb(a), emb(b)));
  }

  // element strings follow the low-to-high convention
  auto f8 = make_field(2, 3);
  FiniteField::V v{1, 0, 1};
  REQUIRE(f8->str(v) == "1,0,1");
  REQUIRE(f8->parse("1,0,1") == v);
}
