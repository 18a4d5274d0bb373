#include "galwit/eigen.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace galwit;

namespace {

RationalField QF;

Rational rational_value(const PolyV<RationalField>& coords) {
  REQUIRE(coords.size() <= 1);
  return coords.empty() ? Rational(0) : coords[0];
}

} // namespace

TEST_CASE("level 11 has exactly one rational system matching point counts", "[eigen]") {
  auto lvl = compute_eigensystems_q(11, 100);
  REQUIRE(lvl.systems.size() == 1);
  auto& sys = lvl.systems[0];
  REQUIRE(sys.r == 1);
  auto E = galwit_tests::curve11();
  REQUIRE(rational_value(sys.aq.at(2)) == Rational(-2));
  REQUIRE(rational_value(sys.aq.at(3)) == Rational(-1));
  REQUIRE(rational_value(sys.aq.at(5)) == Rational(1));
  REQUIRE(rational_value(sys.aq.at(7)) == Rational(-2));
  for (u64 q : primes_below(50)) {
    if (q == 11) continue;
    REQUIRE(rational_value(sys.aq.at(q)) == Rational(E.ap(q)));
  }
  // extension past the precomputed bound agrees with point counts
  REQUIRE(rational_value(extend_aq(lvl, sys, 101)) == Rational(E.ap(101)));
  REQUIRE(rational_value(extend_aq(lvl, sys, 103)) == Rational(E.ap(103)));
}

TEST_CASE("level 1 has no systems and low bounds are rejected", "[eigen]") {
  auto lvl = compute_eigensystems_q(1, 10);
  REQUIRE(lvl.systems.empty());
  REQUIRE_THROWS_AS(compute_eigensystems_q(11, 1), std::invalid_argument);
}

TEST_CASE("level 23 carries a single quadratic system", "[eigen]") {
  auto lvl = compute_eigensystems_q(23, 100);
  REQUIRE(lvl.systems.size() == 1);
  auto& sys = lvl.systems[0];
  REQUIRE(sys.r == 2);
  // a_2 has minimal polynomial x^2 + x - 1
  NumberField NF(sys.field_poly);
  auto m = minpoly_over_q(NF, sys.aq.at(2));
  REQUIRE(m == PolyV<RationalField>{Rational(-1), Rational(1), Rational(1)});
}

TEST_CASE("newness by divisor-level comparison", "[eigen]") {
  auto l11 = compute_eigensystems_q(11, 100);
  mark_new_char0(l11, {});
  REQUIRE(l11.systems.size() == 1);
  REQUIRE(l11.systems[0].is_new);

  auto l22 = compute_eigensystems_q(22, 100);
  std::map<u64, const EigenLevelQ*> divs{{11, &l11}};
  mark_new_char0(l22, divs);
  for (auto& sys : l22.systems) REQUIRE(!sys.is_new);

  // missing divisor data is a dependency error naming the level
  REQUIRE_THROWS_WITH(mark_new_char0(l22, {}), Catch::Matchers::ContainsSubstring("11"));
}

TEST_CASE("dimension accounting over divisors for N <= 50", "[eigen]") {
  std::map<u64, EigenLevelQ> levels;
  std::map<u64, const EigenLevelQ*> ptrs;
  for (u64 N = 1; N <= 50; ++N) {
    u64 B = std::max<u64>(sturm_bound(N), 20);
    levels.emplace(N, compute_eigensystems_q(N, B));
  }
  for (auto& [N, lvl] : levels) ptrs[N] = &lvl;
  for (u64 N = 1; N <= 50; ++N) {
    auto& lvl = levels.at(N);
    std::map<u64, const EigenLevelQ*> divs;
    for (u64 M : divisors(N))
      if (M != N) divs[M] = ptrs.at(M);
    mark_new_char0(lvl, divs);
  }
  for (u64 N = 1; N <= 50; ++N) {
    u64 total = 0;
    for (u64 M : divisors(N)) {
      u64 copies = divisors(N / M).size();
      for (auto& sys : levels.at(M).systems)
        if (sys.is_new) total += copies * sys.r;
    }
    REQUIRE(total == genus_x0(N));
  }
}

TEST_CASE("CM detection with rigorous twist bounds", "[eigen]") {
  // conductor 27: CM by Q(sqrt(-3))
  auto l27 = compute_eigensystems_q(27, 100);
  REQUIRE(l27.systems.size() == 1);
  auto v27 = cm_test(l27, l27.systems[0]);
  REQUIRE(v27.has_cm);
  REQUIRE(v27.discriminant == -3);
  REQUIRE(v27.evidence_bound == sturm_bound(27 * 9));
  // the zero pattern itself, against the curve oracle
  auto E27 = galwit_tests::curve27();
  for (u64 q : primes_below(40)) {
    if (q == 3) continue;
    REQUIRE(rational_value(l27.systems[0].aq.at(q)) == Rational(E27.ap(q)));
    if (kronecker_at_prime(-3, q) == -1) REQUIRE(E27.ap(q) == 0);
  }

  // conductor 32: CM by Q(i)
  auto l32 = compute_eigensystems_q(32, 100);
  REQUIRE(l32.systems.size() == 1);
  auto v32 = cm_test(l32, l32.systems[0]);
  REQUIRE(v32.has_cm);
  REQUIRE(v32.discriminant == -4);
  auto E32 = galwit_tests::curve32();
  for (u64 q : primes_below(40)) {
    if (q == 2) continue;
    REQUIRE(rational_value(l32.systems[0].aq.at(q)) == Rational(E32.ap(q)));
  }

  // level 11: all candidate discriminants disproved by a nonzero inert a_q
  auto l11 = compute_eigensystems_q(11, 100);
  auto v11 = cm_test(l11, l11.systems[0]);
  REQUIRE(!v11.has_cm);
}

TEST_CASE("reduction mod p with the first-factor convention", "[eigen]") {
  auto l11 = compute_eigensystems_q(11, 100);
  auto red5 = reduce_system(l11.systems[0], 5);
  REQUIRE(red5.r == 1);
  REQUIRE(red5.p == 5);
  REQUIRE(red5.aq.at(2) == FiniteField::V{3});
  REQUIRE(red5.aq.at(3) == FiniteField::V{4});
  REQUIRE(red5.aq.at(5) == FiniteField::V{1});

  // quadratic system at 23 stays quadratic mod 2: x^2 + x - 1 is irreducible mod 2
  auto l23 = compute_eigensystems_q(23, 100);
  auto red2 = reduce_system(l23.systems[0], 2);
  REQUIRE(red2.r == 2);
  REQUIRE(red2.field->modulus == std::vector<u64>{1, 1, 1});
}

TEST_CASE("mod-p eigensystems from mod-p modular symbols", "[eigen]") {
  auto lvl = compute_eigensystems_p(11, 3, 100);
  REQUIRE(lvl.systems.size() == 1);
  auto& sys = lvl.systems[0];
  REQUIRE(sys.r == 1);
  REQUIRE(sys.eigenvector_verified);
  REQUIRE(sys.aq.at(2) == FiniteField::V{1});  // -2 mod 3
  REQUIRE(sys.aq.at(5) == FiniteField::V{1});

  // the reduction of the rational system agrees with the mod-3 computation
  auto l11 = compute_eigensystems_q(11, 100);
  auto red3 = reduce_system(l11.systems[0], 3);
  for (auto& [q, v] : red3.aq) {
    if (q == 3) continue;  // U_3 mod 3 is not the reduction of T_3
    REQUIRE(sys.aq.count(q) == 1);
    REQUIRE(sys.aq.at(q) == v);
  }
}

TEST_CASE("characteristic 2 at a prime level with irrational reduction", "[eigen]") {
  // level 23 mod 2: the quadratic system reduces to an F_4 system
  auto lvl = compute_eigensystems_p(23, 2, 100);
  REQUIRE(!lvl.systems.empty());
  bool found_r2 = false;
  for (auto& sys : lvl.systems) found_r2 |= (sys.r == 2);
  REQUIRE(found_r2);
  for (auto& sys : lvl.systems) REQUIRE(sys.eigenvector_verified);
}

TEST_CASE("eigensystem ids are stable across recomputation", "[eigen]") {
  auto a = compute_eigensystems_q(37, 40);
  auto b = compute_eigensystems_q(37, 100);
  REQUIRE(a.systems.size() == b.systems.size());
  for (size_t i = 0; i < a.systems.size(); ++i) {
    REQUIRE(a.systems[i].id == b.systems[i].id);
    REQUIRE(a.systems[i].r == b.systems[i].r);
  }
}
