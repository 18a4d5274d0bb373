#include "galwit/modsym.hpp"

#include "galwit/matrix_q.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace galwit;

namespace {

RationalField QF;

// Point-count oracle: a_q = q + 1 - #E(F_q) for E: y^2 + y = x^3 - x^2 - 10x - 20,
// the conductor-11 curve.
i64 ap_curve11(u64 q) {
  i64 count = 1;  // point at infinity
  auto md = [&](i64 v) { return (u64)(((v % (i64)q) + (i64)q) % (i64)q); };
  for (u64 x = 0; x < q; ++x)
    for (u64 y = 0; y < q; ++y) {
      i64 lhs = (i64)(mul_mod(y, y, q) + y);
      i64 x3 = (i64)mul_mod(mul_mod(x, x, q), x, q);
      i64 x2 = (i64)mul_mod(x, x, q);
      i64 rhs = x3 - x2 - 10 * (i64)x - 20;
      if (md(lhs) == md(rhs)) ++count;
    }
  return (i64)q + 1 - count;
}

// number of real roots of a squarefree rational polynomial in (lo, hi]
int sturm_count(const PolyV<RationalField>& f, const Rational& lo, const Rational& hi) {
  std::vector<PolyV<RationalField>> chain{f, poly_deriv(QF, f)};
  while (poly_deg(chain.back()) > 0) {
    auto r = poly_mod(QF, chain[chain.size() - 2], chain.back());
    if (poly_is_zero(r)) break;
    chain.push_back(poly_neg(QF, r));
  }
  auto signs_at = [&](const Rational& x) {
    int changes = 0, last = 0;
    for (auto& g : chain) {
      Rational v = poly_eval(QF, g, x);
      int s = v == 0 ? 0 : (v > 0 ? 1 : -1);
      if (s != 0) {
        if (last != 0 && s != last) ++changes;
        last = s;
      }
    }
    return changes;
  };
  return signs_at(lo) - signs_at(hi);
}

// Hecke operator from the coset definition, as an independent cross-check of
// the Heilbronn route: T_q = [q,0;0,1] + sum_k [1,k;0,q] on modular symbols.
Mat<RationalField> hecke_coset_definition(const ModSymSpace<RationalField>& sp, u64 q) {
  Mat<RationalField> M(QF, sp.dim, sp.dim);
  for (int j = 0; j < sp.dim; ++j) {
    auto [c, d] = sp.p1.rep(sp.basis_gens[j]);
    auto [a, b, c0, d0] = lift_to_sl2(sp.N, c, d);
    // symbol {b/d0, a/c0}
    auto add_term = [&](i64 n1, i64 m1, i64 n2, i64 m2) {
      auto e = modular_symbol(sp, n1, m1, n2, m2);
      for (auto& [row, v] : e) M.at(row, j) = QF.add(M.at(row, j), v);
    };
    add_term(b * (i64)q, d0, a * (i64)q, c0);  // [q,0;0,1]: t -> q t
    for (u64 k = 0; k < q; ++k)
      add_term(b + (i64)k * d0, (i64)q * d0, a + (i64)k * c0, (i64)q * c0);
  }
  return M;
}

} // namespace

TEST_CASE("genus formula oracle", "[modsym]") {
  REQUIRE(genus_x0(1) == 0);
  REQUIRE(genus_x0(11) == 1);
  REQUIRE(genus_x0(37) == 2);
  REQUIRE(genus_x0(64) == 3);
  REQUIRE(genus_x0(22) == 2);
  REQUIRE(genus_x0(128) == 9);
  REQUIRE(genus_x0(81) == 4);
  REQUIRE(genus_x0(125) == 8);
  REQUIRE(genus_x0(169) == 8);
  REQUIRE(genus_x0(343) == 26);
  // components of the N = 11 and N = 64 examples
  REQUIRE(psi_index(11) == 12);
  REQUIRE(cusp_count(11) == 2);
  REQUIRE(psi_index(64) == 96);
  REQUIRE(nu2_count(64) == 0);
  REQUIRE(nu3_count(64) == 0);
  REQUIRE(cusp_count(64) == 12);
  REQUIRE(sturm_bound(11) == 2);
  REQUIRE(sturm_bound(128) == 32);
}

TEST_CASE("cuspidal dimension equals twice the genus", "[modsym]") {
  for (u64 N : {1ull, 11ull, 37ull}) {
    auto sp = build_space(N, QF);
    REQUIRE((u64)sp.cuspidal_dim() == 2 * genus_x0(N));
  }
  // a denser sweep (the acceptance suite does all N <= 200)
  for (u64 N = 1; N <= 60; ++N) {
    auto sp = build_space(N, QF);
    REQUIRE((u64)sp.cuspidal_dim() == 2 * genus_x0(N));
    REQUIRE((u64)sp.cusps.size() == cusp_count(N));
  }
}

TEST_CASE("boundary and star are well defined on the quotient", "[modsym]") {
  for (u64 N : {11ull, 24ull, 33ull, 45ull}) {
    auto sp = build_space(N, QF);
    // star squares to the identity
    auto s2 = mat_mul(QF, sp.star, sp.star);
    REQUIRE(mat_eq(QF, s2, Mat<RationalField>::identity(QF, sp.dim)));
    // star consistency on every generator
    for (int i = 0; i < sp.p1.size(); ++i) {
      auto [c, d] = sp.p1.rep(i);
      int si = sp.p1.index(-(i64)c, (i64)d);
      // star applied to the expression of generator i
      std::vector<Rational> lhs(sp.dim, Rational(0));
      for (auto& [col, v] : sp.gtb[i])
        for (int r = 0; r < sp.dim; ++r)
          lhs[r] += sp.star.at(r, col) * v;
      std::vector<Rational> rhs(sp.dim, Rational(0));
      for (auto& [col, v] : sp.gtb[si]) rhs[col] += v;
      REQUIRE(lhs == rhs);
    }
    // boundary consistency on every generator
    for (int i = 0; i < sp.p1.size(); ++i) {
      auto [c, d] = sp.p1.rep(i);
      auto [a, b, c0, d0] = lift_to_sl2(N, c, d);
      auto cls = [&](const Cusp& cu) {
        for (size_t k = 0; k < sp.cusps.size(); ++k)
          if (cusps_equivalent(sp.cusps[k], cu, N)) return (int)k;
        return -1;
      };
      int ci = cls(Cusp(a, c0)), cj = cls(Cusp(b, d0));
      REQUIRE(ci >= 0);
      REQUIRE(cj >= 0);
      std::vector<Rational> direct(sp.cusps.size(), Rational(0));
      direct[ci] += 1;
      direct[cj] -= 1;
      std::vector<Rational> via(sp.cusps.size(), Rational(0));
      for (auto& [col, v] : sp.gtb[i])
        for (size_t r = 0; r < sp.cusps.size(); ++r)
          via[r] += sp.boundary.at((int)r, col) * v;
      REQUIRE(via == direct);
    }
  }
}

TEST_CASE("level 11 Hecke eigenvalues match the point-count oracle", "[modsym]") {
  auto sp = build_space(11, QF);
  REQUIRE(sp.cuspidal_dim() == 2);
  auto t2 = hecke_matrix(sp, 2);
  auto cp = charpoly_rational(t2.mat);
  // (x + 2)^2
  REQUIRE(cp == PolyV<RationalField>{Rational(4), Rational(4), Rational(1)});
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull, 41ull, 43ull, 47ull}) {
    auto tq = hecke_matrix(sp, q);
    i64 aq = ap_curve11(q);
    // T_q acts as the scalar a_q on the 2-dimensional cuspidal space
    Mat<RationalField> expect(QF, 2, 2);
    expect.at(0, 0) = expect.at(1, 1) = Rational(aq);
    REQUIRE(mat_eq(QF, tq.mat, expect));
  }
  // U_11 eigenvalue a_11 = 1
  auto u11 = hecke_matrix(sp, 11);
  REQUIRE(u11.is_uq);
  Mat<RationalField> one(QF, 2, 2);
  one.at(0, 0) = one.at(1, 1) = Rational(1);
  REQUIRE(mat_eq(QF, u11.mat, one));
}

TEST_CASE("zero-dimensional cuspidal space at level 2", "[modsym]") {
  auto sp = build_space(2, QF);
  REQUIRE(sp.cuspidal_dim() == 0);
  auto t3 = hecke_matrix(sp, 3);
  REQUIRE(t3.mat.nr == 0);
  REQUIRE_THROWS_AS(hecke_matrix(sp, 4), std::invalid_argument);
}

TEST_CASE("Hecke operators commute with each other and with star", "[modsym]") {
  for (u64 N : {33ull, 26ull}) {
    auto sp = build_space(N, QF);
    std::vector<Mat<RationalField>> ops;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) ops.push_back(hecke_matrix(sp, q).mat);
    for (size_t i = 0; i < ops.size(); ++i)
      for (size_t j = i + 1; j < ops.size(); ++j)
        REQUIRE(mat_eq(QF, mat_mul(QF, ops[i], ops[j]), mat_mul(QF, ops[j], ops[i])));
    auto sc = solve_in_column_space(QF, sp.cuspidal, mat_mul(QF, sp.star, sp.cuspidal));
    for (auto& op : ops)
      REQUIRE(mat_eq(QF, mat_mul(QF, op, sc), mat_mul(QF, sc, op)));
  }
}

TEST_CASE("Heilbronn route agrees with the coset definition of T_q", "[modsym]") {
  for (u64 N : {11ull, 14ull, 15ull, 27ull}) {
    auto sp = build_space(N, QF);
    for (u64 q : {2ull, 3ull, 5ull, 7ull}) {
      if (N % q == 0) continue;
      auto heil = hecke_matrix(sp, q).mat;
      auto coset = hecke_coset_definition(sp, q);
      auto cosetc = solve_in_column_space(QF, sp.cuspidal, mat_mul(QF, coset, sp.cuspidal));
      REQUIRE(mat_eq(QF, heil, cosetc));
    }
  }
}

TEST_CASE("U_q on old forms at level 22", "[modsym]") {
  auto sp = build_space(22, QF);
  REQUIRE(sp.cuspidal_dim() == 4);
  auto u2 = hecke_matrix(sp, 2);
  auto cp = charpoly_rational(u2.mat);
  // (x^2 + 2x + 2)^2: both 2-stabilizations of the level-11 form
  PolyV<RationalField> quad{Rational(2), Rational(2), Rational(1)};
  auto sq = poly_mul(QF, quad, quad);
  REQUIRE(poly_eq(QF, cp, sq));
  auto u11 = hecke_matrix(sp, 11);
  auto cp11 = charpoly_rational(u11.mat);
  // (x - 1)^4: U_11 keeps the level-11 eigenvalue a_11 = 1
  PolyV<RationalField> lin{Rational(-1), Rational(1)};
  auto quart = poly_mul(QF, poly_mul(QF, lin, lin), poly_mul(QF, lin, lin));
  REQUIRE(poly_eq(QF, cp11, quart));
}

TEST_CASE("star decomposition splits evenly away from characteristic 2", "[modsym]") {
  auto sp = build_space(11, QF);
  auto dec = star_decompose(sp);
  REQUIRE(dec.split);
  REQUIRE(dec.plus.nc == 1);
  REQUIRE(dec.minus.nc == 1);

  auto sp1 = build_space(1, QF);
  auto dec1 = star_decompose(sp1);
  REQUIRE(dec1.plus.nc == 0);
  REQUIRE(dec1.minus.nc == 0);

  PrimeField f2(2);
  auto sp2 = build_space(11, f2);
  auto dec2 = star_decompose(sp2);
  REQUIRE(!dec2.split);
  REQUIRE(dec2.plus.nc == sp2.cuspidal_dim());
}

TEST_CASE("characteristic polynomial reduction compatibility", "[modsym]") {
  for (u64 N : {11ull, 23ull}) {
    auto spq = build_space(N, QF);
    for (u64 p : {3ull, 5ull, 13ull}) {
      if (2 * N % p == 0) continue;
      PrimeField fp(p);
      auto spp = build_space(N, fp);
      REQUIRE(spp.cuspidal_dim() == spq.cuspidal_dim());
      for (u64 q : primes_below(50)) {
        auto cq = charpoly_rational(hecke_matrix(spq, q).mat);
        auto cp = charpoly_hessenberg(fp, hecke_matrix(spp, q).mat);
        REQUIRE(cq.size() == cp.size());
        for (size_t i = 0; i < cq.size(); ++i) {
          Integer num = boost::multiprecision::numerator(cq[i]);
          Integer den = boost::multiprecision::denominator(cq[i]);
          u64 nm = detail::integer_mod_u64(num, p);
          u64 dm = detail::integer_mod_u64(den, p);
          REQUIRE(dm != 0);
          REQUIRE(fp.mul(cp[i], dm) == nm);
        }
      }
    }
  }
}

TEST_CASE("Hecke eigenvalue real roots obey the Eichler-Shimura bound", "[modsym]") {
  for (u64 N : {11ull, 23ull, 33ull, 37ull}) {
    auto sp = build_space(N, QF);
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
      if (N % q == 0) continue;
      auto cp = charpoly_rational(hecke_matrix(sp, q).mat);
      if (poly_deg(cp) == 0) continue;
      // squarefree part
      auto g = poly_gcd(QF, cp, poly_deriv(QF, cp));
      auto sf = poly_div(QF, cp, g);
      // all roots are real and within [-2 sqrt(q), 2 sqrt(q)]
      u64 bnd = 1;
      while (bnd * bnd < 4 * q) ++bnd;  // bnd = ceil(2 sqrt(q))
      Rational B((i64)bnd + 1);
      REQUIRE(sturm_count(sf, -B, B) == poly_deg(sf));
    }
  }
}

TEST_CASE("single-vector Hecke application matches the matrix", "[modsym]") {
  auto sp = build_space(33, QF);
  int k = sp.cuspidal_dim();
  for (u64 q : {2ull, 5ull, 3ull}) {
    auto m = hecke_matrix(sp, q).mat;
    for (int j = 0; j < k; ++j) {
      std::vector<Rational> e(k, Rational(0));
      e[j] = 1;
      auto img = hecke_apply_cuspidal(sp, q, e);
      for (int i = 0; i < k; ++i) REQUIRE(img[i] == m.at(i, j));
    }
  }
}
