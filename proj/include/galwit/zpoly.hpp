#pragma once

// Factorization of rational polynomials: Yun squarefree decomposition over
// Z, modular gcds verified by exact trial division, and Zassenhaus
// (factor mod p, quadratic Hensel lift, subset recombination).  Inputs are
// monicized first, so all lifting stays in the monic case.

#include "galwit/fffactor.hpp"
#include "galwit/fields.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace galwit {

using ZPoly = std::vector<Integer>;  // low to high, no trailing zeros

inline void zp_normalize(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int zp_deg(const ZPoly& a) { return (int)a.size() - 1; }

inline ZPoly zp_sub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), Integer(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  zp_normalize(r);
  return r;
}

inline ZPoly zp_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  zp_normalize(r);
  return r;
}

inline ZPoly zp_derivative(const ZPoly& a) {
  ZPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * (i64)i);
  zp_normalize(r);
  return r;
}

// Division by a monic divisor over Z; returns true and fills q, r.
inline void zp_divmod_monic(const ZPoly& a, const ZPoly& b, ZPoly& q, ZPoly& r) {
  if (b.empty() || b.back() != 1) throw std::invalid_argument("zp_divmod_monic: divisor not monic");
  r = a;
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Integer(0));
  while (r.size() >= b.size()) {
    size_t shift = r.size() - b.size();
    Integer c = r.back();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    zp_normalize(r);
  }
  zp_normalize(q);
}

inline bool zp_divides_monic(const ZPoly& d, const ZPoly& a) {
  ZPoly q, r;
  zp_divmod_monic(a, d, q, r);
  return r.empty();
}

inline ZPoly zp_div_exact_monic(const ZPoly& a, const ZPoly& d) {
  ZPoly q, r;
  zp_divmod_monic(a, d, q, r);
  if (!r.empty()) throw std::logic_error("zp_div_exact_monic: division not exact");
  return q;
}

// Factor-coefficient bound (Mignotte-style): any monic factor of the monic
// polynomial a has coefficients bounded by 2^deg * ||a||_2.
inline Integer zp_factor_bound(const ZPoly& a) {
  Integer s = 0;
  for (const auto& c : a) s += c * c;
  Integer root = boost::multiprecision::sqrt(s) + 1;
  Integer b = root;
  for (int i = 0; i < zp_deg(a); ++i) b *= 2;
  return b;
}

namespace zmod {

// Arithmetic on polynomials with coefficients in [0, m).

inline Integer norm(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

inline void normalize(ZPoly& a, const Integer& m) {
  for (auto& c : a) c = norm(c, m);
  zp_normalize(a);
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r = zp_mul(a, b);
  normalize(r, m);
  return r;
}

inline ZPoly add(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r(std::max(a.size(), b.size()), Integer(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  normalize(r, m);
  return r;
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r = zp_sub(a, b);
  normalize(r, m);
  return r;
}

inline void divmod_monic(const ZPoly& a, const ZPoly& b, const Integer& m, ZPoly& q, ZPoly& r) {
  if (b.empty() || b.back() != 1) throw std::invalid_argument("zmod::divmod_monic: divisor not monic");
  r = a;
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Integer(0));
  while (r.size() >= b.size()) {
    size_t shift = r.size() - b.size();
    Integer c = r.back();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) r[shift + i] = norm(r[shift + i] - c * b[i], m);
    zp_normalize(r);
  }
  normalize(q, m);
}

// symmetric representative in (-m/2, m/2]
inline ZPoly symmetric(const ZPoly& a, const Integer& m) {
  ZPoly r = a;
  for (auto& c : r) {
    c = norm(c, m);
    if (c * 2 > m) c -= m;
  }
  zp_normalize(r);
  return r;
}

} // namespace zmod

namespace detail {

// One quadratic Hensel step: from f = g h (mod m), s g + t h = 1 (mod m)
// with g, h monic, to the same data mod m^2.
inline void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const Integer& m) {
  Integer m2 = m * m;
  ZPoly e = zmod::sub(f, zmod::mul(g, h, m2), m2);
  ZPoly q, r;
  zmod::divmod_monic(zmod::mul(s, e, m2), h, m2, q, r);
  ZPoly gnew = zmod::add(g, zmod::add(zmod::mul(t, e, m2), zmod::mul(q, g, m2), m2), m2);
  ZPoly hnew = zmod::add(h, r, m2);
  // gnew, hnew are monic of the original degrees once reduced
  if (zp_deg(gnew) != zp_deg(g) || zp_deg(hnew) != zp_deg(h))
    throw std::logic_error("hensel_step: degree drift");
  gnew.back() = 1;
  hnew.back() = 1;
  ZPoly b = zmod::sub(zmod::add(zmod::mul(s, gnew, m2), zmod::mul(t, hnew, m2), m2),
                      ZPoly{Integer(1)}, m2);
  ZPoly q2, r2;
  zmod::divmod_monic(zmod::mul(s, b, m2), hnew, m2, q2, r2);
  ZPoly snew = zmod::sub(s, r2, m2);
  ZPoly tnew = zmod::sub(t, zmod::add(zmod::mul(t, b, m2), zmod::mul(q2, gnew, m2), m2), m2);
  g = std::move(gnew);
  h = std::move(hnew);
  s = std::move(snew);
  t = std::move(tnew);
}

// Lift the modular factorization f = prod(parts) (mod p) to mod p^2^j >= target.
inline void hensel_tree(const ZPoly& f, std::vector<ZPoly>& parts, u64 p, const Integer& target,
                        std::vector<ZPoly>& out) {
  if (parts.size() == 1) {
    out.push_back(f);
    return;
  }
  size_t mid = parts.size() / 2;
  PrimeField fp(p);
  auto to_fp = [&](const ZPoly& a) {
    PolyV<PrimeField> r;
    for (const auto& c : a) r.push_back(fp.from_integer(c));
    poly_normalize(fp, r);
    return r;
  };
  auto to_z = [&](const PolyV<PrimeField>& a) {
    ZPoly r;
    for (u64 c : a) r.push_back(Integer(c));
    zp_normalize(r);
    return r;
  };
  PolyV<PrimeField> A{fp.one()}, B{fp.one()};
  for (size_t i = 0; i < mid; ++i) A = poly_mul(fp, A, to_fp(parts[i]));
  for (size_t i = mid; i < parts.size(); ++i) B = poly_mul(fp, B, to_fp(parts[i]));
  PolyV<PrimeField> u, v;
  auto gg = poly_xgcd(fp, A, B, u, v);
  if (poly_deg(gg) != 0) throw std::logic_error("hensel_tree: factors not coprime mod p");

  ZPoly g = to_z(A), h = to_z(B), s = to_z(u), t = to_z(v);
  Integer m(p);
  while (m < target) {
    hensel_step(f, g, h, s, t, m);
    m *= m;
  }
  zmod::normalize(g, m);
  zmod::normalize(h, m);
  std::vector<ZPoly> left(parts.begin(), parts.begin() + mid);
  std::vector<ZPoly> right(parts.begin() + mid, parts.end());
  hensel_tree(g, left, p, target, out);
  hensel_tree(h, right, p, target, out);
}

} // namespace detail

// Irreducible factors of a monic squarefree integer polynomial.
inline std::vector<ZPoly> zp_factor_monic_squarefree(ZPoly H) {
  std::vector<ZPoly> out;
  zp_normalize(H);
  if (zp_deg(H) <= 0) return out;
  if (zp_deg(H) == 1) { out.push_back(H); return out; }

  // pick a prime keeping H squarefree
  u64 p = (1ull << 24);
  PrimeField fp(2);
  PolyV<PrimeField> Hp;
  while (true) {
    p = next_prime(p);
    fp = PrimeField(p);
    Hp.clear();
    for (const auto& c : H) Hp.push_back(fp.from_integer(c));
    poly_normalize(fp, Hp);
    if (poly_deg(Hp) != zp_deg(H)) continue;  // cannot happen: monic
    auto d = poly_gcd(fp, Hp, poly_deriv(fp, Hp));
    if (poly_deg(d) == 0) break;
  }

  auto fac = ff_factor(fp, Hp);
  if (fac.factors.size() == 1) { out.push_back(H); return out; }

  Integer bound = zp_factor_bound(H) * 2 + 1;
  std::vector<ZPoly> modular;
  {
    std::vector<ZPoly> parts;
    for (auto& [g, m] : fac.factors) {
      ZPoly z;
      for (u64 c : g) z.push_back(Integer(c));
      parts.push_back(z);
    }
    detail::hensel_tree(H, parts, p, bound, modular);
  }
  Integer pk(p);
  while (pk < bound) pk *= pk;

  // subset recombination with exact trial division
  std::vector<int> active(modular.size());
  for (size_t i = 0; i < active.size(); ++i) active[i] = (int)i;
  for (size_t take = 1; !active.empty() && take <= active.size(); ) {
    if (2 * take > active.size()) {
      // remainder is irreducible
      break;
    }
    std::vector<size_t> idx(take);
    for (size_t i = 0; i < take; ++i) idx[i] = i;
    bool found = false;
    while (true) {
      ZPoly cand{Integer(1)};
      for (size_t i : idx) cand = zmod::mul(cand, modular[active[i]], pk);
      cand = zmod::symmetric(cand, pk);
      if (!cand.empty() && cand.back() == 1 && zp_divides_monic(cand, H)) {
        out.push_back(cand);
        H = zp_div_exact_monic(H, cand);
        std::vector<int> rest;
        for (size_t i = 0, k = 0; i < active.size(); ++i) {
          if (k < idx.size() && idx[k] == i) { ++k; continue; }
          rest.push_back(active[i]);
        }
        active = std::move(rest);
        found = true;
        break;
      }
      // next combination
      int pos = (int)take - 1;
      while (pos >= 0 && idx[pos] == active.size() - take + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (size_t i = pos + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found) ++take;
  }
  if (zp_deg(H) > 0) out.push_back(H);
  return out;
}

// Monic integer gcd of two monic integer polynomials, by multimodular
// computation verified with exact division (hence rigorous).
inline ZPoly zp_gcd_monic(const ZPoly& A, const ZPoly& B) {
  if (A.empty()) return B;
  if (B.empty()) return A;
  Integer bound = (zp_factor_bound(A) + zp_factor_bound(B)) * 2 + 1;
  u64 pstart = (1ull << 61);
  while (true) {
    // gather modular gcds of consistent minimal degree until CRT exceeds bound
    u64 p = pstart;
    Integer prod = 1;
    std::vector<Integer> lifted;  // CRT accumulator for coefficients
    int gdeg = -2;
    while (prod < bound) {
      p = next_prime(p);
      PrimeField fp(p);
      PolyV<PrimeField> Ap, Bp;
      for (const auto& c : A) Ap.push_back(fp.from_integer(c));
      for (const auto& c : B) Bp.push_back(fp.from_integer(c));
      poly_normalize(fp, Ap);
      poly_normalize(fp, Bp);
      auto gp = poly_gcd(fp, Ap, Bp);
      if (gdeg == -2 || poly_deg(gp) < gdeg) {
        gdeg = poly_deg(gp);
        lifted.assign(gdeg + 1, Integer(0));
        prod = 1;
      } else if (poly_deg(gp) > gdeg) {
        continue;  // unlucky prime
      }
      for (int i = 0; i <= gdeg; ++i) {
        // CRT combine lifted[i] (mod prod) with gp[i] (mod p)
        u64 xm = zmod::norm(lifted[i], Integer(p)).convert_to<u64>();
        u64 diff = (gp[i] + p - xm) % p;
        u64 minv = pow_mod(zmod::norm(prod, Integer(p)).convert_to<u64>(), p - 2, p);
        lifted[i] += prod * Integer(mul_mod(diff, minv, p));
      }
      prod *= p;
    }
    ZPoly G = zmod::symmetric(lifted, prod);
    if (!G.empty() && G.back() == 1 && zp_divides_monic(G, A) && zp_divides_monic(G, B)) return G;
    pstart = p;  // all primes unlucky (rare); retry with fresh primes
  }
}

// Yun squarefree decomposition of a monic integer polynomial:
// F = prod parts[i]^mult[i] with parts squarefree and pairwise coprime.
inline std::vector<std::pair<ZPoly, unsigned>> zp_squarefree_monic(const ZPoly& F) {
  std::vector<std::pair<ZPoly, unsigned>> out;
  if (zp_deg(F) <= 0) return out;
  ZPoly fd = zp_derivative(F);
  ZPoly a0 = zp_gcd_monic(F, fd);
  if (zp_deg(a0) == 0) { out.push_back({F, 1}); return out; }
  ZPoly b = zp_div_exact_monic(F, a0);
  ZPoly c = zp_div_exact_monic(fd, a0);
  ZPoly d = zp_sub(c, zp_derivative(b));
  unsigned i = 1;
  while (zp_deg(b) > 0) {
    ZPoly a = zp_gcd_monic(b, d);
    if (zp_deg(a) > 0) out.push_back({a, i});
    b = zp_div_exact_monic(b, a);
    c = zp_div_exact_monic(d, a);
    d = zp_sub(c, zp_derivative(b));
    ++i;
  }
  return out;
}

struct QFactorization {
  Rational unit;
  std::vector<std::pair<PolyV<RationalField>, unsigned>> factors;  // monic, multiplicity
};

// Full factorization over Q.  Factors are monic and canonically ordered by
// (degree, then coefficient sequence).
inline QFactorization factor_rational(const PolyV<RationalField>& f) {
  RationalField QF;
  if (poly_is_zero(f)) throw std::invalid_argument("factor_rational: zero polynomial");
  QFactorization res;
  res.unit = f.back();
  if (poly_deg(f) == 0) return res;
  PolyV<RationalField> fm = poly_monic(QF, f);
  int n = poly_deg(fm);

  // monicize into Z[x]: F(y) = D^n f(y/D)
  Integer D = 1;
  for (const auto& c : fm) D = boost::multiprecision::lcm(D, Integer(boost::multiprecision::denominator(c)));
  ZPoly F(n + 1);
  Integer dpow = 1;
  for (int k = n; k >= 0; --k) {
    Rational scaled = fm[k] * Rational(dpow);
    F[k] = Integer(boost::multiprecision::numerator(scaled));
    dpow *= D;
  }

  for (auto& [part, mult] : zp_squarefree_monic(F)) {
    for (auto& irr : zp_factor_monic_squarefree(part)) {
      // substitute back: factor of f is P(D x) / D^deg
      int m = zp_deg(irr);
      PolyV<RationalField> g(m + 1, QF.zero());
      Integer dk = 1;  // D^k
      Integer dm = 1;  // D^m
      for (int k = 0; k < m; ++k) dm *= D;
      for (int k = 0; k <= m; ++k) {
        g[k] = Rational(irr[k]) * Rational(dk) / Rational(dm);
        dk *= D;
      }
      res.factors.push_back({g, mult});
    }
  }
  std::sort(res.factors.begin(), res.factors.end(), [&](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    for (size_t i = 0; i < a.first.size(); ++i) {
      if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
    }
    return a.second < b.second;
  });
  return res;
}

} // namespace galwit
