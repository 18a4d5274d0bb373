#pragma once

// Univariate polynomial factorization over finite fields: squarefree
// decomposition, distinct-degree and equal-degree (Cantor-Zassenhaus)
// splitting.  Generic over a finite-field context (prime field or an
// extension); the randomized splitting takes a seedable generator and the
// returned factor list is canonically ordered, so results do not depend on
// the seed.

#include "galwit/arith.hpp"
#include "galwit/poly.hpp"
#include "galwit/rational.hpp"

#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace galwit {

template <class F>
inline PolyV<F> poly_powmod_integer(const F& f, PolyV<F> base, Integer e, const PolyV<F>& m) {
  PolyV<F> r{f.one()};
  base = poly_mod(f, base, m);
  while (e > 0) {
    if ((e & 1) != 0) r = poly_mulmod(f, r, base, m);
    base = poly_mulmod(f, base, base, m);
    e >>= 1;
  }
  return r;
}

// Order on field elements by "integer value" (high coefficient first for
// extensions); used only to canonicalize output orderings.
template <class F>
inline int poly_cmp(const F& f, const PolyV<F>& a, const PolyV<F>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i) {
    int c = f.cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

// x^(q^k) mod m by k-fold q-power, q = field size (may exceed 64 bits).
template <class F>
inline PolyV<F> frobenius_power_mod(const F& f, const PolyV<F>& m, unsigned k) {
  PolyV<F> h = poly_mod(f, poly_x(f), m);
  Integer q = f.size_integer();
  for (unsigned i = 0; i < k; ++i) h = poly_powmod_integer(f, h, q, m);
  return h;
}

template <class F>
inline bool ff_is_irreducible(const F& f, const PolyV<F>& g) {
  int n = poly_deg(g);
  if (n <= 0) return false;
  if (n == 1) return true;
  PolyV<F> m = poly_monic(f, g);
  PolyV<F> h = frobenius_power_mod(f, m, (unsigned)n);
  if (!poly_eq(f, h, poly_mod(f, poly_x(f), m))) return false;
  for (auto [ell, e] : factorize((u64)n)) {
    PolyV<F> hk = frobenius_power_mod(f, m, (unsigned)(n / ell));
    PolyV<F> d = poly_gcd(f, poly_sub(f, hk, poly_x(f)), m);
    if (poly_deg(d) != 0) return false;
  }
  return true;
}

namespace detail {

template <class F>
inline PolyV<F> pth_root_poly(const F& f, const PolyV<F>& g) {
  u64 p = f.characteristic();
  PolyV<F> u;
  for (size_t i = 0; i < g.size(); i += p) u.push_back(f.pth_root(g[i]));
  poly_normalize(f, u);
  return u;
}

} // namespace detail

// Squarefree decomposition of a monic polynomial: returns pairwise-coprime
// squarefree monic parts with their multiplicities.
template <class F>
inline std::vector<std::pair<PolyV<F>, unsigned>> ff_squarefree(const F& f, PolyV<F> g) {
  std::vector<std::pair<PolyV<F>, unsigned>> out;
  g = poly_monic(f, g);
  unsigned outer = 1;
  u64 p = f.characteristic();
  while (poly_deg(g) > 0) {
    PolyV<F> der = poly_deriv(f, g);
    if (poly_is_zero(der)) {
      g = detail::pth_root_poly(f, g);
      outer *= (unsigned)p;
      continue;
    }
    PolyV<F> c = poly_gcd(f, g, der);
    PolyV<F> w = poly_div(f, g, c);
    unsigned i = 1;
    while (poly_deg(w) > 0) {
      PolyV<F> y = poly_gcd(f, w, c);
      PolyV<F> z = poly_div(f, w, y);
      if (poly_deg(z) > 0) out.push_back({z, i * outer});
      c = poly_div(f, c, y);
      w = std::move(y);
      ++i;
    }
    // what is left of c is a p-th power
    g = std::move(c);
  }
  return out;
}

// Distinct-degree splitting of a monic squarefree polynomial: returns pairs
// (product of irreducible factors of degree d, d).
template <class F>
inline std::vector<std::pair<PolyV<F>, unsigned>> ff_distinct_degree(const F& f, PolyV<F> g) {
  std::vector<std::pair<PolyV<F>, unsigned>> out;
  Integer q = f.size_integer();
  PolyV<F> x = poly_x(f);
  PolyV<F> h = poly_mod(f, x, g);
  unsigned d = 0;
  while (poly_deg(g) > 0 && 2 * (int)(d + 1) <= poly_deg(g)) {
    ++d;
    h = poly_powmod_integer(f, h, q, g);
    PolyV<F> u = poly_gcd(f, poly_sub(f, h, poly_mod(f, x, g)), g);
    if (poly_deg(u) > 0) {
      out.push_back({u, d});
      g = poly_div(f, g, u);
      h = poly_mod(f, h, g);
    }
  }
  if (poly_deg(g) > 0) out.push_back({g, (unsigned)poly_deg(g)});
  return out;
}

// Equal-degree splitting: g is a monic squarefree product of irreducibles
// all of degree d.  Randomized (Cantor-Zassenhaus; additive trace in
// characteristic 2).
template <class F>
inline std::vector<PolyV<F>> ff_equal_degree(const F& f, const PolyV<F>& g, unsigned d,
                                             std::mt19937_64& rng) {
  std::vector<PolyV<F>> out;
  std::vector<PolyV<F>> stack{g};
  u64 p = f.characteristic();
  unsigned k = f.ext_degree();
  while (!stack.empty()) {
    PolyV<F> h = std::move(stack.back());
    stack.pop_back();
    int n = poly_deg(h);
    if (n == (int)d) { out.push_back(poly_monic(f, h)); continue; }
    while (true) {
      PolyV<F> a((size_t)n, f.zero());
      for (auto& c : a) c = f.rand_elt(rng);
      poly_normalize(f, a);
      if (poly_deg(a) < 1) continue;
      PolyV<F> b;
      if (p == 2) {
        // additive trace to F_2 over k*d squarings
        PolyV<F> t = poly_mod(f, a, h);
        b = t;
        for (unsigned i = 1; i < k * d; ++i) {
          t = poly_mulmod(f, t, t, h);
          b = poly_add(f, b, t);
        }
      } else {
        Integer e = f.size_integer();
        Integer qe = 1;
        for (unsigned i = 0; i < d; ++i) qe *= e;
        qe = (qe - 1) / 2;
        b = poly_powmod_integer(f, a, qe, h);
        b = poly_sub(f, b, PolyV<F>{f.one()});
      }
      PolyV<F> u = poly_gcd(f, b, h);
      if (poly_deg(u) > 0 && poly_deg(u) < n) {
        stack.push_back(u);
        stack.push_back(poly_div(f, h, u));
        break;
      }
    }
  }
  return out;
}

template <class F>
struct FFFactorization {
  typename F::Elt lead;
  std::vector<std::pair<PolyV<F>, unsigned>> factors;  // monic irreducible, multiplicity
};

// Full factorization over a finite field.  Factors are monic irreducible and
// canonically ordered by (degree, then coefficient sequence), so the output
// is independent of the seed.
template <class F>
inline FFFactorization<F> ff_factor(const F& f, const PolyV<F>& g, u64 seed = 0x67616c77u) {
  if (poly_is_zero(g)) throw std::invalid_argument("ff_factor: zero polynomial");
  FFFactorization<F> res;
  res.lead = g.back();
  if (poly_deg(g) == 0) return res;
  std::mt19937_64 rng(seed);
  for (auto& [part, mult] : ff_squarefree(f, g)) {
    for (auto& [prod, d] : ff_distinct_degree(f, part)) {
      for (auto& irr : ff_equal_degree(f, prod, d, rng))
        res.factors.push_back({irr, mult});
    }
  }
  std::sort(res.factors.begin(), res.factors.end(),
            [&](const auto& a, const auto& b) {
              int c = poly_cmp(f, a.first, b.first);
              if (c != 0) return c < 0;
              return a.second < b.second;
            });
  return res;
}

// Roots of g lying in the (finite) coefficient field, canonically ordered.
template <class F>
inline std::vector<typename F::Elt> ff_roots(const F& f, const PolyV<F>& g, u64 seed = 0x67616c77u) {
  if (poly_is_zero(g)) throw std::invalid_argument("ff_roots: zero polynomial");
  if (poly_deg(g) == 0) return {};
  PolyV<F> m = poly_monic(f, g);
  // keep only roots in F: gcd with x^q - x
  PolyV<F> xq = poly_powmod_integer(f, poly_x(f), f.size_integer(), m);
  PolyV<F> lin = poly_gcd(f, poly_sub(f, xq, poly_x(f)), m);
  if (poly_deg(lin) <= 0) return {};
  std::mt19937_64 rng(seed);
  std::vector<typename F::Elt> roots;
  for (auto& fac : ff_equal_degree(f, lin, 1, rng))
    roots.push_back(f.neg(fac[0]));  // x + c -> root -c
  std::sort(roots.begin(), roots.end(), [&](const auto& a, const auto& b) { return f.cmp(a, b) < 0; });
  return roots;
}

} // namespace galwit
