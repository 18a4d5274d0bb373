#pragma once

// Dense univariate polynomial arithmetic over a field context F.
// A polynomial is a coefficient vector, low degree first, with no trailing
// zeros; the empty vector is the zero polynomial.

#include "galwit/arith.hpp"

#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace galwit {

template <class F>
using PolyV = std::vector<typename F::Elt>;

template <class F>
inline void poly_normalize(const F& f, PolyV<F>& a) {
  while (!a.empty() && f.is_zero(a.back())) a.pop_back();
}

template <class Elt>
inline int poly_deg(const std::vector<Elt>& a) { return (int)a.size() - 1; }

template <class Elt>
inline bool poly_is_zero(const std::vector<Elt>& a) { return a.empty(); }

template <class F>
inline PolyV<F> poly_const(const F& f, typename F::Elt c) {
  PolyV<F> r{c};
  poly_normalize(f, r);
  return r;
}

template <class F>
inline PolyV<F> poly_x(const F& f) { return PolyV<F>{f.zero(), f.one()}; }

template <class F>
inline bool poly_eq(const F& f, const PolyV<F>& a, const PolyV<F>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!f.eq(a[i], b[i])) return false;
  return true;
}

template <class F>
inline PolyV<F> poly_add(const F& f, const PolyV<F>& a, const PolyV<F>& b) {
  PolyV<F> r(std::max(a.size(), b.size()), f.zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
  poly_normalize(f, r);
  return r;
}

template <class F>
inline PolyV<F> poly_neg(const F& f, const PolyV<F>& a) {
  PolyV<F> r = a;
  for (auto& c : r) c = f.neg(c);
  return r;
}

template <class F>
inline PolyV<F> poly_sub(const F& f, const PolyV<F>& a, const PolyV<F>& b) {
  return poly_add(f, a, poly_neg(f, b));
}

template <class F>
inline PolyV<F> poly_mul(const F& f, const PolyV<F>& a, const PolyV<F>& b) {
  if (a.empty() || b.empty()) return {};
  PolyV<F> r(a.size() + b.size() - 1, f.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (f.is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  poly_normalize(f, r);
  return r;
}

template <class F>
inline PolyV<F> poly_scale(const F& f, const PolyV<F>& a, const typename F::Elt& c) {
  PolyV<F> r = a;
  for (auto& x : r) x = f.mul(x, c);
  poly_normalize(f, r);
  return r;
}

template <class F>
inline PolyV<F> poly_monic(const F& f, const PolyV<F>& a) {
  if (a.empty()) return a;
  return poly_scale(f, a, f.inv(a.back()));
}

// Division with remainder; b must be nonzero.
template <class F>
inline void poly_divmod(const F& f, const PolyV<F>& a, const PolyV<F>& b,
                        PolyV<F>& q, PolyV<F>& r) {
  if (b.empty()) throw std::domain_error("poly_divmod: division by zero polynomial");
  r = a;
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, f.zero());
  auto lc_inv = f.inv(b.back());
  while (r.size() >= b.size()) {
    size_t shift = r.size() - b.size();
    auto c = f.mul(r.back(), lc_inv);
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i)
      r[shift + i] = f.sub(r[shift + i], f.mul(c, b[i]));
    poly_normalize(f, r);  // the top term cancels, so r shrinks every pass
  }
  poly_normalize(f, q);
}

template <class F>
inline PolyV<F> poly_mod(const F& f, const PolyV<F>& a, const PolyV<F>& b) {
  PolyV<F> q, r;
  poly_divmod(f, a, b, q, r);
  return r;
}

template <class F>
inline PolyV<F> poly_div(const F& f, const PolyV<F>& a, const PolyV<F>& b) {
  PolyV<F> q, r;
  poly_divmod(f, a, b, q, r);
  return q;
}

// Monic gcd.
template <class F>
inline PolyV<F> poly_gcd(const F& f, PolyV<F> a, PolyV<F> b) {
  while (!b.empty()) {
    PolyV<F> r = poly_mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(f, a);
}

// Extended gcd: returns g monic with u*a + v*b = g.
template <class F>
inline PolyV<F> poly_xgcd(const F& f, PolyV<F> a, PolyV<F> b,
                          PolyV<F>& u, PolyV<F>& v) {
  PolyV<F> u0{f.one()}, v0{}, u1{}, v1{f.one()};
  while (!b.empty()) {
    PolyV<F> q, r;
    poly_divmod(f, a, b, q, r);
    PolyV<F> u2 = poly_sub(f, u0, poly_mul(f, q, u1));
    PolyV<F> v2 = poly_sub(f, v0, poly_mul(f, q, v1));
    a = std::move(b); b = std::move(r);
    u0 = std::move(u1); u1 = std::move(u2);
    v0 = std::move(v1); v1 = std::move(v2);
  }
  if (a.empty()) { u = {}; v = {}; return a; }
  auto c = f.inv(a.back());
  u = poly_scale(f, u0, c);
  v = poly_scale(f, v0, c);
  return poly_scale(f, a, c);
}

template <class F>
inline typename F::Elt poly_eval(const F& f, const PolyV<F>& a, const typename F::Elt& x) {
  auto r = f.zero();
  for (size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
  return r;
}

template <class F>
inline PolyV<F> poly_deriv(const F& f, const PolyV<F>& a) {
  PolyV<F> r;
  for (size_t i = 1; i < a.size(); ++i) {
    typename F::Elt k = f.from_int((i64)i);
    r.push_back(f.mul(a[i], k));
  }
  poly_normalize(f, r);
  return r;
}

template <class F>
inline PolyV<F> poly_mulmod(const F& f, const PolyV<F>& a, const PolyV<F>& b, const PolyV<F>& m) {
  return poly_mod(f, poly_mul(f, a, b), m);
}

template <class F>
inline PolyV<F> poly_powmod(const F& f, PolyV<F> base, u64 e, const PolyV<F>& m) {
  PolyV<F> r{f.one()};
  base = poly_mod(f, base, m);
  while (e) {
    if (e & 1) r = poly_mulmod(f, r, base, m);
    base = poly_mulmod(f, base, base, m);
    e >>= 1;
  }
  return r;
}

// Textual form "c0,c1,...,ck" (low to high), matching the canonical element
// string used in JSON artifacts.
template <class F>
inline std::string poly_str(const F& f, const PolyV<F>& a) {
  if (a.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += f.str(a[i]);
  }
  return s;
}

} // namespace galwit
