#pragma once

// Q[x]/(f) for a monic irreducible rational f, as a field context usable by
// the generic polynomial/matrix templates.  Elements are normalized
// coefficient vectors of degree < deg f.

#include "galwit/fields.hpp"
#include "galwit/poly.hpp"

#include <memory>

namespace galwit {

struct NumberField {
  std::shared_ptr<const PolyV<RationalField>> modulus;  // monic, degree >= 1
  RationalField base;

  NumberField() = default;
  explicit NumberField(PolyV<RationalField> f)
      : modulus(std::make_shared<const PolyV<RationalField>>(std::move(f))) {
    if (poly_deg(*modulus) < 1 || (*modulus).back() != Rational(1))
      throw std::invalid_argument("NumberField: modulus must be monic of positive degree");
  }

  int degree() const { return poly_deg(*modulus); }

  using Elt = PolyV<RationalField>;  // normalized (no trailing zeros)

  Elt zero() const { return {}; }
  Elt one() const { return {Rational(1)}; }
  Elt from_int(i64 v) const {
    Elt e{Rational(v)};
    poly_normalize(base, e);
    return e;
  }
  Elt gen() const {
    // class of x
    Elt e{Rational(0), Rational(1)};
    return poly_mod(base, e, *modulus);
  }
  bool is_zero(const Elt& a) const { return a.empty(); }
  bool eq(const Elt& a, const Elt& b) const { return a == b; }
  Elt add(const Elt& a, const Elt& b) const { return poly_add(base, a, b); }
  Elt sub(const Elt& a, const Elt& b) const { return poly_sub(base, a, b); }
  Elt neg(const Elt& a) const { return poly_neg(base, a); }
  Elt mul(const Elt& a, const Elt& b) const { return poly_mod(base, poly_mul(base, a, b), *modulus); }
  Elt inv(const Elt& a) const {
    if (a.empty()) throw std::domain_error("NumberField: division by zero");
    PolyV<RationalField> u, v;
    auto g = poly_xgcd(base, a, *modulus, u, v);
    if (poly_deg(g) != 0) throw std::domain_error("NumberField: modulus not irreducible");
    return poly_mod(base, u, *modulus);
  }
  Elt div(const Elt& a, const Elt& b) const { return mul(a, inv(b)); }
  u64 characteristic() const { return 0; }
  std::string str(const Elt& a) const {
    // fixed-length comma form, low to high
    std::string s;
    for (int i = 0; i < degree(); ++i) {
      if (i) s += ",";
      s += rat_str(i < (int)a.size() ? a[i] : Rational(0));
    }
    return s;
  }
};

// Minimal polynomial over Q of an element of Q[x]/(f), by the first linear
// dependency among its powers.
inline PolyV<RationalField> minpoly_over_q(const NumberField& K, const NumberField::Elt& a) {
  RationalField QF;
  int r = K.degree();
  std::vector<std::vector<Rational>> rows, combos;
  std::vector<int> pivot_of_row;
  NumberField::Elt pw = K.one();
  for (int k = 0;; ++k) {
    std::vector<Rational> v(r, Rational(0));
    for (size_t i = 0; i < pw.size(); ++i) v[i] = pw[i];
    std::vector<Rational> combo(k + 1, Rational(0));
    combo[k] = 1;
    for (size_t t = 0; t < rows.size(); ++t) {
      Rational c = v[pivot_of_row[t]];
      if (c == 0) continue;
      for (int j = 0; j < r; ++j) v[j] -= c * rows[t][j];
      for (size_t j = 0; j < combos[t].size(); ++j) combo[j] -= c * combos[t][j];
    }
    int piv = -1;
    for (int j = 0; j < r; ++j)
      if (v[j] != 0) { piv = j; break; }
    if (piv < 0) {
      PolyV<RationalField> m(combo.begin(), combo.end());
      poly_normalize(QF, m);
      return poly_monic(QF, m);
    }
    Rational inv = Rational(1) / v[piv];
    for (auto& x : v) x *= inv;
    for (auto& x : combo) x *= inv;
    rows.push_back(std::move(v));
    combos.push_back(std::move(combo));
    pivot_of_row.push_back(piv);
    pw = K.mul(pw, a);
  }
}

} // namespace galwit
