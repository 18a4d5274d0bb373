#pragma once

// Finite fields F_(p^r) in polynomial basis.  Construction picks the monic
// irreducible modulus of minimal integer value sum(c_i p^i), so fields are
// deterministic across runs; subfield membership is decided by Frobenius
// fixed points rather than Conway-style compatibility.

#include "galwit/fffactor.hpp"
#include "galwit/fields.hpp"
#include "galwit/matrix.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace galwit {

class FiniteField {
 public:
  using V = std::vector<u64>;  // coefficient vector of fixed length r

  u64 p;
  unsigned r;
  std::vector<u64> modulus;  // monic, length r+1
  PrimeField base;

  FiniteField(u64 p_, unsigned r_, std::vector<u64> mod_, bool verify = true)
      : p(p_), r(r_), modulus(std::move(mod_)), base(p_) {
    if (r < 1) throw std::invalid_argument("FiniteField: degree must be >= 1");
    if (modulus.size() != r + 1 || modulus.back() != 1)
      throw std::invalid_argument("FiniteField: modulus must be monic of degree r");
    Integer sz = 1;
    for (unsigned i = 0; i < r; ++i) {
      sz *= p;
      if (sz >= (Integer(1) << 63)) throw std::invalid_argument("FiniteField: field size beyond 2^63");
    }
    size_ = sz.convert_to<u64>();
    if (verify && r > 1) {
      PolyV<PrimeField> m(modulus.begin(), modulus.end());
      if (!ff_is_irreducible(base, m)) throw std::invalid_argument("FiniteField: modulus is reducible");
    }
  }

  u64 size() const { return size_; }

  V zero() const { return V(r, 0); }
  V one() const { V v(r, 0); v[0] = 1 % p; return v; }
  V from_int(i64 x) const { V v(r, 0); v[0] = base.from_int(x); return v; }

  // class of x modulo the modulus
  V gen() const {
    V v(r, 0);
    if (r > 1) v[1] = 1;
    else v[0] = base.neg(modulus[0]);
    return v;
  }

  bool is_zero(const V& a) const {
    for (u64 c : a) if (c) return false;
    return true;
  }
  bool eq(const V& a, const V& b) const { return a == b; }

  V add(const V& a, const V& b) const {
    V c(r);
    for (unsigned i = 0; i < r; ++i) c[i] = base.add(a[i], b[i]);
    return c;
  }
  V sub(const V& a, const V& b) const {
    V c(r);
    for (unsigned i = 0; i < r; ++i) c[i] = base.sub(a[i], b[i]);
    return c;
  }
  V neg(const V& a) const {
    V c(r);
    for (unsigned i = 0; i < r; ++i) c[i] = base.neg(a[i]);
    return c;
  }

  V mul(const V& a, const V& b) const {
    std::vector<u64> buf(2 * r - 1, 0);
    for (unsigned i = 0; i < r; ++i) {
      if (!a[i]) continue;
      for (unsigned j = 0; j < r; ++j) {
        if (!b[j]) continue;
        buf[i + j] = base.add(buf[i + j], base.mul(a[i], b[j]));
      }
    }
    reduce_in_place(buf);
    buf.resize(r, 0);
    return buf;
  }

  V pow(V a, u64 e) const {
    V out = one();
    while (e) {
      if (e & 1) out = mul(out, a);
      a = mul(a, a);
      e >>= 1;
    }
    return out;
  }

  V inv(const V& a) const {
    if (is_zero(a)) throw std::domain_error("FiniteField: division by zero");
    PolyV<PrimeField> pa(a.begin(), a.end());
    poly_normalize(base, pa);
    PolyV<PrimeField> m(modulus.begin(), modulus.end());
    PolyV<PrimeField> u, v;
    PolyV<PrimeField> g = poly_xgcd(base, pa, m, u, v);
    if (poly_deg(g) != 0) throw std::domain_error("FiniteField: non-invertible element");
    V out(r, 0);
    for (size_t i = 0; i < u.size(); ++i) out[i] = u[i];
    return out;
  }

  V frobenius(const V& a) const { return pow(a, p); }

  // Canonical text form: comma-separated coefficients low to high, length r.
  std::string str(const V& a) const {
    std::string s;
    for (unsigned i = 0; i < r; ++i) {
      if (i) s += ",";
      s += std::to_string(a[i]);
    }
    return s;
  }

  V parse(const std::string& s) const {
    V out(r, 0);
    std::stringstream ss(s);
    std::string tok;
    unsigned i = 0;
    while (std::getline(ss, tok, ',')) {
      if (i >= r) throw std::invalid_argument("FiniteField::parse: too many coefficients");
      out[i++] = base.from_int(std::stoll(tok));
    }
    return out;
  }

 private:
  u64 size_ = 0;

  void reduce_in_place(std::vector<u64>& buf) const {
    // divide by the monic modulus, keep the remainder
    for (size_t k = buf.size(); k-- > r;) {
      u64 c = buf[k];
      if (!c) continue;
      buf[k] = 0;
      for (unsigned i = 0; i < r; ++i)
        buf[k - r + i] = base.sub(buf[k - r + i], base.mul(c, modulus[i]));
    }
    buf.resize(r);
  }
};

using FiniteFieldPtr = std::shared_ptr<const FiniteField>;

// Field context adapter so the generic polynomial/matrix/factorization
// templates work over an extension field.
struct ExtField {
  const FiniteField* K = nullptr;

  ExtField() = default;
  explicit ExtField(const FiniteField* k) : K(k) {}
  explicit ExtField(const FiniteFieldPtr& k) : K(k.get()) {}

  using Elt = FiniteField::V;

  Elt zero() const { return K->zero(); }
  Elt one() const { return K->one(); }
  Elt from_int(i64 v) const { return K->from_int(v); }
  bool is_zero(const Elt& a) const { return K->is_zero(a); }
  bool eq(const Elt& a, const Elt& b) const { return a == b; }
  Elt add(const Elt& a, const Elt& b) const { return K->add(a, b); }
  Elt sub(const Elt& a, const Elt& b) const { return K->sub(a, b); }
  Elt neg(const Elt& a) const { return K->neg(a); }
  Elt mul(const Elt& a, const Elt& b) const { return K->mul(a, b); }
  Elt inv(const Elt& a) const { return K->inv(a); }
  Elt div(const Elt& a, const Elt& b) const { return K->mul(a, K->inv(b)); }
  u64 characteristic() const { return K->p; }
  unsigned ext_degree() const { return K->r; }
  Integer size_integer() const { return Integer(K->size()); }
  Elt rand_elt(std::mt19937_64& rng) const {
    Elt v(K->r);
    for (auto& c : v) c = rng() % K->p;
    return v;
  }
  int cmp(const Elt& a, const Elt& b) const {
    for (size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }
  Elt pth_root(const Elt& a) const {
    // a^(p^(r-1)) inverts Frobenius
    Elt out = a;
    for (unsigned i = 0; i + 1 < K->r; ++i) out = K->frobenius(out);
    return out;
  }
  std::string str(const Elt& a) const { return K->str(a); }
};

// F_(p^r) with the lexicographically smallest modulus: the monic irreducible
// x^r + sum(c_i x^i) minimizing sum(c_i p^i).
inline FiniteFieldPtr make_field(u64 p, unsigned r) {
  if (!is_prime(p)) throw std::invalid_argument("make_field: p not prime");
  if (r < 1) throw std::invalid_argument("make_field: degree must be >= 1");
  static std::map<std::pair<u64, unsigned>, FiniteFieldPtr> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, r});
    if (it != cache.end()) return it->second;
  }
  PrimeField base(p);
  std::vector<u64> mod(r + 1, 0);
  mod[r] = 1;
  FiniteFieldPtr out;
  if (r == 1) {
    out = std::make_shared<FiniteField>(p, r, mod, false);  // modulus x
  } else {
    // count through the low coefficients as base-p digits, ascending value
    while (true) {
      PolyV<PrimeField> cand(mod.begin(), mod.end());
      if (ff_is_irreducible(base, cand)) break;
      unsigned i = 0;
      while (i < r && mod[i] == p - 1) { mod[i] = 0; ++i; }
      if (i >= r) throw std::logic_error("make_field: no irreducible found");
      ++mod[i];
    }
    out = std::make_shared<FiniteField>(p, r, mod, false);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.insert({{p, r}, out});
  return out;
}

// An element together with its field; the user-facing value type.
struct FFElement {
  FiniteFieldPtr field;
  FiniteField::V c;

  FFElement() = default;
  FFElement(FiniteFieldPtr f, FiniteField::V v) : field(std::move(f)), c(std::move(v)) {
    if (c.size() != field->r) throw std::invalid_argument("FFElement: wrong coefficient count");
  }

  bool is_zero() const { return field->is_zero(c); }
  bool operator==(const FFElement& o) const { return field == o.field && c == o.c; }

  FFElement operator+(const FFElement& o) const { return {field, field->add(c, o.c)}; }
  FFElement operator-(const FFElement& o) const { return {field, field->sub(c, o.c)}; }
  FFElement operator*(const FFElement& o) const { return {field, field->mul(c, o.c)}; }
  FFElement operator-() const { return {field, field->neg(c)}; }
  FFElement inverse() const { return {field, field->inv(c)}; }
  FFElement pow(u64 e) const { return {field, field->pow(c, e)}; }

  std::string str() const { return field->str(c); }
};

// Least k >= 1 with x^k = 1; divides p^r - 1.
inline u64 element_order(const FFElement& x) {
  if (x.is_zero()) throw std::invalid_argument("element_order: zero element");
  const FiniteField& K = *x.field;
  u64 n = K.size() - 1;
  u64 ord = n;
  for (auto [q, e] : factorize(n)) {
    for (unsigned i = 0; i < e; ++i) {
      if (ord % q == 0 && K.eq(K.pow(x.c, ord / q), K.one())) ord /= q;
      else break;
    }
  }
  return ord;
}

// Minimal polynomial over F_p of an element of F_(p^r), via the first linear
// dependency among its powers.
inline PolyV<PrimeField> minpoly_over_prime(const FiniteField& K, const FiniteField::V& a) {
  PrimeField base = K.base;
  unsigned r = K.r;
  // rows: reduced power vectors; track combinations in terms of powers
  std::vector<std::vector<u64>> rows;      // echelon rows, length r
  std::vector<std::vector<u64>> combos;    // same row as combo of a^0..a^k
  std::vector<int> pivot_of_row;
  FiniteField::V pw = K.one();
  for (unsigned k = 0;; ++k) {
    std::vector<u64> v(pw.begin(), pw.end());
    std::vector<u64> combo(k + 1, 0);
    combo[k] = 1;
    // reduce against existing rows
    for (size_t t = 0; t < rows.size(); ++t) {
      u64 c = v[pivot_of_row[t]];
      if (!c) continue;
      for (unsigned j = 0; j < r; ++j) v[j] = base.sub(v[j], base.mul(c, rows[t][j]));
      for (size_t j = 0; j < combos[t].size() && j < combo.size(); ++j)
        combo[j] = base.sub(combo[j], base.mul(c, combos[t][j]));
    }
    int piv = -1;
    for (unsigned j = 0; j < r; ++j)
      if (v[j]) { piv = (int)j; break; }
    if (piv < 0) {
      // dependency found: combo gives the minimal polynomial
      PolyV<PrimeField> m(combo.begin(), combo.end());
      poly_normalize(base, m);
      return poly_monic(base, m);
    }
    u64 inv = base.inv(v[piv]);
    for (unsigned j = 0; j < r; ++j) v[j] = base.mul(v[j], inv);
    for (auto& cc : combo) cc = base.mul(cc, inv);
    rows.push_back(v);
    combos.push_back(combo);
    pivot_of_row.push_back(piv);
    pw = K.mul(pw, a);
  }
}

// Degree over F_p of the subfield generated by a.
inline unsigned subfield_degree(const FiniteField& K, const FiniteField::V& a) {
  return (unsigned)poly_deg(minpoly_over_prime(K, a));
}

// Canonical embedding image of the generator of `small` inside `big`
// (small.r must divide big.r): the canonically-least root of small's modulus.
inline FiniteField::V embed_generator(const FiniteField& small, const FiniteFieldPtr& big) {
  if (big->p != small.p || big->r % small.r != 0)
    throw std::invalid_argument("embed_generator: not a subfield");
  ExtField E(big);
  PolyV<ExtField> m;
  for (u64 c : small.modulus) m.push_back(big->from_int((i64)c));
  poly_normalize(E, m);
  auto roots = ff_roots(E, m);
  if (roots.empty()) throw std::logic_error("embed_generator: modulus has no root in big field");
  return roots.front();
}

// Canonical embedding F_(p^a) -> F_(p^b) for a | b, with cached generator
// powers so element mapping is cheap.
struct Embedding {
  const FiniteField* small = nullptr;
  FiniteFieldPtr big;
  std::vector<FiniteField::V> gen_pow;  // rho^0 .. rho^(small.r - 1)

  Embedding(const FiniteField& s, FiniteFieldPtr b) : small(&s), big(std::move(b)) {
    FiniteField::V rho = embed_generator(s, big);
    FiniteField::V pw = big->one();
    for (unsigned i = 0; i < s.r; ++i) {
      gen_pow.push_back(pw);
      pw = big->mul(pw, rho);
    }
  }

  FiniteField::V operator()(const FiniteField::V& a) const {
    FiniteField::V out = big->zero();
    for (unsigned i = 0; i < small->r; ++i) {
      if (!a[i]) continue;
      for (unsigned j = 0; j < big->r; ++j)
        out[j] = big->base.add(out[j], big->base.mul(a[i], gen_pow[i][j]));
    }
    return out;
  }
};

} // namespace galwit
