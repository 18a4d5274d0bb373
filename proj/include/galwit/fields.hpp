#pragma once

// Coefficient-field contexts used by the generic polynomial and matrix
// templates.  A field context provides element construction and the four
// operations; contexts are tiny values that can be copied freely.

#include "galwit/arith.hpp"
#include "galwit/rational.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace galwit {

struct RationalField {
  using Elt = Rational;

  Elt zero() const { return Rational(0); }
  Elt one() const { return Rational(1); }
  Elt from_int(i64 v) const { return Rational(v); }
  bool is_zero(const Elt& a) const { return a == 0; }
  bool eq(const Elt& a, const Elt& b) const { return a == b; }
  Elt add(const Elt& a, const Elt& b) const { return a + b; }
  Elt sub(const Elt& a, const Elt& b) const { return a - b; }
  Elt neg(const Elt& a) const { return -a; }
  Elt mul(const Elt& a, const Elt& b) const { return a * b; }
  Elt inv(const Elt& a) const {
    if (a == 0) throw std::domain_error("RationalField: division by zero");
    return Rational(1) / a;
  }
  Elt div(const Elt& a, const Elt& b) const { return mul(a, inv(b)); }
  u64 characteristic() const { return 0; }
  std::string str(const Elt& a) const { return rat_str(a); }
};

// F_p for a prime p < 2^62; elements are residues in [0, p).
struct PrimeField {
  u64 p = 2;

  PrimeField() = default;
  explicit PrimeField(u64 p_) : p(p_) {
    if (!is_prime(p)) throw std::invalid_argument("PrimeField: p not prime");
    if (p >= (1ull << 62)) throw std::invalid_argument("PrimeField: p too large");
  }

  using Elt = u64;

  Elt zero() const { return 0; }
  Elt one() const { return 1 % p; }
  Elt from_int(i64 v) const {
    i64 r = v % (i64)p;
    if (r < 0) r += (i64)p;
    return (u64)r;
  }
  Elt from_integer(const Integer& v) const {
    Integer r = v % (i64)p;
    if (r < 0) r += (i64)p;
    return (u64)r;
  }
  bool is_zero(Elt a) const { return a == 0; }
  bool eq(Elt a, Elt b) const { return a == b; }
  Elt add(Elt a, Elt b) const { u64 s = a + b; return s >= p ? s - p : s; }
  Elt sub(Elt a, Elt b) const { return a >= b ? a - b : a + p - b; }
  Elt neg(Elt a) const { return a == 0 ? 0 : p - a; }
  Elt mul(Elt a, Elt b) const { return mul_mod(a, b, p); }
  Elt inv(Elt a) const {
    if (a == 0) throw std::domain_error("PrimeField: division by zero");
    return pow_mod(a, p - 2, p);
  }
  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
  Elt pow(Elt a, u64 e) const { return pow_mod(a, e, p); }
  u64 characteristic() const { return p; }
  unsigned ext_degree() const { return 1; }
  Integer size_integer() const { return Integer(p); }
  Elt rand_elt(std::mt19937_64& rng) const { return rng() % p; }
  int cmp(Elt a, Elt b) const { return a < b ? -1 : (a > b ? 1 : 0); }
  Elt pth_root(Elt a) const { return a; }  // Frobenius fixes F_p
  std::string str(Elt a) const { return std::to_string(a); }
};

} // namespace galwit
