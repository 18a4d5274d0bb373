#pragma once

// Exact characteristic polynomials of rational matrices by multimodular
// computation: clear denominators, run Hessenberg charpoly mod several
// 61-bit primes, CRT-lift with a rigorous Hadamard-style coefficient bound.

#include "galwit/fields.hpp"
#include "galwit/matrix.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace galwit {

namespace detail {

inline const std::vector<u64>& charpoly_primes(size_t need) {
  static std::vector<u64> primes;
  static u64 cursor = (1ull << 61);
  while (primes.size() < need) {
    cursor = next_prime(cursor);
    primes.push_back(cursor);
  }
  return primes;
}

inline u64 integer_mod_u64(const Integer& v, u64 p) {
  Integer r = v % p;
  if (r < 0) r += p;
  return r.convert_to<u64>();
}

} // namespace detail

// det(xI - A) for a rational square matrix, exact.
inline PolyV<RationalField> charpoly_rational(const Mat<RationalField>& A) {
  RationalField QF;
  int n = A.nr;
  if (n != A.nc) throw std::invalid_argument("charpoly_rational: square matrix required");
  if (n == 0) return {QF.one()};

  Integer D = 1;
  for (const auto& e : A.a) D = boost::multiprecision::lcm(D, Integer(boost::multiprecision::denominator(e)));
  std::vector<Integer> B((size_t)n * n);
  for (size_t i = 0; i < B.size(); ++i) {
    Rational scaled = A.a[i] * Rational(D);
    B[i] = Integer(boost::multiprecision::numerator(scaled));
  }

  // Coefficient bound: |c_k| <= 2^n * prod_i sqrt(1 + sum_j B_ij^2).
  Integer hb2 = 1;
  for (int i = 0; i < n; ++i) {
    Integer s = 1;
    for (int j = 0; j < n; ++j) s += B[(size_t)i * n + j] * B[(size_t)i * n + j];
    hb2 *= s;
  }
  Integer need2 = hb2;                       // bound^2 target: 4^(n+1) * hb2
  for (int i = 0; i <= n; ++i) need2 *= 4;

  std::vector<std::vector<u64>> residues;    // per prime: charpoly coeffs
  std::vector<u64> used;
  Integer prod = 1;
  size_t idx = 0;
  while (prod * prod <= need2) {
    const auto& primes = detail::charpoly_primes(idx + 1);
    u64 p = primes[idx++];
    PrimeField fp(p);
    Mat<PrimeField> Bp(fp, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        Bp.at(i, j) = detail::integer_mod_u64(B[(size_t)i * n + j], p);
    residues.push_back(charpoly_hessenberg(fp, Bp));
    used.push_back(p);
    prod *= p;
  }

  // CRT + symmetric lift per coefficient of charpoly(B), then undo scaling:
  // charpoly_A(x) = sum_k c_k(B) D^(k-n) x^k.
  PolyV<RationalField> out(n + 1, QF.zero());
  for (int k = 0; k <= n; ++k) {
    Integer x = 0, m = 1;
    for (size_t t = 0; t < used.size(); ++t) {
      u64 p = used[t];
      u64 r = residues[t][k];
      u64 xm = detail::integer_mod_u64(x, p);
      u64 diff = (r + p - xm) % p;
      u64 minv = pow_mod(detail::integer_mod_u64(m, p), p - 2, p);
      u64 tt = mul_mod(diff, minv, p);
      x += m * Integer(tt);
      m *= p;
    }
    if (x * 2 > m) x -= m;
    Integer dpow = 1;
    for (int i = 0; i < n - k; ++i) dpow *= D;
    out[k] = Rational(x) / Rational(dpow);
  }
  return out;
}

} // namespace galwit
