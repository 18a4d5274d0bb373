#pragma once

// Exact integer and modular arithmetic on 64-bit operands: deterministic
// primality, Legendre/Jacobi/Kronecker symbols, multiplicative orders, CRT,
// and splitting behaviour in Q(i), Q(sqrt(l)) and their compositum.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace galwit {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 pow_mod(u64 a, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin, valid for all n < 2^64.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline u64 next_prime(u64 n) {
  u64 k = n + 1;
  if (k <= 2) return 2;
  if (k % 2 == 0) ++k;
  while (!is_prime(k)) k += 2;
  return k;
}

// All primes < X by a plain sieve of Eratosthenes.
inline std::vector<u64> primes_below(u64 X) {
  std::vector<u64> out;
  if (X <= 2) return out;
  std::vector<bool> composite(X, false);
  for (u64 i = 2; i < X; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j < X; j += i) composite[j] = true;
  }
  return out;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  u64 x = 2, y = 2, c = 1, d = 1;
  auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
  while (true) {
    x = 2; y = 2; d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      u64 diff = x > y ? x - y : y - x;
      d = std::gcd(diff, n);
    }
    if (d != n) return d;
    ++c;
  }
}

inline void factor_rec(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) { primes.push_back(n); return; }
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (n % p == 0) {
      primes.push_back(p);
      factor_rec(n / p, primes);
      return;
    }
  }
  u64 d = pollard_rho(n);
  factor_rec(d, primes);
  factor_rec(n / d, primes);
}

} // namespace detail

// Full factorization of n, sorted ascending, as (prime, exponent) pairs.
inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: zero");
  std::vector<u64> primes;
  detail::factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p) ++out.back().second;
    else out.push_back({p, 1u});
  }
  return out;
}

inline std::vector<u64> divisors(u64 n) {
  auto fac = factorize(n);
  std::vector<u64> out{1};
  for (auto [p, e] : fac) {
    size_t sz = out.size();
    u64 pk = 1;
    for (unsigned i = 0; i < e; ++i) {
      pk *= p;
      for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

// Legendre symbol (a|p) for an odd prime p: +1 / -1 / 0.
inline int legendre_symbol(i64 a, u64 p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("legendre_symbol: p must be an odd prime");
  i64 r = a % (i64)p;
  if (r < 0) r += (i64)p;
  if (r == 0) return 0;
  u64 s = pow_mod((u64)r, (p - 1) / 2, p);
  return s == 1 ? 1 : -1;
}

// Jacobi symbol (a|n) for odd n >= 1.
inline int jacobi_symbol(i64 a, u64 n) {
  if (n % 2 == 0) throw std::invalid_argument("jacobi_symbol: n must be odd");
  i64 aa = a % (i64)n;
  if (aa < 0) aa += (i64)n;
  u64 u = (u64)aa, v = n;
  int sign = 1;
  while (u != 0) {
    while (u % 2 == 0) {
      u /= 2;
      u64 m = v % 8;
      if (m == 3 || m == 5) sign = -sign;
    }
    std::swap(u, v);
    if (u % 4 == 3 && v % 4 == 3) sign = -sign;
    u %= v;
  }
  return v == 1 ? sign : 0;
}

// Kronecker symbol (a|q) at a prime q; covers q = 2 for CM discriminants.
inline int kronecker_at_prime(i64 a, u64 q) {
  if (q == 2) {
    if (a % 2 == 0) return 0;
    i64 m = a % 8;
    if (m < 0) m += 8;
    return (m == 1 || m == 7) ? 1 : -1;
  }
  return legendre_symbol(a, q);
}

// Least k >= 1 with a^k = 1 mod p.  Requires p prime, p not dividing a.
inline u64 mult_order(i64 a, u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("mult_order: p must be prime");
  i64 r = a % (i64)p;
  if (r < 0) r += (i64)p;
  if (r == 0) throw std::invalid_argument("mult_order: p divides a");
  u64 x = (u64)r;
  u64 ord = p - 1;
  for (auto [q, e] : factorize(p - 1)) {
    for (unsigned i = 0; i < e; ++i) {
      if (ord % q == 0 && pow_mod(x, ord / q, p) == 1) ord /= q;
      else break;
    }
  }
  return ord;
}

struct PrimePower {
  u64 p = 0;
  unsigned e = 1;

  PrimePower() = default;
  PrimePower(u64 p_, unsigned e_) : p(p_), e(e_) {
    if (!is_prime(p)) throw std::invalid_argument("PrimePower: p not prime");
    if (e < 1) throw std::invalid_argument("PrimePower: exponent must be >= 1");
  }

  u64 value() const {
    u64 v = 1;
    for (unsigned i = 0; i < e; ++i) {
      if (v > UINT64_MAX / p) throw std::overflow_error("PrimePower: value exceeds 64 bits");
      v *= p;
    }
    return v;
  }
};

enum class SplitKind { split, inert, ramified };

inline const char* to_string(SplitKind k) {
  switch (k) {
    case SplitKind::split: return "split";
    case SplitKind::inert: return "inert";
    default: return "ramified";
  }
}

struct SplittingProfile {
  SplitKind in_Q_i = SplitKind::inert;
  SplitKind in_Q_sqrt_l = SplitKind::inert;
  bool in_biquadratic = false;

  bool operator==(const SplittingProfile&) const = default;
};

// Splitting of an odd prime q != l in Q(i), Q(sqrt(l)) and Q(i, sqrt(l)).
// q splits in Q(i) iff q = 1 mod 4; in Q(sqrt(l)) iff (l|q) = +1, where for
// l = 2 the second supplement gives (2|q) = +1 iff q = +-1 mod 8.
inline SplittingProfile splitting_profile(u64 q, u64 l) {
  if (!is_prime(q) || !is_prime(l)) throw std::invalid_argument("splitting_profile: q, l must be prime");
  if (q == 2 || q == l) throw std::invalid_argument("splitting_profile: q ramifies (q in {2, l})");
  SplittingProfile s;
  s.in_Q_i = (q % 4 == 1) ? SplitKind::split : SplitKind::inert;
  int leg;
  if (l == 2) {
    u64 m = q % 8;
    leg = (m == 1 || m == 7) ? 1 : -1;
  } else {
    leg = legendre_symbol((i64)l, q);
  }
  s.in_Q_sqrt_l = (leg == 1) ? SplitKind::split : SplitKind::inert;
  s.in_biquadratic = (s.in_Q_i == SplitKind::split) && (s.in_Q_sqrt_l == SplitKind::split);
  return s;
}

// Combine residue classes by CRT.  Moduli must be pairwise coprime; the
// result is (residue, product of moduli).
inline std::pair<u64, u64> crt_classes(const std::vector<std::pair<u64, u64>>& congruences) {
  u64 r = 0, m = 1;
  for (auto [ri, mi] : congruences) {
    if (mi == 0) throw std::invalid_argument("crt_classes: zero modulus");
    u64 g = std::gcd(m, mi);
    if (g != 1) throw std::invalid_argument("crt_classes: moduli not pairwise coprime");
    if ((u128)m * mi > UINT64_MAX) throw std::overflow_error("crt_classes: modulus product exceeds 64 bits");
    // x = r mod m, x = ri mod mi  ->  x = r + m * t with t = (ri - r)/m mod mi
    u64 ri_n = ri % mi;
    u64 r_n = r % mi;
    u64 diff = (ri_n + mi - r_n) % mi;
    // inverse of m mod mi
    u64 minv = 1;
    if (mi > 1) {
      i64 x0 = 1, x1 = 0;
      i64 a = (i64)(m % mi), b = (i64)mi;
      while (b) {
        i64 qq = a / b;
        a -= qq * b; std::swap(a, b);
        x0 -= qq * x1; std::swap(x0, x1);
      }
      i64 inv = x0 % (i64)mi;
      if (inv < 0) inv += (i64)mi;
      minv = (u64)inv;
    }
    u64 t = mul_mod(diff, minv, mi);
    r = r + m * t;
    m = m * mi;
  }
  return {r % m, m};
}

} // namespace galwit
