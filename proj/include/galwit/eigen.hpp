#pragma once

// Decomposition of cuspidal Hecke modules into simultaneous eigensystems:
// split into pure invariant subspaces by factored characteristic polynomials
// (plain kernels, so only honest common eigenvectors survive), then extract
// eigenvalues through a cyclic vector for a generating Hecke combination.
// Every returned system is verified by an explicit eigenvector over the
// coefficient field.

#include "galwit/ffield.hpp"
#include "galwit/fffactor.hpp"
#include "galwit/matrix_q.hpp"
#include "galwit/modsym.hpp"
#include "galwit/numberfield.hpp"
#include "galwit/zpoly.hpp"

#include <map>
#include <optional>
#include <string>

namespace galwit {

// ---------------------------------------------------------------------------

inline std::string fnv1a_hex(const std::string& s) {
  u64 h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

// primes q <= B with q not dividing N first (ascending), then q | N
inline std::vector<u64> hecke_prime_order(u64 N, u64 B) {
  std::vector<u64> out;
  for (u64 q : primes_below(B + 1))
    if (N % q != 0) out.push_back(q);
  for (u64 q : primes_below(B + 1))
    if (N % q == 0) out.push_back(q);
  return out;
}

template <class F>
inline Mat<F> restrict_to(const F& f, const Mat<F>& op, const Mat<F>& W) {
  return solve_in_column_space(f, W, mat_mul(f, op, W));
}

// ---------------------------------------------------------------------------
// Characteristic-0 systems.

struct Char0System {
  u64 level = 1;
  u64 bound = 0;                               // eigenvalues stored for q <= bound
  unsigned r = 1;                              // coefficient-field degree
  PolyV<RationalField> field_poly;             // minpoly of the generator, deg r
  std::map<u64, PolyV<RationalField>> aq;      // coords in powers of the generator
  bool is_new = false;
  std::string id;
  // handles for extending eigenvalues beyond `bound` (cuspidal coordinates)
  std::vector<Rational> seed;                  // cuspidal coords of the cyclic vector
  Mat<RationalField> krylov;                   // cuspidal coords of its A-powers
};

struct EigenLevelQ {
  u64 N = 1;
  u64 B = 0;
  ModSymSpace<RationalField> space;
  std::map<u64, Mat<RationalField>> ops;
  std::vector<Char0System> systems;

  EigenLevelQ(u64 n, u64 b) : N(n), B(b), space(build_space(n, RationalField{})) {}

  const Mat<RationalField>& op(u64 q) {
    auto it = ops.find(q);
    if (it != ops.end()) return it->second;
    return ops.emplace(q, hecke_matrix(space, q).mat).first->second;
  }
};

namespace detail {

inline std::vector<PolyV<RationalField>> distinct_irreducible_factors_q(const PolyV<RationalField>& cp) {
  std::vector<PolyV<RationalField>> out;
  for (auto& [g, m] : factor_rational(cp).factors) out.push_back(g);
  return out;
}

template <class F>
inline std::vector<Mat<F>> split_by_factors(const F& f, const Mat<F>& W, const Mat<F>& A,
                                            const std::vector<PolyV<F>>& factors) {
  std::vector<Mat<F>> out;
  for (const auto& g : factors) {
    Mat<F> K = kernel_basis(f, mat_poly_eval(f, g, A));
    if (K.nc > 0) out.push_back(mat_mul(f, W, K));
  }
  return out;
}

// deterministic weight sequence for generating Hecke combinations
inline std::vector<i64> combo_weights(size_t nops, unsigned attempt) {
  std::vector<i64> w(nops, 0);
  if (attempt < nops) {
    w[attempt] = 1;
    return w;
  }
  u64 state = 0x9e3779b97f4a7c15ull * (attempt + 1);
  for (auto& x : w) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    x = (i64)(1 + (state >> 33) % 19);
  }
  return w;
}

} // namespace detail

// Extract all eigensystems carried by the pure subspace W (cuspidal coords).
inline void char0_extract(EigenLevelQ& lvl, Mat<RationalField> W,
                          const std::vector<u64>& qs, std::vector<Char0System>& out,
                          int depth = 0) {
  RationalField QF;
  if (W.nc == 0) return;
  if (depth > 32) throw std::logic_error("char0_extract: recursion limit");
  int w = W.nc;
  std::map<u64, Mat<RationalField>> restricted;
  auto rop = [&](u64 q) -> const Mat<RationalField>& {
    auto it = restricted.find(q);
    if (it != restricted.end()) return it->second;
    return restricted.emplace(q, restrict_to(QF, lvl.op(q), W)).first->second;
  };

  for (unsigned attempt = 0; attempt < 200; ++attempt) {
    auto weights = detail::combo_weights(qs.size(), attempt);
    Mat<RationalField> A(QF, w, w);
    for (size_t i = 0; i < qs.size(); ++i) {
      if (weights[i] == 0) continue;
      A = mat_add(QF, A, mat_scale(QF, rop(qs[i]), Rational(weights[i])));
    }
    auto cp = charpoly_rational(A);
    auto factors = detail::distinct_irreducible_factors_q(cp);
    if (factors.size() > 1) {
      for (auto& piece : detail::split_by_factors(QF, W, A, factors))
        char0_extract(lvl, piece, qs, out, depth + 1);
      return;
    }
    const auto& f = factors[0];
    int d = poly_deg(f);
    // the subspace may still carry a nilpotent part for this combination;
    // cut to the honest kernel first (void when charpoly = f itself)
    if (d < w) {
      Mat<RationalField> K = kernel_basis(QF, mat_poly_eval(QF, f, A));
      if (K.nc < w) {
        char0_extract(lvl, mat_mul(QF, W, K), qs, out, depth + 1);
        return;
      }
    }
    // Krylov basis from a cyclic vector (any nonzero vector works: the
    // minimal polynomial is irreducible)
    Mat<RationalField> kry(QF, w, d);
    std::vector<Rational> v(w, Rational(0));
    v[0] = 1;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < w; ++i) kry.at(i, j) = v[i];
      if (j + 1 < d) v = mat_apply(QF, A, v);
    }
    if (mat_rank(QF, kry) != d) continue;  // should not happen; retry

    bool ok = true;
    std::map<u64, PolyV<RationalField>> aq;
    for (u64 q : qs) {
      std::vector<Rational> e0(w, Rational(0));
      e0[0] = 1;
      auto y = mat_apply(QF, rop(q), e0);
      Mat<RationalField> rhs(QF, w, 1);
      for (int i = 0; i < w; ++i) rhs.at(i, 0) = y[i];
      try {
        Mat<RationalField> sol = solve_in_column_space(QF, kry, rhs);
        PolyV<RationalField> coords;
        for (int i = 0; i < d; ++i) coords.push_back(sol.at(i, 0));
        poly_normalize(QF, coords);
        aq.emplace(q, std::move(coords));
      } catch (const std::domain_error&) {
        ok = false;  // eigenvalue outside Q(alpha): combination not generating
        break;
      }
    }
    if (!ok) continue;

    // verify with an explicit eigenvector over Q[x]/(f)
    NumberField NF(f);
    NumberField::Elt alpha = NF.gen();
    // g = f / (x - alpha) by synthetic division
    std::vector<NumberField::Elt> g(d);
    NumberField::Elt carry = NF.one();
    for (int i = d - 1; i >= 0; --i) {
      g[i] = carry;
      NumberField::Elt fi{f[i]};
      poly_normalize(QF, fi);
      carry = NF.add(fi, NF.mul(alpha, carry));
    }
    std::vector<NumberField::Elt> vec(w, NF.zero());
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < w; ++i) {
        NumberField::Elt term{kry.at(i, j)};
        poly_normalize(QF, term);
        vec[i] = NF.add(vec[i], NF.mul(g[j], term));
      }
    bool nonzero = false;
    for (auto& x : vec) nonzero |= !NF.is_zero(x);
    if (!nonzero) throw std::logic_error("char0_extract: zero eigenvector");
    for (u64 q : qs) {
      const auto& Rq = rop(q);
      for (int i = 0; i < w; ++i) {
        NumberField::Elt lhs = NF.zero();
        for (int j = 0; j < w; ++j) {
          if (QF.is_zero(Rq.at(i, j))) continue;
          NumberField::Elt c{Rq.at(i, j)};
          poly_normalize(QF, c);
          lhs = NF.add(lhs, NF.mul(c, vec[j]));
        }
        NumberField::Elt rhs = NF.mul(aq.at(q), vec[i]);
        if (!NF.eq(lhs, rhs)) throw std::logic_error("char0_extract: eigenvector check failed");
      }
    }

    Char0System sys;
    sys.level = lvl.N;
    sys.bound = lvl.B;
    sys.field_poly = f;
    sys.r = (unsigned)d;
    sys.aq = std::move(aq);
    sys.seed.assign(lvl.space.cuspidal_dim(), Rational(0));
    {
      std::vector<Rational> e0(w, Rational(0));
      e0[0] = 1;
      for (int i = 0; i < W.nr; ++i)
        for (int j = 0; j < w; ++j) sys.seed[i] += W.at(i, j) * e0[j];
    }
    sys.krylov = mat_mul(QF, W, kry);
    out.push_back(std::move(sys));
    return;
  }
  throw std::logic_error("char0_extract: no generating combination found");
}

// canonical id: hash of the per-prime minimal polynomials up to the Sturm bound
inline void finalize_char0_ids(EigenLevelQ& lvl) {
  RationalField QF;
  u64 sb = sturm_bound(lvl.N);
  for (auto& sys : lvl.systems) {
    NumberField NF(sys.field_poly);
    std::string blob = "N=" + std::to_string(sys.level) + "|char=0|r=" + std::to_string(sys.r);
    for (u64 q : primes_below(sb + 1)) {
      auto it = sys.aq.find(q);
      if (it == sys.aq.end()) continue;
      blob += "|" + std::to_string(q) + ":" + poly_str(QF, minpoly_over_q(NF, it->second));
    }
    sys.id = fnv1a_hex(blob);
  }
}

inline EigenLevelQ compute_eigensystems_q(u64 N, u64 B) {
  if (B < sturm_bound(N)) throw std::invalid_argument("eigensystems: bound below the Sturm bound");
  RationalField QF;
  EigenLevelQ lvl(N, B);
  int k = lvl.space.cuspidal_dim();
  auto qs = hecke_prime_order(N, B);
  if (k == 0) return lvl;

  std::vector<Mat<RationalField>> parts{Mat<RationalField>::identity(QF, k)};
  for (u64 q : qs) {
    std::vector<Mat<RationalField>> next;
    for (auto& W : parts) {
      Mat<RationalField> A = restrict_to(QF, lvl.op(q), W);
      auto cp = charpoly_rational(A);
      auto factors = detail::distinct_irreducible_factors_q(cp);
      if (factors.size() == 1 && poly_deg(factors[0]) == W.nc) {
        next.push_back(std::move(W));  // irreducible charpoly: nothing to cut
        continue;
      }
      for (auto& piece : detail::split_by_factors(QF, W, A, factors))
        next.push_back(std::move(piece));
    }
    parts = std::move(next);
  }
  for (auto& W : parts) char0_extract(lvl, std::move(W), qs, lvl.systems);
  // canonical order: by coefficient-field degree, then by id blob
  finalize_char0_ids(lvl);
  std::sort(lvl.systems.begin(), lvl.systems.end(), [](const Char0System& a, const Char0System& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.id < b.id;
  });
  return lvl;
}

// Extend the eigenvalue map of one system to a further prime (Krylov solve
// against the cached cyclic basis; no full Hecke matrix is formed).
inline const PolyV<RationalField>& extend_aq(EigenLevelQ& lvl, Char0System& sys, u64 q) {
  auto it = sys.aq.find(q);
  if (it != sys.aq.end()) return it->second;
  RationalField QF;
  auto y = hecke_apply_cuspidal(lvl.space, q, sys.seed);
  Mat<RationalField> rhs(QF, (int)y.size(), 1);
  for (size_t i = 0; i < y.size(); ++i) rhs.at((int)i, 0) = y[i];
  Mat<RationalField> sol = solve_in_column_space(QF, sys.krylov, rhs);
  PolyV<RationalField> coords;
  for (int i = 0; i < sol.nr; ++i) coords.push_back(sol.at(i, 0));
  poly_normalize(QF, coords);
  return sys.aq.emplace(q, std::move(coords)).first->second;
}

// ---------------------------------------------------------------------------
// Newness: a system at level N is old iff its prime-to-N eigenvalue map
// matches a system at a proper divisor level, compared through per-prime
// minimal polynomials (Galois-orbit data).

inline bool char0_systems_match_away_from(u64 N, const Char0System& a, const Char0System& b) {
  // only the prime-to-N eigenvalue data is compared: a stabilized old form
  // may have a larger coefficient field than its source newform
  RationalField QF;
  NumberField Ka(a.field_poly), Kb(b.field_poly);
  for (auto& [q, va] : a.aq) {
    if (N % q == 0) continue;
    auto it = b.aq.find(q);
    if (it == b.aq.end()) continue;
    if (!poly_eq(QF, minpoly_over_q(Ka, va), minpoly_over_q(Kb, it->second))) return false;
  }
  return true;
}

// Marks is_new on the level-N systems; divisor_levels must contain an entry
// for every proper divisor M > 1 of N with genus > 0.
inline void mark_new_char0(EigenLevelQ& lvl, const std::map<u64, const EigenLevelQ*>& divisor_levels) {
  for (u64 M : divisors(lvl.N)) {
    if (M == lvl.N) continue;
    if (genus_x0(M) == 0) continue;
    auto it = divisor_levels.find(M);
    if (it == divisor_levels.end())
      throw std::runtime_error("new_at_level: missing eigensystem data for divisor level " + std::to_string(M));
    if (it->second->B < sturm_bound(lvl.N))
      throw std::runtime_error("new_at_level: divisor level " + std::to_string(M) +
                               " computed with bound below Sturm(" + std::to_string(lvl.N) + ")");
  }
  for (auto& sys : lvl.systems) {
    bool old_system = false;
    for (auto& [M, sub] : divisor_levels) {
      if (M == lvl.N || lvl.N % M != 0) continue;
      for (auto& other : sub->systems)
        if (char0_systems_match_away_from(lvl.N, sys, other)) { old_system = true; break; }
      if (old_system) break;
    }
    sys.is_new = !old_system;
  }
}

// ---------------------------------------------------------------------------
// CM detection.

struct CMVerdict {
  bool has_cm = false;
  i64 discriminant = 0;
  u64 evidence_bound = 0;
};

inline bool is_fundamental_negative(u64 n) {
  auto squarefree = [](u64 m) {
    for (auto [p, e] : factorize(m))
      if (e > 1) return false;
    return true;
  };
  if (n % 4 == 3) return squarefree(n);
  if (n % 4 == 0) {
    u64 m = n / 4;
    return (m % 4 == 1 || m % 4 == 2) && squarefree(m);
  }
  return false;
}

// negative fundamental discriminants D with |D| dividing N (conductor of the
// quadratic character divides the level), ascending |D|
inline std::vector<i64> cm_candidate_discriminants(u64 N) {
  std::vector<i64> out;
  for (u64 m : divisors(N))
    if (m >= 3 && is_fundamental_negative(m)) out.push_back(-(i64)m);
  return out;
}

inline CMVerdict cm_test(EigenLevelQ& lvl, Char0System& sys) {
  CMVerdict v;
  for (i64 D : cm_candidate_discriminants(lvl.N)) {
    u64 BD = sturm_bound(lvl.N * (u64)(D * D));
    bool all_zero = true;
    for (u64 q : primes_below(BD + 1)) {
      if (kronecker_at_prime(D, q) != -1) continue;
      const auto& a = extend_aq(lvl, sys, q);
      if (!poly_is_zero(a)) { all_zero = false; break; }
    }
    if (all_zero) {
      v.has_cm = true;
      v.discriminant = D;
      v.evidence_bound = BD;
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Characteristic-p systems (from reduction or directly from mod-p modular
// symbols), presented in the canonical field make_field(p, r) and
// Frobenius-orbit minimized.

struct CharPSystem {
  u64 level = 1;
  u64 p = 2;
  u64 bound = 0;
  unsigned r = 1;
  FiniteFieldPtr field;                 // make_field(p, r)
  std::map<u64, FiniteField::V> aq;
  bool is_new = false;
  bool eigenvector_verified = false;    // set for systems from modular symbols
  std::string id;
};

namespace detail {

// Express each value of `vals` (elements of K) in powers of a generator of
// the joint subfield, map into the canonical field, and Frobenius-minimize.
inline CharPSystem canonicalize_charp(u64 level, u64 B, const FiniteField& K,
                                      const std::map<u64, FiniteField::V>& vals) {
  CharPSystem sys;
  sys.level = level;
  sys.p = K.p;
  sys.bound = B;
  // joint subfield degree: lcm of element degrees
  u64 r = 1;
  for (auto& [q, v] : vals) r = std::lcm(r, (u64)subfield_degree(K, v));
  sys.r = (unsigned)r;
  sys.field = make_field(K.p, (unsigned)r);

  // find a generator gamma of the joint subfield
  FiniteField::V gamma = K.zero();
  {
    bool found = false;
    for (auto& [q, v] : vals)
      if (subfield_degree(K, v) == r) { gamma = v; found = true; break; }
    u64 salt = 1;
    while (!found) {
      // deterministic combination of the values
      FiniteField::V acc = K.zero();
      u64 t = salt;
      for (auto& [q, v] : vals) {
        t = t * 6364136223846793005ull + 1442695040888963407ull;
        u64 c = 1 + (t >> 40) % (K.p > 1 ? K.p : 2);
        FiniteField::V scaled = v;
        for (auto& x : scaled) x = K.base.mul(x, c % K.p);
        acc = K.add(acc, scaled);
      }
      if (subfield_degree(K, acc) == r) { gamma = acc; found = true; }
      if (++salt > 1000) throw std::logic_error("canonicalize_charp: no generator found");
    }
  }

  // coordinates of each value in powers of gamma (solve over F_p)
  PrimeField base = K.base;
  Mat<PrimeField> pw(base, (int)K.r, (int)r);
  {
    FiniteField::V g = K.one();
    for (u64 j = 0; j < r; ++j) {
      for (unsigned i = 0; i < K.r; ++i) pw.at((int)i, (int)j) = g[i];
      g = K.mul(g, gamma);
    }
  }
  auto mg = minpoly_over_prime(K, gamma);  // degree r
  // canonical root of mg in make_field(p, r)
  ExtField E(sys.field);
  PolyV<ExtField> mge;
  for (u64 c : mg) mge.push_back(sys.field->from_int((i64)c));
  poly_normalize(E, mge);
  auto roots = ff_roots(E, mge);
  if (roots.empty()) throw std::logic_error("canonicalize_charp: no canonical root");
  FiniteField::V rho = roots.front();

  std::map<u64, FiniteField::V> mapped;
  for (auto& [q, v] : vals) {
    Mat<PrimeField> rhs(base, (int)K.r, 1);
    for (unsigned i = 0; i < K.r; ++i) rhs.at((int)i, 0) = v[i];
    Mat<PrimeField> sol = solve_in_column_space(base, pw, rhs);
    FiniteField::V img = sys.field->zero();
    FiniteField::V rp = sys.field->one();
    for (u64 j = 0; j < r; ++j) {
      u64 c = sol.at((int)j, 0);
      if (c) {
        FiniteField::V term = rp;
        for (auto& x : term) x = base.mul(x, c);
        img = sys.field->add(img, term);
      }
      rp = sys.field->mul(rp, rho);
    }
    mapped.emplace(q, std::move(img));
  }

  // Frobenius-orbit canonical form: choose the twist with the least
  // serialization
  auto serialize = [&](const std::map<u64, FiniteField::V>& m) {
    std::string s;
    for (auto& [q, v] : m) s += std::to_string(q) + ":" + sys.field->str(v) + ";";
    return s;
  };
  std::map<u64, FiniteField::V> best = mapped;
  std::string best_s = serialize(mapped);
  std::map<u64, FiniteField::V> cur = mapped;
  for (u64 i = 1; i < r; ++i) {
    for (auto& [q, v] : cur) v = sys.field->frobenius(v);
    std::string s = serialize(cur);
    if (s < best_s) { best_s = s; best = cur; }
  }
  sys.aq = std::move(best);

  // id over primes up to the Sturm bound
  u64 sb = sturm_bound(level);
  std::string blob = "N=" + std::to_string(level) + "|char=" + std::to_string(K.p) +
                     "|r=" + std::to_string(r);
  for (u64 q : primes_below(sb + 1)) {
    auto it = sys.aq.find(q);
    if (it == sys.aq.end()) continue;
    blob += "|" + std::to_string(q) + ":" + sys.field->str(it->second);
  }
  sys.id = fnv1a_hex(blob);
  return sys;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Reduction of a characteristic-0 system modulo (the fixed first prime
// above) p.

struct Char0Reduction {
  u64 p = 2;
  PolyV<PrimeField> factor_used;  // first canonical factor of field_poly mod p
  FiniteFieldPtr working;         // F_p[x] / factor_used

  FiniteField::V reduce(const PolyV<RationalField>& coords) const {
    PrimeField base(p);
    PolyV<PrimeField> num;
    for (const auto& c : coords) {
      Integer nu = boost::multiprecision::numerator(c);
      Integer de = boost::multiprecision::denominator(c);
      u64 dmod = galwit::detail::integer_mod_u64(de, p);
      if (dmod == 0)
        throw std::domain_error("reduce_system: denominator divisible by p; reduction undefined");
      u64 nmod = galwit::detail::integer_mod_u64(nu, p);
      num.push_back(base.mul(nmod, base.inv(dmod)));
    }
    poly_normalize(base, num);
    PolyV<PrimeField> modp(factor_used.begin(), factor_used.end());
    auto red = poly_mod(base, num, modp);
    FiniteField::V out = working->zero();
    for (size_t i = 0; i < red.size(); ++i) out[i] = red[i];
    return out;
  }
};

inline Char0Reduction make_reduction(const Char0System& sys, u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("reduce_system: p must be prime");
  PrimeField base(p);
  Char0Reduction red;
  red.p = p;
  PolyV<PrimeField> fbar;
  for (const auto& c : sys.field_poly) {
    Integer nu = boost::multiprecision::numerator(c);
    Integer de = boost::multiprecision::denominator(c);
    u64 dmod = galwit::detail::integer_mod_u64(de, p);
    if (dmod == 0) throw std::domain_error("reduce_system: field polynomial not p-integral");
    fbar.push_back(base.mul(galwit::detail::integer_mod_u64(nu, p), base.inv(dmod)));
  }
  poly_normalize(base, fbar);
  if (poly_deg(fbar) != (int)sys.r)
    throw std::logic_error("reduce_system: degree loss mod p");
  auto fac = ff_factor(base, fbar);
  red.factor_used = fac.factors.front().first;
  std::vector<u64> mod(red.factor_used.begin(), red.factor_used.end());
  red.working = std::make_shared<FiniteField>(p, (unsigned)poly_deg(red.factor_used), mod, false);
  return red;
}

inline CharPSystem reduce_system(const Char0System& sys, u64 p) {
  Char0Reduction red = make_reduction(sys, p);
  std::map<u64, FiniteField::V> vals;
  for (auto& [q, coords] : sys.aq) vals.emplace(q, red.reduce(coords));
  CharPSystem out = detail::canonicalize_charp(sys.level, sys.bound, *red.working, vals);
  out.is_new = sys.is_new;
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic-p eigensystems directly from mod-p modular symbols.

struct EigenLevelP {
  u64 N = 1;
  u64 p = 2;
  u64 B = 0;
  ModSymSpace<PrimeField> space;
  std::map<u64, Mat<PrimeField>> ops;
  std::vector<CharPSystem> systems;

  EigenLevelP(u64 n, u64 pp, u64 b) : N(n), p(pp), B(b), space(build_space(n, PrimeField(pp))) {}

  const Mat<PrimeField>& op(u64 q) {
    auto it = ops.find(q);
    if (it != ops.end()) return it->second;
    return ops.emplace(q, hecke_matrix(space, q).mat).first->second;
  }
};

namespace detail {

inline std::vector<PolyV<PrimeField>> distinct_irreducible_factors_p(const PrimeField& fp,
                                                                     const PolyV<PrimeField>& cp) {
  std::vector<PolyV<PrimeField>> out;
  for (auto& [g, m] : ff_factor(fp, cp).factors) out.push_back(g);
  return out;
}

} // namespace detail

inline void charp_extract(EigenLevelP& lvl, Mat<PrimeField> W, const std::vector<u64>& qs,
                          std::vector<CharPSystem>& out, int depth = 0) {
  PrimeField fp(lvl.p);
  if (W.nc == 0) return;
  if (depth > 64) throw std::logic_error("charp_extract: recursion limit");
  int w = W.nc;
  std::map<u64, Mat<PrimeField>> restricted;
  auto rop = [&](u64 q) -> const Mat<PrimeField>& {
    auto it = restricted.find(q);
    if (it != restricted.end()) return it->second;
    return restricted.emplace(q, restrict_to(fp, lvl.op(q), W)).first->second;
  };

  for (unsigned attempt = 0; attempt < 400; ++attempt) {
    auto weights = detail::combo_weights(qs.size(), attempt);
    Mat<PrimeField> A(fp, w, w);
    bool any = false;
    for (size_t i = 0; i < qs.size(); ++i) {
      u64 wm = (u64)(weights[i] % (i64)lvl.p);
      if (wm == 0) continue;
      any = true;
      A = mat_add(fp, A, mat_scale(fp, rop(qs[i]), wm));
    }
    if (!any) continue;
    auto cp = charpoly_hessenberg(fp, A);
    auto factors = detail::distinct_irreducible_factors_p(fp, cp);
    if (factors.size() > 1) {
      for (auto& piece : detail::split_by_factors(fp, W, A, factors))
        charp_extract(lvl, piece, qs, out, depth + 1);
      return;
    }
    const auto& f = factors[0];
    int d = poly_deg(f);
    if (d < w) {
      Mat<PrimeField> K = kernel_basis(fp, mat_poly_eval(fp, f, A));
      if (K.nc < w) {
        charp_extract(lvl, mat_mul(fp, W, K), qs, out, depth + 1);
        return;
      }
    }
    Mat<PrimeField> kry(fp, w, d);
    std::vector<u64> v(w, 0);
    v[0] = 1;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < w; ++i) kry.at(i, j) = v[i];
      if (j + 1 < d) v = mat_apply(fp, A, v);
    }
    if (mat_rank(fp, kry) != d) continue;

    bool ok = true;
    std::map<u64, FiniteField::V> aq;
    std::vector<u64> fmod(f.begin(), f.end());
    auto Kf = std::make_shared<FiniteField>(lvl.p, (unsigned)d, fmod, false);
    for (u64 q : qs) {
      std::vector<u64> e0(w, 0);
      e0[0] = 1;
      auto y = mat_apply(fp, rop(q), e0);
      Mat<PrimeField> rhs(fp, w, 1);
      for (int i = 0; i < w; ++i) rhs.at(i, 0) = y[i];
      try {
        Mat<PrimeField> sol = solve_in_column_space(fp, kry, rhs);
        FiniteField::V coords = Kf->zero();
        for (int i = 0; i < d; ++i) coords[i] = sol.at(i, 0);
        aq.emplace(q, std::move(coords));
      } catch (const std::domain_error&) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    // verify via an explicit eigenvector over F_p[x]/(f)
    ExtField E(Kf);
    FiniteField::V alpha = Kf->gen();
    std::vector<FiniteField::V> g(d);
    FiniteField::V carry = Kf->one();
    for (int i = d - 1; i >= 0; --i) {
      g[i] = carry;
      carry = Kf->add(Kf->from_int((i64)f[i]), Kf->mul(alpha, carry));
    }
    std::vector<FiniteField::V> vec(w, Kf->zero());
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < w; ++i) {
        if (!kry.at(i, j)) continue;
        FiniteField::V term = g[j];
        for (auto& x : term) x = fp.mul(x, kry.at(i, j));
        vec[i] = Kf->add(vec[i], term);
      }
    bool nonzero = false;
    for (auto& x : vec) nonzero |= !Kf->is_zero(x);
    if (!nonzero) throw std::logic_error("charp_extract: zero eigenvector");
    for (u64 q : qs) {
      const auto& Rq = rop(q);
      for (int i = 0; i < w; ++i) {
        FiniteField::V lhs = Kf->zero();
        for (int j = 0; j < w; ++j) {
          if (!Rq.at(i, j)) continue;
          FiniteField::V term = vec[j];
          for (auto& x : term) x = fp.mul(x, Rq.at(i, j));
          lhs = Kf->add(lhs, term);
        }
        if (!(lhs == Kf->mul(aq.at(q), vec[i])))
          throw std::logic_error("charp_extract: eigenvector check failed");
      }
    }

    CharPSystem sys = detail::canonicalize_charp(lvl.N, lvl.B, *Kf, aq);
    sys.eigenvector_verified = true;
    out.push_back(std::move(sys));
    return;
  }
  throw std::logic_error("charp_extract: no generating combination found");
}

inline EigenLevelP compute_eigensystems_p(u64 N, u64 p, u64 B) {
  if (B < sturm_bound(N)) throw std::invalid_argument("eigensystems: bound below the Sturm bound");
  PrimeField fp(p);
  EigenLevelP lvl(N, p, B);
  int k = lvl.space.cuspidal_dim();
  auto qs = hecke_prime_order(N, B);
  if (k == 0) return lvl;

  std::vector<Mat<PrimeField>> parts{Mat<PrimeField>::identity(fp, k)};
  for (u64 q : qs) {
    std::vector<Mat<PrimeField>> next;
    for (auto& W : parts) {
      Mat<PrimeField> A = restrict_to(fp, lvl.op(q), W);
      auto cp = charpoly_hessenberg(fp, A);
      auto factors = detail::distinct_irreducible_factors_p(fp, cp);
      if (factors.size() == 1 && poly_deg(factors[0]) == W.nc) {
        next.push_back(std::move(W));
        continue;
      }
      for (auto& piece : detail::split_by_factors(fp, W, A, factors))
        next.push_back(std::move(piece));
    }
    parts = std::move(next);
  }
  for (auto& W : parts) charp_extract(lvl, std::move(W), qs, lvl.systems);
  std::sort(lvl.systems.begin(), lvl.systems.end(), [](const CharPSystem& a, const CharPSystem& b) {
    if (a.r != b.r) return a.r < b.r;
    return a.id < b.id;
  });
  // identical canonical systems (same Galois orbit) are reported once
  lvl.systems.erase(std::unique(lvl.systems.begin(), lvl.systems.end(),
                                [](const CharPSystem& a, const CharPSystem& b) {
                                  return a.r == b.r && a.id == b.id && a.aq == b.aq;
                                }),
                    lvl.systems.end());
  return lvl;
}

// orbit-level match away from N, through per-prime minimal polynomials (the
// coefficient fields of the two systems may differ)
inline bool charp_systems_match_away_from(u64 N, const CharPSystem& a, const CharPSystem& b) {
  if (a.p != b.p) return false;
  for (auto& [q, va] : a.aq) {
    if (N % q == 0) continue;
    auto it = b.aq.find(q);
    if (it == b.aq.end()) continue;
    if (minpoly_over_prime(*a.field, va) != minpoly_over_prime(*b.field, it->second)) return false;
  }
  return true;
}

inline void mark_new_charp(EigenLevelP& lvl, const std::map<u64, const EigenLevelP*>& divisor_levels) {
  for (u64 M : divisors(lvl.N)) {
    if (M == lvl.N || M == 1) continue;
    auto it = divisor_levels.find(M);
    if (it == divisor_levels.end())
      throw std::runtime_error("new_at_level: missing eigensystem data for divisor level " + std::to_string(M));
  }
  for (auto& sys : lvl.systems) {
    bool old_system = false;
    for (auto& [M, sub] : divisor_levels) {
      if (M == lvl.N || lvl.N % M != 0) continue;
      for (auto& other : sub->systems)
        if (charp_systems_match_away_from(lvl.N, sys, other)) { old_system = true; break; }
      if (old_system) break;
    }
    sys.is_new = !old_system;
  }
}

} // namespace galwit
