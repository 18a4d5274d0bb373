#pragma once

// Weight-2 modular symbols for Gamma_0(N) via Manin symbols on P^1(Z/N),
// over Q or F_p.  Builds the relation quotient (2-term and 3-term Manin
// relations), the boundary map to cusp classes, the star involution, and
// Hecke operators T_q (Merel's Heilbronn family) / U_q (modular-symbol
// definition via continued-fraction paths).

#include "galwit/arith.hpp"
#include "galwit/fields.hpp"
#include "galwit/matrix.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

namespace galwit {

// ---------------------------------------------------------------------------
// P^1(Z/N) with the canonical normalization fixed by the artifact: the class
// representative is the unit multiple (uc mod N, ud mod N) minimizing the
// pair lexicographically.

class P1Table {
 public:
  explicit P1Table(u64 N) : N_(N) {
    if (N == 0) throw std::invalid_argument("P1Table: N must be positive");
    table_.assign(N_ * N_, -1);
    std::vector<u64> units;
    for (u64 u = 0; u < N_; ++u)
      if (std::gcd(u, N_) == 1) units.push_back(u);
    if (N_ == 1) units = {0};  // the single residue
    for (u64 c = 0; c < N_; ++c) {
      for (u64 d = 0; d < N_; ++d) {
        if (std::gcd(std::gcd(c, d), N_) != 1) continue;
        if (table_[c * N_ + d] >= 0) continue;
        // normalize: minimal (uc, ud) over units u
        u64 bc = c, bd = d;
        for (u64 u : units) {
          u64 nc = u * c % N_, nd = u * d % N_;
          if (nc < bc || (nc == bc && nd < bd)) { bc = nc; bd = nd; }
        }
        int idx = (int)reps_.size();
        reps_.push_back({bc, bd});
        for (u64 u : units) table_[(u * c % N_) * N_ + (u * d % N_)] = idx;
      }
    }
  }

  u64 level() const { return N_; }
  int size() const { return (int)reps_.size(); }
  std::pair<u64, u64> rep(int i) const { return reps_[i]; }

  // index of (c : d), or -1 when gcd(c, d, N) > 1
  int index(i64 c, i64 d) const {
    u64 cc = (u64)((c % (i64)N_ + (i64)N_) % (i64)N_);
    u64 dd = (u64)((d % (i64)N_ + (i64)N_) % (i64)N_);
    return table_[cc * N_ + dd];
  }

  // right action (c:d) * [[a,b],[x,y]]
  int apply(int i, i64 a, i64 b, i64 x, i64 y) const {
    auto [c, d] = reps_[i];
    i64 nc = (i64)c * a + (i64)d * x;
    i64 nd = (i64)c * b + (i64)d * y;
    return index(nc, nd);
  }

 private:
  u64 N_;
  std::vector<std::pair<u64, u64>> reps_;
  std::vector<int> table_;
};

// ---------------------------------------------------------------------------
// Cusps a/c in lowest terms (c >= 0; infinity is 1/0), with the classical
// Gamma_0(N)-equivalence test: p1/q1 ~ p2/q2 iff s1 q2 = s2 q1 modulo
// gcd(q1 q2, N), where s_i inverts p_i mod q_i.

struct Cusp {
  i64 a = 1;
  i64 c = 0;

  Cusp() = default;
  Cusp(i64 num, i64 den) {
    if (num == 0 && den == 0) throw std::invalid_argument("Cusp: 0/0");
    if (den == 0) { a = 1; c = 0; return; }
    if (num == 0) { a = 0; c = 1; return; }
    i64 g = std::gcd(std::abs(num), std::abs(den));
    num /= g; den /= g;
    if (den < 0) { num = -num; den = -den; }
    a = num;
    c = den;
  }

  bool operator==(const Cusp&) const = default;
};

inline bool cusps_equivalent(const Cusp& x, const Cusp& y, u64 N) {
  // infinity = 1/0 is Gamma_0(N)-equivalent to 1/N; using that representative
  // keeps the denominator-based criterion uniform
  i64 p1 = x.a, q1 = x.c, p2 = y.a, q2 = y.c;
  if (q1 == 0) { p1 = 1; q1 = (i64)N; }
  if (q2 == 0) { p2 = 1; q2 = (i64)N; }
  auto inv_mod = [](i64 p, i64 q) -> i64 {
    if (q <= 1) return 0;
    i64 a = ((p % q) + q) % q, b = q, x0 = 1, x1 = 0;
    while (b) {
      i64 t = a / b;
      a -= t * b; std::swap(a, b);
      x0 -= t * x1; std::swap(x0, x1);
    }
    return ((x0 % q) + q) % q;
  };
  i64 s1 = inv_mod(p1, q1);
  i64 s2 = inv_mod(p2, q2);
  i64 g = (i64)std::gcd((u64)(q1 * q2), N);
  if (g == 0) g = 1;
  i64 lhs = ((s1 * q2 - s2 * q1) % g + g) % g;
  return lhs == 0;
}

// SL_2(Z) lift [a, b; c, d] of a P^1 representative: bottom row congruent to
// the representative mod N.
inline std::array<i64, 4> lift_to_sl2(u64 N, u64 crep, u64 drep) {
  if (N == 1) return {1, 0, 0, 1};
  i64 c0 = (i64)crep, d0 = (i64)drep;
  if (c0 == 0) return {1, 0, 0, 1};   // (0 : d) ~ (0 : 1)
  if (d0 == 0) return {0, -1, 1, 0};  // (c : 0) ~ (1 : 0)
  while (std::gcd(std::llabs(c0), std::llabs(d0)) != 1) d0 += (i64)N;
  i64 a = c0 % d0, b = d0, x0 = 1, x1 = 0;
  while (b) {
    i64 t = a / b;
    a -= t * b; std::swap(a, b);
    x0 -= t * x1; std::swap(x0, x1);
  }
  i64 u = x0;                  // u c0 = 1 (mod d0)
  i64 v = (1 - u * c0) / d0;   // u c0 + v d0 = 1
  return {v, -u, c0, d0};      // det = v d0 + u c0 = 1
}

// ---------------------------------------------------------------------------
// Heilbronn matrices: Merel's family X_n of determinant-n integer matrices,
// cached per n (independent of the level).

struct IntMat2 {
  i64 a, b, c, d;
};

inline const std::vector<IntMat2>& heilbronn_merel(u64 n) {
  static std::map<u64, std::vector<IntMat2>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<IntMat2> out;
  for (i64 a = 1; a <= (i64)n; ++a) {
    i64 q = (i64)n / a;
    if (q * a == (i64)n) {
      i64 d = q;
      for (i64 b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (i64 c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (i64 d = q + 1; d <= (i64)n; ++d) {
      i64 bc = a * d - (i64)n;
      for (i64 c = bc / a + 1; c < d; ++c)
        if (bc % c == 0) out.push_back({a, bc / c, c, d});
    }
  }
  return cache.emplace(n, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Genus of X_0(N) by the index / elliptic point / cusp count formula; used
// as the independent dimension oracle.

inline u64 psi_index(u64 N) {
  u64 mu = N;
  for (auto [p, e] : factorize(N)) mu = mu / p * (p + 1);
  return mu;
}

inline u64 nu2_count(u64 N) {
  u64 n = 0;
  for (u64 x = 0; x < N; ++x)
    if ((x * x + 1) % N == 0) ++n;
  if (N == 1) n = 1;
  return n;
}

inline u64 nu3_count(u64 N) {
  u64 n = 0;
  for (u64 x = 0; x < N; ++x)
    if ((x * x + x + 1) % N == 0) ++n;
  if (N == 1) n = 1;
  return n;
}

inline u64 cusp_count(u64 N) {
  u64 n = 0;
  for (u64 d : divisors(N)) n += euler_phi(std::gcd(d, N / d));
  return n;
}

inline u64 genus_x0(u64 N) {
  if (N == 0) throw std::invalid_argument("genus_x0: N must be positive");
  i64 twelve_g = 12 + (i64)psi_index(N) - 3 * (i64)nu2_count(N) - 4 * (i64)nu3_count(N) -
                 6 * (i64)cusp_count(N);
  if (twelve_g % 12 != 0 || twelve_g < 0) throw std::logic_error("genus_x0: formula mismatch");
  return (u64)(twelve_g / 12);
}

// Sturm bound for weight 2: ceil(mu / 6); eigensystems agreeing up to here
// agree everywhere.
inline u64 sturm_bound(u64 N) { return (psi_index(N) + 5) / 6; }

// ---------------------------------------------------------------------------

template <class F>
using SparseVec = std::vector<std::pair<int, typename F::Elt>>;  // sorted by index

template <class F>
inline SparseVec<F> sparse_add(const F& f, const SparseVec<F>& a, const SparseVec<F>& b,
                               const typename F::Elt& scale_b) {
  SparseVec<F> out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i >= a.size() || b[j].first < a[i].first) {
      auto v = f.mul(b[j].second, scale_b);
      if (!f.is_zero(v)) out.push_back({b[j].first, v});
      ++j;
    } else {
      auto v = f.add(a[i].second, f.mul(b[j].second, scale_b));
      if (!f.is_zero(v)) out.push_back({a[i].first, v});
      ++i; ++j;
    }
  }
  return out;
}

// Manin-symbol presentation of weight-2 modular symbols for Gamma_0(N).
template <class F>
struct ModSymSpace {
  using Elt = typename F::Elt;

  u64 N = 1;
  F field;
  P1Table p1;
  int dim = 0;                       // dimension of the relation quotient
  std::vector<int> basis_gens;       // P^1 index of each basis element
  std::vector<SparseVec<F>> gtb;     // generator index -> expression over basis
  Mat<F> star;                       // star involution on the quotient
  bool star_indecomposable = false;  // characteristic 2: no +/- split
  std::vector<Cusp> cusps;           // cusp class representatives
  Mat<F> boundary;                   // n_cusps x dim
  Mat<F> cuspidal;                   // dim x dim_cusp, columns span ker(boundary)

  ModSymSpace(u64 level, F f) : N(level), field(std::move(f)), p1(level) {}

  int cuspidal_dim() const { return cuspidal.nc; }

  // quotient expression of a raw generator
  const SparseVec<F>& generator_expr(int p1_index) const { return gtb[p1_index]; }
};

namespace detail {

// Reduced sparse elimination used for the Manin relation quotient.
template <class F>
struct SparseRREF {
  const F& f;
  std::map<int, SparseVec<F>> pivot_rows;  // pivot col -> normalized row

  explicit SparseRREF(const F& field) : f(field) {}

  void add_row(SparseVec<F> row) {
    while (!row.empty()) {
      auto it = pivot_rows.find(row.front().first);
      if (it == pivot_rows.end()) break;
      row = sparse_add(f, row, it->second, f.neg(row.front().second));
    }
    if (row.empty()) return;
    auto inv = f.inv(row.front().second);
    for (auto& [c, v] : row) v = f.mul(v, inv);
    pivot_rows.emplace(row.front().first, std::move(row));
  }

  void back_substitute() {
    for (auto it = pivot_rows.rbegin(); it != pivot_rows.rend(); ++it) {
      int col = it->first;
      for (auto& [pcol, prow] : pivot_rows) {
        if (pcol == col) continue;
        // eliminate col from prow if present
        auto found = std::lower_bound(prow.begin(), prow.end(), col,
                                      [](const auto& p, int c) { return p.first < c; });
        if (found == prow.end() || found->first != col) continue;
        prow = sparse_add(f, prow, it->second, f.neg(found->second));
      }
    }
  }
};

} // namespace detail

// Build the Manin-symbol presentation: quotient by x + xS and x + xT + xT^2,
// boundary map on Gamma_0(N)-cusp classes, star involution.
template <class F>
inline ModSymSpace<F> build_space(u64 N, F field) {
  ModSymSpace<F> sp(N, field);
  const F& f = sp.field;
  const P1Table& p1 = sp.p1;
  int n = p1.size();
  u64 ch = f.characteristic();

  // --- two-term relations x + xS = 0, S = [[0,-1],[1,0]] ---
  // pairs indices i <-> iS with x_{iS} = -x_i; S-fixed points give 2x = 0,
  // which kills the symbol except in characteristic 2.
  constexpr int kUnseen = -2, kKilled = -1;
  std::vector<int> srep(n, kUnseen);     // slot per index, or kKilled
  std::vector<bool> sneg(n, false);      // true: x_i = -x_slot
  std::vector<int> slot_gen;             // generator index per slot
  for (int i = 0; i < n; ++i) {
    if (srep[i] != kUnseen) continue;
    int j = p1.apply(i, 0, -1, 1, 0);
    if (j == i) {
      if (ch != 2) { srep[i] = kKilled; continue; }
      srep[i] = (int)slot_gen.size();
      slot_gen.push_back(i);
    } else {
      int slot = (int)slot_gen.size();
      slot_gen.push_back(i);
      srep[i] = slot;
      srep[j] = slot;
      sneg[j] = true;
    }
  }
  auto s_expr = [&](int i) -> std::pair<int, bool> {
    if (srep[i] == kKilled) return {-1, false};
    return {srep[i], sneg[i]};
  };

  // --- three-term relations x + xT + xT^2 = 0, T = [[0,-1],[1,-1]] ---
  detail::SparseRREF<F> elim(f);
  auto slot_term = [&](int idx) -> std::pair<int, typename F::Elt> {
    auto [slot, neg] = s_expr(idx);
    if (slot < 0) return {-1, f.zero()};
    return {slot, neg ? f.neg(f.one()) : f.one()};
  };
  for (int i = 0; i < n; ++i) {
    int it1 = p1.apply(i, 0, -1, 1, -1);
    int it2 = p1.apply(it1, 0, -1, 1, -1);
    std::map<int, typename F::Elt> acc;
    for (int idx : {i, it1, it2}) {
      auto [slot, coeff] = slot_term(idx);
      if (slot < 0) continue;
      auto itv = acc.find(slot);
      if (itv == acc.end()) acc.emplace(slot, coeff);
      else itv->second = f.add(itv->second, coeff);
    }
    SparseVec<F> row;
    for (auto& [slot, v] : acc)
      if (!f.is_zero(v)) row.push_back({slot, v});
    if (!row.empty()) elim.add_row(std::move(row));
  }
  elim.back_substitute();

  // --- quotient basis: non-pivot slots ---
  int nslots = (int)slot_gen.size();
  std::vector<int> slot_to_basis(nslots, -1);
  for (int s = 0; s < nslots; ++s) {
    if (elim.pivot_rows.count(s)) continue;
    slot_to_basis[s] = sp.dim++;
    sp.basis_gens.push_back(slot_gen[s]);
  }
  // slot expression over basis
  std::vector<SparseVec<F>> slot_expr(nslots);
  for (int s = 0; s < nslots; ++s) {
    if (slot_to_basis[s] >= 0) {
      slot_expr[s] = {{slot_to_basis[s], f.one()}};
      continue;
    }
    const auto& row = elim.pivot_rows.at(s);
    SparseVec<F> e;
    for (auto& [c, v] : row) {
      if (c == s) continue;
      if (slot_to_basis[c] < 0) throw std::logic_error("build_space: rref not reduced");
      e.push_back({slot_to_basis[c], f.neg(v)});
    }
    std::sort(e.begin(), e.end());
    slot_expr[s] = std::move(e);
  }
  sp.gtb.resize(n);
  for (int i = 0; i < n; ++i) {
    auto [slot, neg] = s_expr(i);
    if (slot < 0) continue;
    sp.gtb[i] = slot_expr[slot];
    if (neg)
      for (auto& [c, v] : sp.gtb[i]) v = f.neg(v);
  }

  // --- boundary map on cusp classes ---
  auto cusp_class = [&](const Cusp& cu) -> int {
    for (size_t k = 0; k < sp.cusps.size(); ++k)
      if (cusps_equivalent(sp.cusps[k], cu, N)) return (int)k;
    sp.cusps.push_back(cu);
    return (int)sp.cusps.size() - 1;
  };
  std::vector<std::pair<int, int>> gen_boundary(n);  // (class of gamma(inf), class of gamma(0))
  for (int i = 0; i < n; ++i) {
    auto [c, d] = p1.rep(i);
    auto [a, b, cc, dd] = lift_to_sl2(N, c, d);
    gen_boundary[i] = {cusp_class(Cusp(a, cc)), cusp_class(Cusp(b, dd))};
  }
  sp.boundary = Mat<F>(f, (int)sp.cusps.size(), sp.dim);
  for (int j = 0; j < sp.dim; ++j) {
    auto [ci, cj] = gen_boundary[sp.basis_gens[j]];
    sp.boundary.at(ci, j) = f.add(sp.boundary.at(ci, j), f.one());
    sp.boundary.at(cj, j) = f.sub(sp.boundary.at(cj, j), f.one());
  }
  sp.cuspidal = kernel_basis(f, sp.boundary);

  // --- star involution: (c : d) -> (-c : d) ---
  sp.star = Mat<F>(f, sp.dim, sp.dim);
  for (int j = 0; j < sp.dim; ++j) {
    auto [c, d] = p1.rep(sp.basis_gens[j]);
    int si = p1.index(-(i64)c, (i64)d);
    for (auto& [row, v] : sp.gtb[si]) sp.star.at(row, j) = v;
  }
  sp.star_indecomposable = (ch == 2);
  return sp;
}

// Expression of the modular symbol {x1/y1, x2/y2} (a unimodular path) in the
// quotient.  Requires x2 y1 - x1 y2 = +-1.
template <class F>
inline SparseVec<F> unimodular_path(const ModSymSpace<F>& sp, i64 x1, i64 y1, i64 x2, i64 y2) {
  i64 det = x2 * y1 - x1 * y2;
  const F& f = sp.field;
  if (det == 1) {
    int idx = sp.p1.index(y2, y1);
    if (idx < 0) throw std::logic_error("unimodular_path: invalid symbol");
    return sp.gtb[idx];
  }
  if (det == -1) {
    int idx = sp.p1.index(y1, y2);
    if (idx < 0) throw std::logic_error("unimodular_path: invalid symbol");
    SparseVec<F> e = sp.gtb[idx];
    for (auto& [c, v] : e) v = f.neg(v);
    return e;
  }
  throw std::invalid_argument("unimodular_path: path is not unimodular");
}

// {infinity, a/b} via continued-fraction convergents.
template <class F>
inline SparseVec<F> path_from_infinity(const ModSymSpace<F>& sp, i64 a, i64 b) {
  const F& f = sp.field;
  SparseVec<F> acc;
  if (b == 0) return acc;  // {inf, inf} = 0
  i64 g = std::gcd(std::llabs(a), std::llabs(b));
  if (g > 1) { a /= g; b /= g; }
  if (b < 0) { a = -a; b = -b; }
  // convergents p_k/q_k of a/b, with p_{-1}/q_{-1} = 1/0
  i64 pm1 = 1, qm1 = 0;
  i64 x = a, y = b;
  i64 p0 = 0, q0 = 0;
  bool first = true;
  while (true) {
    i64 fl = (x >= 0) ? x / y : -((-x + y - 1) / y);  // floor division
    i64 pk = first ? fl : fl * p0 + pm1;
    i64 qk = first ? 1 : fl * q0 + qm1;
    if (!first) { pm1 = p0; qm1 = q0; }
    acc = sparse_add(f, acc, unimodular_path(sp, pm1, qm1, pk, qk), f.one());
    p0 = pk; q0 = qk;
    first = false;
    i64 rem = x - fl * y;
    if (rem == 0) break;
    x = y;
    y = rem;
  }
  return acc;
}

// Modular symbol {alpha, beta} with endpoints given as fractions (num, den);
// den = 0 encodes infinity.
template <class F>
inline SparseVec<F> modular_symbol(const ModSymSpace<F>& sp, i64 a1, i64 b1, i64 a2, i64 b2) {
  const F& f = sp.field;
  auto right = path_from_infinity(sp, a2, b2);
  auto left = path_from_infinity(sp, a1, b1);
  return sparse_add(f, right, left, f.neg(f.one()));
}

// Hecke operator on the full quotient: T_q (q prime, q not dividing N) via
// Merel's Heilbronn family; U_q (q | N) via the coset definition.
template <class F>
inline Mat<F> hecke_on_quotient(const ModSymSpace<F>& sp, u64 q) {
  if (!is_prime(q)) throw std::invalid_argument("hecke_matrix: q must be prime");
  const F& f = sp.field;
  Mat<F> M(f, sp.dim, sp.dim);
  if (sp.N % q != 0) {
    const auto& family = heilbronn_merel(q);
    for (int j = 0; j < sp.dim; ++j) {
      int gen = sp.basis_gens[j];
      for (const auto& h : family) {
        int img = sp.p1.apply(gen, h.a, h.b, h.c, h.d);
        if (img < 0) continue;
        for (auto& [row, v] : sp.gtb[img]) M.at(row, j) = f.add(M.at(row, j), v);
      }
    }
  } else {
    // U_q {a, b} = sum_k [1, k; 0, q] {a, b}
    for (int j = 0; j < sp.dim; ++j) {
      auto [c, d] = sp.p1.rep(sp.basis_gens[j]);
      auto [aa, bb, c0, d0] = lift_to_sl2(sp.N, c, d);
      // basis symbol is {bb/d0, aa/c0}
      for (u64 k = 0; k < q; ++k) {
        i64 n1 = bb + (i64)k * d0, m1 = (i64)q * d0;
        i64 n2 = aa + (i64)k * c0, m2 = (i64)q * c0;
        auto e = modular_symbol(sp, n1, m1, n2, m2);
        for (auto& [row, v] : e) M.at(row, j) = f.add(M.at(row, j), v);
      }
    }
  }
  return M;
}

// Labelled Hecke matrix restricted to the cuspidal subspace.
template <class F>
struct HeckeMatrix {
  u64 q = 2;
  bool is_uq = false;
  Mat<F> mat;  // acting on cuspidal coordinates
};

template <class F>
inline HeckeMatrix<F> hecke_matrix(const ModSymSpace<F>& sp, u64 q) {
  const F& f = sp.field;
  Mat<F> M = hecke_on_quotient(sp, q);
  Mat<F> MC = mat_mul(f, M, sp.cuspidal);
  HeckeMatrix<F> out;
  out.q = q;
  out.is_uq = (sp.N % q == 0);
  out.mat = solve_in_column_space(f, sp.cuspidal, MC);
  return out;
}

// Apply a Hecke operator to a single vector in cuspidal coordinates without
// forming the full matrix; used when extending eigenvalues to large q.
template <class F>
inline std::vector<typename F::Elt> hecke_apply_cuspidal(const ModSymSpace<F>& sp, u64 q,
                                                         const std::vector<typename F::Elt>& v) {
  const F& f = sp.field;
  // quotient coordinates of v
  std::vector<typename F::Elt> w(sp.dim, f.zero());
  for (int i = 0; i < sp.dim; ++i)
    for (int k = 0; k < sp.cuspidal.nc; ++k)
      if (!f.is_zero(sp.cuspidal.at(i, k)))
        w[i] = f.add(w[i], f.mul(sp.cuspidal.at(i, k), v[k]));
  std::vector<typename F::Elt> img(sp.dim, f.zero());
  if (sp.N % q != 0) {
    const auto& family = heilbronn_merel(q);
    for (int j = 0; j < sp.dim; ++j) {
      if (f.is_zero(w[j])) continue;
      int gen = sp.basis_gens[j];
      for (const auto& h : family) {
        int t = sp.p1.apply(gen, h.a, h.b, h.c, h.d);
        if (t < 0) continue;
        for (auto& [row, c] : sp.gtb[t]) img[row] = f.add(img[row], f.mul(c, w[j]));
      }
    }
  } else {
    Mat<F> M = hecke_on_quotient(sp, q);
    for (int i = 0; i < sp.dim; ++i)
      for (int j = 0; j < sp.dim; ++j)
        if (!f.is_zero(M.at(i, j)) && !f.is_zero(w[j]))
          img[i] = f.add(img[i], f.mul(M.at(i, j), w[j]));
  }
  // back to cuspidal coordinates
  Mat<F> rhs(f, sp.dim, 1);
  for (int i = 0; i < sp.dim; ++i) rhs.at(i, 0) = img[i];
  Mat<F> sol = solve_in_column_space(f, sp.cuspidal, rhs);
  std::vector<typename F::Elt> out(sp.cuspidal.nc);
  for (int k = 0; k < sp.cuspidal.nc; ++k) out[k] = sol.at(k, 0);
  return out;
}

// Star decomposition of the cuspidal subspace.  In characteristic 2 the
// involution does not split the space; the whole space is returned flagged.
template <class F>
struct StarDecomposition {
  bool split = false;
  Mat<F> plus;   // dim x k bases in quotient coordinates
  Mat<F> minus;
};

template <class F>
inline StarDecomposition<F> star_decompose(const ModSymSpace<F>& sp) {
  const F& f = sp.field;
  StarDecomposition<F> out;
  if (sp.star_indecomposable) {
    out.split = false;
    out.plus = sp.cuspidal;
    out.minus = Mat<F>(f, sp.dim, 0);
    return out;
  }
  Mat<F> SC = solve_in_column_space(f, sp.cuspidal, mat_mul(f, sp.star, sp.cuspidal));
  int k = SC.nr;
  Mat<F> plus_k = SC, minus_k = SC;
  for (int i = 0; i < k; ++i) {
    plus_k.at(i, i) = f.sub(plus_k.at(i, i), f.one());
    minus_k.at(i, i) = f.add(minus_k.at(i, i), f.one());
  }
  out.split = true;
  out.plus = mat_mul(f, sp.cuspidal, kernel_basis(f, plus_k));
  out.minus = mat_mul(f, sp.cuspidal, kernel_basis(f, minus_k));
  return out;
}

} // namespace galwit
