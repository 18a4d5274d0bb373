#pragma once

// Classification of finite subgroups of PGL_2(F_(l^t)) after Dickson:
// materialize the projective closure of a generating set, then decide
// borel / cyclic / dihedral / A4 / S4 / A5 / PSL_2(F_(l^r)) / PGL_2(F_(l^r)).
// Also the heuristic image classifier for mod-l eigensystems.

#include "galwit/eigen.hpp"
#include "galwit/ffield.hpp"

#include <deque>
#include <map>
#include <string>
#include <unordered_set>

namespace galwit {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2x2 matrix over a finite field, entries row-major.
struct FFMat2 {
  std::array<FiniteField::V, 4> e;

  bool operator==(const FFMat2&) const = default;
};

inline FFMat2 mat2_mul(const FiniteField& K, const FFMat2& x, const FFMat2& y) {
  FFMat2 r;
  r.e[0] = K.add(K.mul(x.e[0], y.e[0]), K.mul(x.e[1], y.e[2]));
  r.e[1] = K.add(K.mul(x.e[0], y.e[1]), K.mul(x.e[1], y.e[3]));
  r.e[2] = K.add(K.mul(x.e[2], y.e[0]), K.mul(x.e[3], y.e[2]));
  r.e[3] = K.add(K.mul(x.e[2], y.e[1]), K.mul(x.e[3], y.e[3]));
  return r;
}

inline FiniteField::V mat2_det(const FiniteField& K, const FFMat2& m) {
  return K.sub(K.mul(m.e[0], m.e[3]), K.mul(m.e[1], m.e[2]));
}

inline FiniteField::V mat2_trace(const FiniteField& K, const FFMat2& m) {
  return K.add(m.e[0], m.e[3]);
}

// canonical projective form: scale so the first nonzero entry equals 1
inline FFMat2 projective_normalize(const FiniteField& K, const FFMat2& m) {
  for (int i = 0; i < 4; ++i) {
    if (!K.is_zero(m.e[i])) {
      FiniteField::V inv = K.inv(m.e[i]);
      FFMat2 r;
      for (int j = 0; j < 4; ++j) r.e[j] = K.mul(m.e[j], inv);
      return r;
    }
  }
  throw std::invalid_argument("projective_normalize: zero matrix");
}

inline std::string mat2_key(const FiniteField& K, const FFMat2& m) {
  std::string s;
  for (int i = 0; i < 4; ++i) {
    s += K.str(m.e[i]);
    s += '|';
  }
  return s;
}

struct MatrixGroup {
  FiniteFieldPtr field;
  std::vector<FFMat2> generators;
};

inline FFMat2 mat2_identity(const FiniteField& K) {
  return {K.one(), K.zero(), K.zero(), K.one()};
}

inline bool mat2_invertible(const FiniteField& K, const FFMat2& m) {
  return !K.is_zero(mat2_det(K, m));
}

// Breadth-first closure of the generators modulo scalars.  The guard bounds
// the ambient |PGL_2| = l^t (l^t - 1)(l^t + 1).
inline std::vector<FFMat2> projective_closure(const MatrixGroup& g, u64 guard = 1000000) {
  const FiniteField& K = *g.field;
  u64 s = K.size();
  u64 ambient = s * (s - 1) * (s + 1);
  if (ambient > guard) throw ResourceError("projective_closure: ambient PGL_2 larger than the guard");
  std::vector<FFMat2> gens;
  for (const auto& m : g.generators) {
    if (!mat2_invertible(K, m)) throw std::invalid_argument("projective_closure: singular generator");
    gens.push_back(projective_normalize(K, m));
  }
  std::vector<FFMat2> elements{mat2_identity(K)};
  std::unordered_set<std::string> seen{mat2_key(K, elements[0])};
  std::deque<FFMat2> work(elements.begin(), elements.end());
  while (!work.empty()) {
    FFMat2 x = work.front();
    work.pop_front();
    for (const auto& h : gens) {
      FFMat2 y = projective_normalize(K, mat2_mul(K, x, h));
      auto key = mat2_key(K, y);
      if (seen.insert(key).second) {
        elements.push_back(y);
        work.push_back(y);
        if (elements.size() > ambient) throw std::logic_error("projective_closure: exceeded ambient order");
      }
    }
  }
  return elements;
}

// projective order of a normalized element
inline u64 projective_order(const FiniteField& K, const FFMat2& m) {
  FFMat2 id = mat2_identity(K);
  FFMat2 x = projective_normalize(K, m);
  u64 k = 1;
  FFMat2 acc = x;
  while (!(acc == id)) {
    acc = projective_normalize(K, mat2_mul(K, acc, x));
    ++k;
    if (k > K.size() * (K.size() + 1)) throw std::logic_error("projective_order: runaway");
  }
  return k;
}

struct ImageClass {
  enum class Kind { borel, cyclic, dihedral, a4, s4, a5, psl, pgl };
  Kind kind = Kind::cyclic;
  unsigned r = 0;                   // subfield degree for psl/pgl
  u64 n = 0;                        // order parameter: cyclic order, or D_n
  std::string confidence = "rigorous";
  std::map<u64, u64> order_profile; // projective element order -> count
};

inline const char* to_string(ImageClass::Kind k) {
  switch (k) {
    case ImageClass::Kind::borel: return "borel";
    case ImageClass::Kind::cyclic: return "cyclic";
    case ImageClass::Kind::dihedral: return "dihedral";
    case ImageClass::Kind::a4: return "A4";
    case ImageClass::Kind::s4: return "S4";
    case ImageClass::Kind::a5: return "A5";
    case ImageClass::Kind::psl: return "PSL";
    default: return "PGL";
  }
}

namespace detail {

// common projective eigenline over the quadratic extension
inline bool has_common_eigenline(const MatrixGroup& g) {
  const FiniteField& K = *g.field;
  auto big = make_field(K.p, 2 * K.r);
  Embedding emb(K, big);
  ExtField E(big);
  // embedded generators
  std::vector<FFMat2> gens;
  for (const auto& m : g.generators) {
    FFMat2 me;
    for (int i = 0; i < 4; ++i) me.e[i] = emb(m.e[i]);
    gens.push_back(me);
  }
  // find the first non-scalar generator
  auto is_scalar = [&](const FFMat2& m) {
    return big->is_zero(m.e[1]) && big->is_zero(m.e[2]) && m.e[0] == m.e[3];
  };
  int pivot = -1;
  for (size_t i = 0; i < gens.size(); ++i)
    if (!is_scalar(gens[i])) { pivot = (int)i; break; }
  if (pivot < 0) return true;  // projectively trivial group fixes everything
  // eigenvalues of the pivot from x^2 - tr x + det
  const FFMat2& P = gens[pivot];
  PolyV<ExtField> cp{mat2_det(*big, P), big->neg(mat2_trace(*big, P)), big->one()};
  auto roots = ff_roots(E, cp);
  for (const auto& lam : roots) {
    // eigenvector of P for lam: rows of (P - lam) give the orthogonal form
    FiniteField::V vx, vy;
    if (!big->is_zero(P.e[1])) {
      vx = P.e[1];
      vy = big->sub(lam, P.e[0]);
    } else if (!big->is_zero(P.e[2])) {
      vx = big->sub(lam, P.e[3]);
      vy = P.e[2];
    } else {
      // diagonal pivot: eigenvectors are the coordinate axes
      vx = (P.e[0] == lam) ? big->one() : big->zero();
      vy = (P.e[0] == lam) ? big->zero() : big->one();
    }
    bool all = true;
    for (const auto& m : gens) {
      FiniteField::V wx = big->add(big->mul(m.e[0], vx), big->mul(m.e[1], vy));
      FiniteField::V wy = big->add(big->mul(m.e[2], vx), big->mul(m.e[3], vy));
      // w parallel to v: wx*vy == wy*vx
      if (!(big->mul(wx, vy) == big->mul(wy, vx))) { all = false; break; }
    }
    if (all) return true;
  }
  return false;
}

inline std::vector<FFMat2> subgroup_closure(const FiniteField& K, std::vector<FFMat2> seeds,
                                            u64 limit) {
  std::vector<FFMat2> elements{mat2_identity(K)};
  std::unordered_set<std::string> seen{mat2_key(K, elements[0])};
  for (auto& s : seeds) {
    auto n = projective_normalize(K, s);
    if (seen.insert(mat2_key(K, n)).second) elements.push_back(n);
  }
  size_t cursor = 0;
  while (cursor < elements.size()) {
    FFMat2 x = elements[cursor++];
    for (auto& s : seeds) {
      FFMat2 y = projective_normalize(K, mat2_mul(K, x, projective_normalize(K, s)));
      if (seen.insert(mat2_key(K, y)).second) {
        elements.push_back(y);
        if (elements.size() > limit) throw std::logic_error("subgroup_closure: limit exceeded");
      }
    }
  }
  return elements;
}

inline FFMat2 mat2_inverse(const FiniteField& K, const FFMat2& m) {
  FiniteField::V det = mat2_det(K, m);
  FiniteField::V inv = K.inv(det);
  return {K.mul(m.e[3], inv), K.mul(K.neg(m.e[1]), inv), K.mul(K.neg(m.e[2]), inv),
          K.mul(m.e[0], inv)};
}

// derived subgroup of the materialized closure (normal closure of the
// commutators of the generators)
inline std::vector<FFMat2> derived_subgroup(const MatrixGroup& g, u64 limit) {
  const FiniteField& K = *g.field;
  std::vector<FFMat2> gens;
  for (auto& m : g.generators) gens.push_back(projective_normalize(K, m));
  std::vector<FFMat2> seeds;
  for (auto& a : gens)
    for (auto& b : gens) {
      FFMat2 comm = mat2_mul(K, mat2_mul(K, a, b),
                             mat2_mul(K, mat2_inverse(K, a), mat2_inverse(K, b)));
      seeds.push_back(projective_normalize(K, comm));
    }
  while (true) {
    auto closure = subgroup_closure(K, seeds, limit);
    // close under conjugation by the group generators
    std::unordered_set<std::string> seen;
    for (auto& x : closure) seen.insert(mat2_key(K, x));
    bool stable = true;
    for (auto& x : closure) {
      for (auto& h : gens) {
        FFMat2 conj = mat2_mul(K, mat2_mul(K, mat2_inverse(K, h), x), h);
        conj = projective_normalize(K, conj);
        if (!seen.count(mat2_key(K, conj))) {
          seeds.push_back(conj);
          stable = false;
        }
      }
      if (!stable) break;
    }
    if (stable) return closure;
  }
}

} // namespace detail

// Decision procedure per Dickson's classification.  Exact for any group whose
// projective closure fits under the guard.
inline ImageClass classify(const MatrixGroup& g, u64 guard = 1000000) {
  const FiniteField& K = *g.field;
  u64 l = K.p;
  unsigned t = K.r;
  auto elements = projective_closure(g, guard);
  u64 n = elements.size();

  ImageClass out;
  for (const auto& m : elements) out.order_profile[projective_order(K, m)]++;
  u64 max_order = out.order_profile.rbegin()->first;

  if (n == 1) {
    out.kind = ImageClass::Kind::cyclic;
    out.n = 1;
    return out;
  }
  // cyclic: some element generates everything
  if (max_order == n) {
    out.kind = ImageClass::Kind::cyclic;
    out.n = n;
    return out;
  }
  // borel: a common eigenline over the quadratic extension (non-cyclic case)
  if (detail::has_common_eigenline(g)) {
    out.kind = ImageClass::Kind::borel;
    out.n = n;
    return out;
  }
  // abelian irreducible: the Klein four group, which is D_2
  bool abelian = true;
  for (size_t i = 0; i < g.generators.size() && abelian; ++i)
    for (size_t j = i + 1; j < g.generators.size() && abelian; ++j) {
      auto xy = projective_normalize(K, mat2_mul(K, g.generators[i], g.generators[j]));
      auto yx = projective_normalize(K, mat2_mul(K, g.generators[j], g.generators[i]));
      if (!(xy == yx)) abelian = false;
    }
  if (abelian) {
    if (n != 4) throw std::logic_error("classify: abelian irreducible group of unexpected order");
    out.kind = ImageClass::Kind::dihedral;
    out.n = 2;
    return out;
  }
  // the order-6 nonabelian group over F_2 is PGL_2(F_2) itself
  if (l == 2 && n == 6) {
    out.kind = ImageClass::Kind::pgl;
    out.r = 1;
    return out;
  }
  // dihedral: a cyclic subgroup of index 2 (an element of order n/2)
  if (n % 2 == 0 && out.order_profile.count(n / 2) && n >= 6) {
    out.kind = ImageClass::Kind::dihedral;
    out.n = n / 2;
    if (out.n % l == 0) throw std::logic_error("classify: dihedral parameter divisible by l");
    return out;
  }
  // exceptional subgroups by exact order profile
  auto profile_is = [&](std::map<u64, u64> expect) { return out.order_profile == expect; };
  if (n == 12 && profile_is({{1, 1}, {2, 3}, {3, 8}})) {
    out.kind = ImageClass::Kind::a4;
    return out;
  }
  if (n == 24 && profile_is({{1, 1}, {2, 9}, {3, 8}, {4, 6}})) {
    out.kind = ImageClass::Kind::s4;
    return out;
  }
  if (n == 60 && profile_is({{1, 1}, {2, 15}, {3, 20}, {5, 24}})) {
    out.kind = ImageClass::Kind::a5;
    return out;
  }
  // PSL / PGL over subfields, smallest degree first
  for (unsigned r = 1; r <= t; ++r) {
    if (t % r != 0) continue;
    u64 s = 1;
    for (unsigned i = 0; i < r; ++i) s *= l;
    u64 pgl_order = s * (s - 1) * (s + 1);
    u64 psl_order = (l == 2) ? pgl_order : pgl_order / 2;
    if (n == psl_order && l != 2) {
      auto derived = detail::derived_subgroup(g, guard);
      if (derived.size() == n) {  // perfect: PSL_2 is simple here
        out.kind = ImageClass::Kind::psl;
        out.r = r;
        // PSL witness: every generator determinant is a square in F_(l^t)
        // (the class mod squares is scalar-invariant)
        for (const auto& m : g.generators) {
          FiniteField::V det = mat2_det(K, m);
          if (!K.eq(K.pow(det, (K.size() - 1) / 2), K.one()))
            throw std::logic_error("classify: PSL determinant witness failed");
        }
        return out;
      }
    }
    if (n == pgl_order) {
      auto derived = detail::derived_subgroup(g, guard);
      bool ok = (l == 2) ? derived.size() == n : 2 * derived.size() == n;
      if (ok) {
        out.kind = ImageClass::Kind::pgl;
        out.r = r;
        return out;
      }
    }
  }
  throw std::logic_error("classify: no Dickson case matched (internal inconsistency)");
}

// ---------------------------------------------------------------------------
// Heuristic image classification from mod-l eigensystem statistics.

struct EigenImageReport {
  ImageClass cls;
  bool reducible_screen = false;       // a_q = 1 + q at every prime up to Sturm
  bool dihedral_screen = false;        // zero-trace fraction at dihedral levels
  double zero_fraction = 0.0;
  u64 primes_scanned = 0;
};

// The screen fires when at least this fraction of traces vanish (a projective
// dihedral image forces trace zero with density >= 1/2).
inline constexpr double kDihedralZeroFractionThreshold = 0.4;

inline EigenImageReport eigen_image_heuristic(const CharPSystem& sys, u64 N) {
  EigenImageReport rep;
  u64 l = sys.p;
  const FiniteField& K = *sys.field;

  // reducibility screen: Eisenstein congruence up to the Sturm bound
  bool reducible = true;
  for (u64 q : primes_below(sturm_bound(N) + 1)) {
    if (N % q == 0 || q == l) continue;
    auto it = sys.aq.find(q);
    if (it == sys.aq.end()) continue;
    if (!(it->second == K.from_int((i64)(1 + q)))) { reducible = false; break; }
  }
  rep.reducible_screen = reducible;

  u64 zeros = 0, scanned = 0;
  for (auto& [q, v] : sys.aq) {
    if (N % q == 0 || q == l) continue;
    ++scanned;
    if (K.is_zero(v)) ++zeros;
  }
  rep.primes_scanned = scanned;
  rep.zero_fraction = scanned ? (double)zeros / (double)scanned : 0.0;
  rep.dihedral_screen = rep.zero_fraction >= kDihedralZeroFractionThreshold;

  rep.cls.confidence = "heuristic";
  rep.cls.r = sys.r;
  if (rep.reducible_screen) {
    rep.cls.kind = ImageClass::Kind::borel;
  } else if (rep.dihedral_screen) {
    rep.cls.kind = ImageClass::Kind::dihedral;
  } else if (l == 2 || sys.r % 2 == 0) {
    // determinants are squares: cyclotomic values land in the even-degree
    // field (or everything is a square in characteristic 2)
    rep.cls.kind = ImageClass::Kind::psl;
  } else {
    rep.cls.kind = ImageClass::Kind::pgl;
  }
  return rep;
}

} // namespace galwit
