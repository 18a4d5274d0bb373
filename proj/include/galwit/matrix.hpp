#pragma once

// Dense exact linear algebra over a field context: elimination, kernels,
// characteristic polynomials (Hessenberg), restriction of an operator to an
// invariant subspace.  Everything is exact; no floating point.

#include "galwit/poly.hpp"

#include <cassert>
#include <stdexcept>
#include <vector>

namespace galwit {

template <class F>
struct Mat {
  using Elt = typename F::Elt;
  int nr = 0, nc = 0;
  std::vector<Elt> a;

  Mat() = default;
  Mat(const F& f, int r, int c) : nr(r), nc(c), a((size_t)r * c, f.zero()) {}

  Elt& at(int i, int j) { return a[(size_t)i * nc + j]; }
  const Elt& at(int i, int j) const { return a[(size_t)i * nc + j]; }

  static Mat identity(const F& f, int n) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
  }
};

template <class F>
inline bool mat_eq(const F& f, const Mat<F>& A, const Mat<F>& B) {
  if (A.nr != B.nr || A.nc != B.nc) return false;
  for (size_t i = 0; i < A.a.size(); ++i)
    if (!f.eq(A.a[i], B.a[i])) return false;
  return true;
}

template <class F>
inline Mat<F> mat_mul(const F& f, const Mat<F>& A, const Mat<F>& B) {
  if (A.nc != B.nr) throw std::invalid_argument("mat_mul: shape mismatch");
  Mat<F> C(f, A.nr, B.nc);
  for (int i = 0; i < A.nr; ++i)
    for (int k = 0; k < A.nc; ++k) {
      const auto& aik = A.at(i, k);
      if (f.is_zero(aik)) continue;
      for (int j = 0; j < B.nc; ++j)
        C.at(i, j) = f.add(C.at(i, j), f.mul(aik, B.at(k, j)));
    }
  return C;
}

template <class F>
inline Mat<F> mat_add(const F& f, const Mat<F>& A, const Mat<F>& B) {
  Mat<F> C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = f.add(C.a[i], B.a[i]);
  return C;
}

template <class F>
inline Mat<F> mat_sub(const F& f, const Mat<F>& A, const Mat<F>& B) {
  Mat<F> C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = f.sub(C.a[i], B.a[i]);
  return C;
}

template <class F>
inline Mat<F> mat_scale(const F& f, const Mat<F>& A, const typename F::Elt& c) {
  Mat<F> C = A;
  for (auto& x : C.a) x = f.mul(x, c);
  return C;
}

template <class F>
inline std::vector<typename F::Elt> mat_apply(const F& f, const Mat<F>& A,
                                              const std::vector<typename F::Elt>& v) {
  if ((int)v.size() != A.nc) throw std::invalid_argument("mat_apply: shape mismatch");
  std::vector<typename F::Elt> r(A.nr, f.zero());
  for (int i = 0; i < A.nr; ++i)
    for (int j = 0; j < A.nc; ++j)
      if (!f.is_zero(A.at(i, j))) r[i] = f.add(r[i], f.mul(A.at(i, j), v[j]));
  return r;
}

// In-place reduced row echelon form; returns pivot columns.
template <class F>
inline std::vector<int> rref_in_place(const F& f, Mat<F>& A) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < A.nc && row < A.nr; ++col) {
    int sel = -1;
    for (int i = row; i < A.nr; ++i)
      if (!f.is_zero(A.at(i, col))) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != row)
      for (int j = 0; j < A.nc; ++j) std::swap(A.at(sel, j), A.at(row, j));
    auto inv = f.inv(A.at(row, col));
    for (int j = col; j < A.nc; ++j) A.at(row, j) = f.mul(A.at(row, j), inv);
    for (int i = 0; i < A.nr; ++i) {
      if (i == row || f.is_zero(A.at(i, col))) continue;
      auto c = A.at(i, col);
      for (int j = col; j < A.nc; ++j)
        A.at(i, j) = f.sub(A.at(i, j), f.mul(c, A.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class F>
inline int mat_rank(const F& f, Mat<F> A) {
  return (int)rref_in_place(f, A).size();
}

// Kernel of A as a matrix whose columns form a basis of {x : Ax = 0}.
template <class F>
inline Mat<F> kernel_basis(const F& f, Mat<F> A) {
  int n = A.nc;
  auto pivots = rref_in_place(f, A);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Mat<F> K(f, n, (int)free_cols.size());
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    K.at(fc, (int)k) = f.one();
    for (size_t r = 0; r < pivots.size(); ++r)
      K.at(pivots[r], (int)k) = f.neg(A.at((int)r, fc));
  }
  return K;
}

// Solve B * X = M where the columns of B are independent; throws if some
// column of M is outside the column space.  Used to restrict an operator to
// an invariant subspace: X = restriction matrix.
template <class F>
inline Mat<F> solve_in_column_space(const F& f, const Mat<F>& B, const Mat<F>& M) {
  if (B.nr != M.nr) throw std::invalid_argument("solve_in_column_space: shape mismatch");
  Mat<F> aug(f, B.nr, B.nc + M.nc);
  for (int i = 0; i < B.nr; ++i) {
    for (int j = 0; j < B.nc; ++j) aug.at(i, j) = B.at(i, j);
    for (int j = 0; j < M.nc; ++j) aug.at(i, B.nc + j) = M.at(i, j);
  }
  auto pivots = rref_in_place(f, aug);
  // every pivot must be inside the B block, one per column
  int rank_b = 0;
  for (int c : pivots)
    if (c < B.nc) ++rank_b;
  if (rank_b != B.nc) throw std::invalid_argument("solve_in_column_space: B columns dependent");
  for (int c : pivots)
    if (c >= B.nc) throw std::domain_error("solve_in_column_space: inconsistent system");
  Mat<F> X(f, B.nc, M.nc);
  for (int r = 0; r < B.nc; ++r)
    for (int j = 0; j < M.nc; ++j) X.at(r, j) = aug.at(r, B.nc + j);
  return X;
}

// Characteristic polynomial det(xI - A) via Hessenberg reduction; exact over
// any field.  Coefficients low to high, monic of degree n.
template <class F>
inline PolyV<F> charpoly_hessenberg(const F& f, Mat<F> H) {
  if (H.nr != H.nc) throw std::invalid_argument("charpoly: square matrix required");
  int n = H.nr;
  // similarity reduction to upper Hessenberg form
  for (int j = 0; j + 2 < n; ++j) {
    int sel = -1;
    for (int i = j + 1; i < n; ++i)
      if (!f.is_zero(H.at(i, j))) { sel = i; break; }
    if (sel < 0) continue;
    if (sel != j + 1) {
      for (int k = 0; k < n; ++k) std::swap(H.at(sel, k), H.at(j + 1, k));
      for (int k = 0; k < n; ++k) std::swap(H.at(k, sel), H.at(k, j + 1));
    }
    auto inv = f.inv(H.at(j + 1, j));
    for (int i = j + 2; i < n; ++i) {
      if (f.is_zero(H.at(i, j))) continue;
      auto t = f.mul(H.at(i, j), inv);
      for (int k = 0; k < n; ++k) H.at(i, k) = f.sub(H.at(i, k), f.mul(t, H.at(j + 1, k)));
      for (int k = 0; k < n; ++k) H.at(k, j + 1) = f.add(H.at(k, j + 1), f.mul(t, H.at(k, i)));
    }
  }
  // expand det(xI - H) along the last row of leading minors
  std::vector<PolyV<F>> p(n + 1);
  p[0] = {f.one()};
  for (int m = 1; m <= n; ++m) {
    // p_m = (x - H[m-1][m-1]) p_{m-1} - sum_i H[m-1-i][m-1] (prod subdiag) p_{m-1-i}
    PolyV<F> xm{f.neg(H.at(m - 1, m - 1)), f.one()};
    p[m] = poly_mul(f, xm, p[m - 1]);
    auto prod = f.one();
    for (int i = 1; i < m; ++i) {
      prod = f.mul(prod, H.at(m - i, m - i - 1));
      if (f.is_zero(prod)) break;
      auto coeff = f.mul(H.at(m - 1 - i, m - 1), prod);
      if (f.is_zero(coeff)) continue;
      PolyV<F> term = poly_scale(f, p[m - 1 - i], coeff);
      p[m] = poly_sub(f, p[m], term);
    }
  }
  // charpoly has full degree n even if leading cancellations occurred above
  PolyV<F> out = p[n];
  out.resize(n + 1, f.zero());
  return out;
}

// Evaluate a polynomial at a matrix (Horner).
template <class F>
inline Mat<F> mat_poly_eval(const F& f, const PolyV<F>& poly, const Mat<F>& A) {
  int n = A.nr;
  Mat<F> R(f, n, n);
  if (poly.empty()) return R;
  for (int i = 0; i < n; ++i) R.at(i, i) = poly.back();
  for (size_t k = poly.size() - 1; k-- > 0;) {
    R = mat_mul(f, R, A);
    for (int i = 0; i < n; ++i) R.at(i, i) = f.add(R.at(i, i), poly[k]);
  }
  return R;
}

} // namespace galwit
