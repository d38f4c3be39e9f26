#include "sbf/snf.hpp"

#include "sbf/error.hpp"

#include <utility>

namespace sbf {

namespace {

struct Work {
  const Ring& R;
  Mat A, U, V;

  void row_swap(int a, int b) {
    for (int j = 0; j < A.cols; ++j) std::swap(A(a, j), A(b, j));
    for (int j = 0; j < U.cols; ++j) std::swap(U(a, j), U(b, j));
  }
  void col_swap(int a, int b) {
    for (int i = 0; i < A.rows; ++i) std::swap(A(i, a), A(i, b));
    for (int i = 0; i < V.rows; ++i) std::swap(V(i, a), V(i, b));
  }
  // row t -= q row s
  void row_axpy(int t, int s, RElem q) {
    if (R.is_zero(q)) return;
    for (int j = 0; j < A.cols; ++j) A(t, j) = R.sub(A(t, j), R.mul(q, A(s, j)));
    for (int j = 0; j < U.cols; ++j) U(t, j) = R.sub(U(t, j), R.mul(q, U(s, j)));
  }
  // col t -= q col s
  void col_axpy(int t, int s, RElem q) {
    if (R.is_zero(q)) return;
    for (int i = 0; i < A.rows; ++i) A(i, t) = R.sub(A(i, t), R.mul(q, A(i, s)));
    for (int i = 0; i < V.rows; ++i) V(i, t) = R.sub(V(i, t), R.mul(q, V(i, s)));
  }
  void row_scale(int t, const RElem& u) {
    for (int j = 0; j < A.cols; ++j) A(t, j) = R.mul(u, A(t, j));
    for (int j = 0; j < U.cols; ++j) U(t, j) = R.mul(u, U(t, j));
  }

  // Move a minimal-norm entry of the trailing block to (k, k).
  bool move_min_to(int k) {
    int pi = -1, pj = -1;
    Int best;
    for (int i = k; i < A.rows; ++i)
      for (int j = k; j < A.cols; ++j) {
        if (R.is_zero(A(i, j))) continue;
        Int n = R.euclid_norm(A(i, j));
        if (pi < 0 || n < best) {
          pi = i;
          pj = j;
          best = n;
        }
      }
    if (pi < 0) return false;
    if (pi != k) row_swap(pi, k);
    if (pj != k) col_swap(pj, k);
    return true;
  }

  // Clear row and column k around a pivot at (k, k). Every round either
  // finishes or strictly lowers the pivot norm, re-chosen globally so that
  // entry growth stays bounded by the smallest remainder.
  bool place_pivot(int k) {
    if (!move_min_to(k)) return false;
    for (;;) {
      bool residue = false;
      for (int i = k + 1; i < A.rows; ++i) {
        if (R.is_zero(A(i, k))) continue;
        auto [q, r] = R.divmod(A(i, k), A(k, k));
        row_axpy(i, k, q);
        if (!R.is_zero(r)) residue = true;
      }
      for (int j = k + 1; j < A.cols; ++j) {
        if (R.is_zero(A(k, j))) continue;
        auto [q, r] = R.divmod(A(k, j), A(k, k));
        col_axpy(j, k, q);
        if (!R.is_zero(r)) residue = true;
      }
      if (residue) {
        // Smallest leftover in row or column k becomes the new pivot.
        int bi = -1, bj = -1;
        Int best;
        for (int i = k + 1; i < A.rows; ++i)
          if (!R.is_zero(A(i, k)) && (bi < 0 || R.euclid_norm(A(i, k)) < best)) {
            bi = i;
            bj = k;
            best = R.euclid_norm(A(i, k));
          }
        for (int j = k + 1; j < A.cols; ++j)
          if (!R.is_zero(A(k, j)) && (bi < 0 || R.euclid_norm(A(k, j)) < best)) {
            bi = k;
            bj = j;
            best = R.euclid_norm(A(k, j));
          }
        if (bi != k) row_swap(bi, k);
        if (bj != k) col_swap(bj, k);
        continue;
      }
      // Divisibility of the trailing block by the pivot.
      bool fixed = false;
      for (int i = k + 1; i < A.rows && !fixed; ++i)
        for (int j = k + 1; j < A.cols && !fixed; ++j) {
          if (R.is_zero(A(i, j))) continue;
          if (!R.divide_exact(A(i, j), A(k, k))) {
            row_axpy(k, i, R.neg(R.one()));  // row k += row i
            fixed = true;
          }
        }
      if (!fixed) break;
    }
    auto [n, u] = R.normalize(A(k, k));
    if (!R.is_one(u)) row_scale(k, u);
    return true;
  }
};

}  // namespace

Snf smith(const Ring& R, const Mat& A) {
  Work w{R, A, mat_identity(R, A.rows), mat_identity(R, A.cols)};
  int k = 0;
  const int lim = std::min(A.rows, A.cols);
  while (k < lim && w.place_pivot(k)) ++k;
  Snf s;
  s.rank = k;
  s.D = std::move(w.A);
  s.U = std::move(w.U);
  s.V = std::move(w.V);
  return s;
}

Mat kernel_basis(const Ring& R, const Mat& A) {
  Snf s = smith(R, A);
  return mat_columns(s.V, s.rank, A.cols);
}

std::optional<Mat> left_inverse(const Ring& R, const Mat& A) {
  Snf s = smith(R, A);
  if (s.rank != A.cols) return std::nullopt;
  Mat Dp = mat_zero(R, A.cols, A.rows);
  for (int i = 0; i < s.rank; ++i) {
    auto inv = R.unit_inverse(s.D(i, i));
    if (!inv) return std::nullopt;
    Dp(i, i) = *inv;
  }
  return mat_mul(R, s.V, mat_mul(R, Dp, s.U));
}

}  // namespace sbf
