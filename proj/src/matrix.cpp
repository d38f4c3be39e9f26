#include "sbf/matrix.hpp"

#include "sbf/error.hpp"

#include <utility>

namespace sbf {

Mat mat_zero(const Ring& R, int rows, int cols) {
  Mat m;
  m.rows = rows;
  m.cols = cols;
  m.e.assign(static_cast<size_t>(rows) * cols, R.zero());
  return m;
}

Mat mat_identity(const Ring& R, int n) {
  Mat m = mat_zero(R, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = R.one();
  return m;
}

Mat mat_mul(const Ring& R, const Mat& A, const Mat& B) {
  require(A.cols == B.rows, ErrorKind::Internal, "matrix shape mismatch in product");
  Mat C = mat_zero(R, A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const RElem& a = A(i, k);
      if (R.is_zero(a)) continue;
      for (int j = 0; j < B.cols; ++j) {
        const RElem& b = B(k, j);
        if (R.is_zero(b)) continue;
        C(i, j) = R.add(C(i, j), R.mul(a, b));
      }
    }
  return C;
}

Mat mat_add(const Ring& R, const Mat& A, const Mat& B) {
  require(A.rows == B.rows && A.cols == B.cols, ErrorKind::Internal, "matrix shape mismatch in sum");
  Mat C = A;
  for (size_t i = 0; i < C.e.size(); ++i) C.e[i] = R.add(A.e[i], B.e[i]);
  return C;
}

Mat mat_transpose(const Mat& A) {
  Mat T;
  T.rows = A.cols;
  T.cols = A.rows;
  T.e.resize(A.e.size());
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

Mat mat_pair(const Ring& R, const Mat& B, const Mat& G, const Mat& A) {
  return mat_mul(R, mat_transpose(B), mat_mul(R, G, A));
}

Mat mat_block_diag(const Ring& R, const Mat& A, const Mat& B) {
  Mat C = mat_zero(R, A.rows + B.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C(A.rows + i, A.cols + j) = B(i, j);
  return C;
}

Mat mat_column(const Mat& A, int j) { return mat_columns(A, j, j + 1); }

Mat mat_columns(const Mat& A, int from, int to) {
  Mat C;
  C.rows = A.rows;
  C.cols = to - from;
  C.e.reserve(static_cast<size_t>(C.rows) * C.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = from; j < to; ++j) C.e.push_back(A(i, j));
  return C;
}

Mat mat_hcat(const Mat& A, const Mat& B) {
  require(A.rows == B.rows, ErrorKind::Internal, "row mismatch in concatenation");
  Mat C;
  C.rows = A.rows;
  C.cols = A.cols + B.cols;
  C.e.reserve(static_cast<size_t>(C.rows) * C.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) C.e.push_back(A(i, j));
    for (int j = 0; j < B.cols; ++j) C.e.push_back(B(i, j));
  }
  return C;
}

Mat mat_from_cols(const Ring& R, int rows, const std::vector<std::vector<RElem>>& cols) {
  Mat C = mat_zero(R, rows, static_cast<int>(cols.size()));
  for (int j = 0; j < C.cols; ++j) {
    require(static_cast<int>(cols[j].size()) == rows, ErrorKind::Internal, "column length mismatch");
    for (int i = 0; i < rows; ++i) C(i, j) = cols[j][i];
  }
  return C;
}

bool mat_is_square(const Mat& A) { return A.rows == A.cols; }

bool mat_is_symmetric(const Mat& A) {
  if (!mat_is_square(A)) return false;
  for (int i = 0; i < A.rows; ++i)
    for (int j = i + 1; j < A.cols; ++j)
      if (A(i, j) != A(j, i)) return false;
  return true;
}

namespace {

void row_swap(Mat& M, int a, int b) {
  for (int j = 0; j < M.cols; ++j) std::swap(M(a, j), M(b, j));
}

// row t -= q * row s
void row_axpy(const Ring& R, Mat& M, int t, int s, RElem q) {
  if (R.is_zero(q)) return;
  for (int j = 0; j < M.cols; ++j)
    if (!R.is_zero(M(s, j))) M(t, j) = R.sub(M(t, j), R.mul(q, M(s, j)));
}

// Unimodular row reduction to upper-triangular form on the first n columns.
// Returns the number of row swaps.
int triangularize(const Ring& R, Mat& M, int n) {
  int swaps = 0;
  for (int col = 0; col < n && col < M.rows; ++col) {
    for (;;) {
      int piv = -1;
      for (int i = col; i < M.rows; ++i) {
        if (R.is_zero(M(i, col))) continue;
        if (piv < 0 || R.euclid_norm(M(i, col)) < R.euclid_norm(M(piv, col))) piv = i;
      }
      if (piv < 0) break;
      if (piv != col) {
        row_swap(M, piv, col);
        ++swaps;
      }
      bool clean = true;
      for (int i = col + 1; i < M.rows; ++i) {
        if (R.is_zero(M(i, col))) continue;
        auto [q, r] = R.divmod(M(i, col), M(col, col));
        row_axpy(R, M, i, col, q);
        if (!R.is_zero(r)) clean = false;
      }
      if (clean) break;
    }
  }
  return swaps;
}

}  // namespace

RElem mat_det(const Ring& R, const Mat& A) {
  require(mat_is_square(A), ErrorKind::Internal, "determinant of a non-square matrix");
  Mat M = A;
  int swaps = triangularize(R, M, M.cols);
  RElem d = R.one();
  for (int i = 0; i < M.rows; ++i) d = R.mul(d, M(i, i));
  return swaps % 2 ? R.neg(d) : d;
}

std::optional<Mat> mat_inverse(const Ring& R, const Mat& A) {
  require(mat_is_square(A), ErrorKind::Internal, "inverse of a non-square matrix");
  const int n = A.rows;
  Mat M = mat_hcat(A, mat_identity(R, n));
  triangularize(R, M, n);
  for (int i = 0; i < n; ++i) {
    auto inv = R.unit_inverse(M(i, i));
    if (!inv) return std::nullopt;
    for (int j = 0; j < M.cols; ++j) M(i, j) = R.mul(*inv, M(i, j));
  }
  for (int col = n - 1; col >= 0; --col)
    for (int i = 0; i < col; ++i) row_axpy(R, M, i, col, M(i, col));
  return mat_columns(M, n, 2 * n);
}

std::string mat_str(const Ring& R, const Mat& A) {
  std::string s = "[";
  for (int i = 0; i < A.rows; ++i) {
    s += i ? "; " : "";
    for (int j = 0; j < A.cols; ++j) s += (j ? ", " : "") + R.str(A(i, j));
  }
  return s + "]";
}

}  // namespace sbf
