#pragma once

#include "sbf/ring.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbf {

// Dense row-major matrix over a Ring.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<RElem> e;

  RElem& operator()(int i, int j) { return e[static_cast<size_t>(i) * cols + j]; }
  const RElem& operator()(int i, int j) const { return e[static_cast<size_t>(i) * cols + j]; }
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }
};

Mat mat_zero(const Ring& R, int rows, int cols);
Mat mat_identity(const Ring& R, int n);
Mat mat_mul(const Ring& R, const Mat& A, const Mat& B);
Mat mat_add(const Ring& R, const Mat& A, const Mat& B);
Mat mat_transpose(const Mat& A);
// B^T G A, the Gram matrix of columns of A against those of B under G.
Mat mat_pair(const Ring& R, const Mat& B, const Mat& G, const Mat& A);
Mat mat_block_diag(const Ring& R, const Mat& A, const Mat& B);
Mat mat_column(const Mat& A, int j);
Mat mat_columns(const Mat& A, int from, int to);
Mat mat_hcat(const Mat& A, const Mat& B);
Mat mat_from_cols(const Ring& R, int rows, const std::vector<std::vector<RElem>>& cols);
bool mat_is_square(const Mat& A);
bool mat_is_symmetric(const Mat& A);

// Determinant by unimodular Euclidean elimination.
RElem mat_det(const Ring& R, const Mat& A);
// Inverse over R; nullopt when det is not a unit.
std::optional<Mat> mat_inverse(const Ring& R, const Mat& A);

std::string mat_str(const Ring& R, const Mat& A);

}  // namespace sbf
