#pragma once

#include "sbf/matrix.hpp"

namespace sbf {

// U * A * V = D with U, V invertible and D diagonal, d_i | d_{i+1}, each d_i
// normalized. rank counts nonzero diagonal entries.
struct Snf {
  Mat D, U, V;
  int rank = 0;
};

Snf smith(const Ring& R, const Mat& A);

// Basis of {x : A x = 0} as columns; saturated, so a direct summand.
Mat kernel_basis(const Ring& R, const Mat& A);
// L with L A = I when the columns of A span a direct summand; nullopt otherwise.
std::optional<Mat> left_inverse(const Ring& R, const Mat& A);

}  // namespace sbf
