#pragma once

#include "sbf/matrix.hpp"
#include "sbf/mod2.hpp"

#include <utility>
#include <vector>

namespace sbf {

using Vec = std::vector<RElem>;

// Non-degenerate symmetric bilinear form on R^n, given by its Gram matrix.
struct Form {
  Ring R;
  Mat G;

  int rank() const { return G.rows; }
  RElem pair(const Vec& x, const Vec& y) const;
  RElem value(const Vec& x) const { return pair(x, x); }
  friend bool operator==(const Form& a, const Form& b) { return a.R == b.R && a.G == b.G; }
};

// Throws Input for non-square or non-symmetric matrices, Precondition when
// det is not a unit.
Form make_form(const Ring& R, const Mat& G);
Form zero_form(const Ring& R);
Form theta(const Ring& R, const RElem& r);
Form hyperbolic(const Ring& R);
Form diagonal(const Ring& R, const std::vector<RElem>& entries);
Form direct_sum(const Form& a, const Form& b);
Form direct_sum(const std::vector<Form>& parts, const Ring& R);
Form power(const Form& f, int n);

// T with T^T G_target T = G_source and T invertible; x in source maps to T x.
struct Isometry {
  Form source, target;
  Mat T;
};

bool verify_isometry(const Mat& T, const Form& source, const Form& target);
// Checks the certificate; a failure is an Internal error, never returned.
Isometry make_isometry(const Form& source, const Form& target, const Mat& T);
Isometry identity_isometry(const Form& f);
// first: A -> B, second: B -> C.
Isometry compose(const Isometry& second, const Isometry& first);
Isometry inverse(const Isometry& f);
Isometry iso_sum(const Isometry& a, const Isometry& b);

// Vectors as columns of an n x k matrix.
Mat cols_matrix(const Ring& R, int n, const std::vector<Vec>& cols);
Vec column_vec(const Mat& A, int j);
Vec unit_vec(const Ring& R, int n, int i);

struct SubForm {
  Form form;
  Mat inclusion;  // columns: the chosen basis in ambient coordinates
};

SubForm restrict_form(const Form& M, const Mat& basis);
SubForm orthogonal_complement(const Form& M, const Mat& basis);
// Isometry sub (+) complement -> M built from the two inclusions.
Isometry split_isometry(const Form& M, const SubForm& sub, const SubForm& comp);

struct Unimodularity {
  bool unimodular = false;
  Mat duals;  // columns w_j with pair(v_i, w_j) = delta_ij
};

Unimodularity is_unimodular(const Form& M, const Mat& seq);
bool is_isotropic_seq(const Form& M, const Mat& seq);

// Image of the values pair(x, x) in R/(2), as a set of residue indices
// closed under addition and multiplication by squares. basis is the
// canonical reduced echelon basis over U(R) (ordered by pivot) when the
// Assumption holds; otherwise a greedy minimal generating list.
struct ParitySpace {
  bool two_invertible = false;
  std::vector<int> elements;
  std::vector<int> basis;
  friend bool operator==(const ParitySpace& a, const ParitySpace& b) {
    return a.two_invertible == b.two_invertible && a.elements == b.elements;
  }
  friend bool operator!=(const ParitySpace& a, const ParitySpace& b) { return !(a == b); }
  int dim() const { return static_cast<int>(basis.size()); }
  bool contains(int r) const;
  bool contains(const ParitySpace& o) const;
};

ParitySpace parity_from_generators(const Ring& R, const std::vector<int>& gens);
ParitySpace parity(const Form& M);
ParitySpace parity_sum(const Ring& R, const ParitySpace& a, const ParitySpace& b);
// Requires the Assumption; Precondition error otherwise.
int complexity(const Form& M);

// Signature over Z by rational congruence diagonalization.
std::pair<int, int> signature_z(const Form& M);

}  // namespace sbf
