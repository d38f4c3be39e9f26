#include "sbf/form.hpp"

#include "sbf/error.hpp"
#include "sbf/snf.hpp"

#include <algorithm>
#include <set>

namespace sbf {

RElem Form::pair(const Vec& x, const Vec& y) const {
  RElem s = R.zero();
  for (int i = 0; i < G.rows; ++i) {
    if (R.is_zero(x[i])) continue;
    RElem row = R.zero();
    for (int j = 0; j < G.cols; ++j)
      if (!R.is_zero(y[j]) && !R.is_zero(G(i, j))) row = R.add(row, R.mul(G(i, j), y[j]));
    s = R.add(s, R.mul(x[i], row));
  }
  return s;
}

Form make_form(const Ring& R, const Mat& G) {
  require(mat_is_square(G), ErrorKind::Input, "Gram matrix is not square");
  require(mat_is_symmetric(G), ErrorKind::Input, "Gram matrix is not symmetric");
  if (G.rows > 0) {
    RElem d = mat_det(R, G);
    require(R.is_unit(d), ErrorKind::Precondition, "degenerate form: det = " + R.str(d) + " is not a unit");
  }
  return Form{R, G};
}

Form zero_form(const Ring& R) { return Form{R, mat_zero(R, 0, 0)}; }

Form theta(const Ring& R, const RElem& r) {
  Mat G = mat_zero(R, 2, 2);
  G(0, 1) = R.one();
  G(1, 0) = R.one();
  G(1, 1) = r;
  return Form{R, G};
}

Form hyperbolic(const Ring& R) { return theta(R, R.zero()); }

Form diagonal(const Ring& R, const std::vector<RElem>& entries) {
  const int n = static_cast<int>(entries.size());
  Mat G = mat_zero(R, n, n);
  for (int i = 0; i < n; ++i) G(i, i) = entries[i];
  return make_form(R, G);
}

Form direct_sum(const Form& a, const Form& b) {
  require(a.R == b.R, ErrorKind::Input, "direct sum of forms over different rings");
  return Form{a.R, mat_block_diag(a.R, a.G, b.G)};
}

Form direct_sum(const std::vector<Form>& parts, const Ring& R) {
  Form out = zero_form(R);
  for (const auto& p : parts) out = direct_sum(out, p);
  return out;
}

Form power(const Form& f, int n) {
  Form out = zero_form(f.R);
  for (int i = 0; i < n; ++i) out = direct_sum(out, f);
  return out;
}

bool verify_isometry(const Mat& T, const Form& source, const Form& target) {
  const Ring& R = source.R;
  if (!(R == target.R)) return false;
  if (T.rows != target.rank() || T.cols != source.rank() || T.rows != T.cols) return false;
  if (T.rows == 0) return true;
  if (mat_pair(R, T, target.G, T) != source.G) return false;
  return R.is_unit(mat_det(R, T));
}

Isometry make_isometry(const Form& source, const Form& target, const Mat& T) {
  require(verify_isometry(T, source, target), ErrorKind::Internal, "constructed isometry failed verification");
  return Isometry{source, target, T};
}

Isometry identity_isometry(const Form& f) { return Isometry{f, f, mat_identity(f.R, f.rank())}; }

Isometry compose(const Isometry& second, const Isometry& first) {
  require(first.target == second.source, ErrorKind::Internal, "composing isometries with mismatched forms");
  return make_isometry(first.source, second.target, mat_mul(first.source.R, second.T, first.T));
}

Isometry inverse(const Isometry& f) {
  auto inv = mat_inverse(f.source.R, f.T);
  require(inv.has_value(), ErrorKind::Internal, "isometry matrix not invertible");
  return make_isometry(f.target, f.source, *inv);
}

Isometry iso_sum(const Isometry& a, const Isometry& b) {
  const Ring& R = a.source.R;
  return make_isometry(direct_sum(a.source, b.source), direct_sum(a.target, b.target),
                       mat_block_diag(R, a.T, b.T));
}

Mat cols_matrix(const Ring& R, int n, const std::vector<Vec>& cols) { return mat_from_cols(R, n, cols); }

Vec column_vec(const Mat& A, int j) {
  Vec v(A.rows);
  for (int i = 0; i < A.rows; ++i) v[i] = A(i, j);
  return v;
}

Vec unit_vec(const Ring& R, int n, int i) {
  Vec v(n, R.zero());
  v[i] = R.one();
  return v;
}

SubForm restrict_form(const Form& M, const Mat& basis) {
  const Ring& R = M.R;
  require(basis.rows == M.rank(), ErrorKind::Input, "basis vectors have the wrong length");
  Mat G = mat_pair(R, basis, M.G, basis);
  if (G.rows > 0) {
    RElem d = mat_det(R, G);
    require(R.is_unit(d), ErrorKind::Precondition, "restricted form is degenerate (det " + R.str(d) + ")");
  }
  return SubForm{Form{R, G}, basis};
}

SubForm orthogonal_complement(const Form& M, const Mat& basis) {
  const Ring& R = M.R;
  restrict_form(M, basis);  // non-degeneracy of the subform
  Mat C = kernel_basis(R, mat_mul(R, mat_transpose(basis), M.G));
  Mat G = mat_pair(R, C, M.G, C);
  require(C.cols + basis.cols == M.rank(), ErrorKind::Internal, "complement rank mismatch");
  if (G.rows > 0)
    require(R.is_unit(mat_det(R, G)), ErrorKind::Internal, "complement of a non-degenerate subform is degenerate");
  return SubForm{Form{R, G}, C};
}

Isometry split_isometry(const Form& M, const SubForm& sub, const SubForm& comp) {
  return make_isometry(direct_sum(sub.form, comp.form), M, mat_hcat(sub.inclusion, comp.inclusion));
}

Unimodularity is_unimodular(const Form& M, const Mat& seq) {
  const Ring& R = M.R;
  Unimodularity u;
  if (seq.cols == 0) {
    u.unimodular = true;
    u.duals = mat_zero(R, M.rank(), 0);
    return u;
  }
  auto L = left_inverse(R, seq);
  if (!L) return u;
  auto Ginv = mat_inverse(R, M.G);
  require(Ginv.has_value(), ErrorKind::Internal, "form is degenerate");
  u.unimodular = true;
  u.duals = mat_mul(R, *Ginv, mat_transpose(*L));
  return u;
}

bool is_isotropic_seq(const Form& M, const Mat& seq) {
  Mat P = mat_pair(M.R, seq, M.G, seq);
  for (const auto& e : P.e)
    if (!M.R.is_zero(e)) return false;
  return true;
}

bool ParitySpace::contains(int r) const { return std::binary_search(elements.begin(), elements.end(), r); }

bool ParitySpace::contains(const ParitySpace& o) const {
  return std::includes(elements.begin(), elements.end(), o.elements.begin(), o.elements.end());
}

namespace {

// Closure of gens under addition and multiplication by squares mod 2.
std::vector<int> square_span(const Mod2Ctx& m, const std::vector<int>& gens) {
  std::set<int> S = {0};
  for (int g : gens) {
    std::set<int> next;
    for (int x : S)
      for (int s : m.squares) next.insert(m.add[x][m.mul[s][g]]);
    S.swap(next);
  }
  return {S.begin(), S.end()};
}

// Reduced row echelon basis over U(R) of the span of gens, in coordinates.
std::vector<int> echelon_basis(const Mod2Ctx& m, const std::vector<int>& gens) {
  std::vector<std::vector<int>> rows;
  for (int g : gens) rows.push_back(m.coords[g]);
  const int d = m.u_dim;
  int r = 0;
  for (int col = 0; col < d && r < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[r]);
    int inv = m.u_inv(rows[r][col]);
    for (auto& x : rows[r]) x = m.mul[inv][x];
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      int f = rows[i][col];
      // Characteristic 2: subtraction is addition.
      for (int j = 0; j < d; ++j) rows[i][j] = m.add[rows[i][j]][m.mul[f][rows[r][j]]];
    }
    ++r;
  }
  std::vector<int> basis;
  for (int i = 0; i < r; ++i) basis.push_back(m.from_coords(rows[i]));
  return basis;
}

}  // namespace

ParitySpace parity_from_generators(const Ring& R, const std::vector<int>& gens) {
  const Mod2Ctx& m = R.mod2();
  ParitySpace p;
  if (m.two_invertible) {
    p.two_invertible = true;
    p.elements = {0};
    return p;
  }
  p.elements = square_span(m, gens);
  if (m.assumption) {
    p.basis = echelon_basis(m, gens);
  } else {
    std::vector<int> chosen;
    std::vector<int> span = {0};
    for (int r : p.elements) {
      if (std::binary_search(span.begin(), span.end(), r)) continue;
      chosen.push_back(r);
      span = square_span(m, chosen);
    }
    p.basis = chosen;
  }
  return p;
}

ParitySpace parity(const Form& M) {
  const Mod2Ctx& m = M.R.mod2();
  std::vector<int> gens;
  for (int i = 0; i < M.rank(); ++i) gens.push_back(m.reduce(M.R, M.G(i, i)));
  return parity_from_generators(M.R, gens);
}

ParitySpace parity_sum(const Ring& R, const ParitySpace& a, const ParitySpace& b) {
  std::vector<int> gens = a.basis;
  gens.insert(gens.end(), b.basis.begin(), b.basis.end());
  return parity_from_generators(R, gens);
}

int complexity(const Form& M) {
  const Mod2Ctx& m = M.R.mod2();
  require(m.assumption, ErrorKind::Precondition, "complexity needs the Assumption on " + M.R.name());
  return parity(M).dim();
}

std::pair<int, int> signature_z(const Form& M) {
  require(M.R.kind() == RingKind::Integers, ErrorKind::Input, "signature is defined here over Z only");
  const int n = M.rank();
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = Rational(M.G(i, j).c[0]);
  int p = 0, q = 0;
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    int piv = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && A[i][i] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) {
      // All remaining diagonal entries vanish: e_i <- e_i + e_j gives 2 a_ij.
      int pi = -1, pj = -1;
      for (int i = 0; i < n && pi < 0; ++i)
        for (int j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && A[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      require(pi >= 0, ErrorKind::Internal, "degenerate form in signature");
      for (int k = 0; k < n; ++k) A[pi][k] += A[pj][k];
      for (int k = 0; k < n; ++k) A[k][pi] += A[k][pj];
      piv = pi;
    }
    done[piv] = true;
    (A[piv][piv] > 0 ? p : q) += 1;
    for (int i = 0; i < n; ++i) {
      if (done[i] || A[i][piv] == 0) continue;
      Rational f = A[i][piv] / A[piv][piv];
      for (int k = 0; k < n; ++k) A[i][k] -= f * A[piv][k];
      for (int k = 0; k < n; ++k) A[k][i] -= f * A[k][piv];
    }
  }
  return {p, q};
}

}  // namespace sbf
