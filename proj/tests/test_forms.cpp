#include "doctest.h"
#include "sbf/error.hpp"
#include "sbf/form.hpp"
#include "sbf/snf.hpp"
#include "test_util.hpp"

#include <set>

using namespace sbf;
using testutil::from_ints;
using testutil::random_elem;

namespace {

Ring F2() { return Ring::finite_field(2, {0, 1}); }
Ring F4() { return Ring::finite_field(2, {1, 1, 1}); }

// All vectors of F_q^n.
std::vector<Vec> all_vectors(const Ring& R, int n) {
  std::vector<Vec> out;
  long q = R.field_order(), total = 1;
  for (int i = 0; i < n; ++i) total *= q;
  for (long code = 0; code < total; ++code) {
    Vec v(n);
    long c = code;
    for (int i = 0; i < n; ++i) {
      v[i] = R.element(c % q);
      c /= q;
    }
    out.push_back(v);
  }
  return out;
}

// Parity by brute force: the residues of pair(x, x) over a box of vectors.
std::set<int> brute_parity(const Form& M, long h) {
  const Ring& R = M.R;
  std::set<int> out;
  const int n = M.rank();
  std::vector<long> c(n * R.dim(), -h);
  for (;;) {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      std::vector<Int> co;
      for (int t = 0; t < R.dim(); ++t) co.push_back(c[i * R.dim() + t]);
      v[i] = R.make(co);
    }
    out.insert(R.mod2().reduce(R, M.value(v)));
    int pos = static_cast<int>(c.size()) - 1;
    while (pos >= 0 && c[pos] == h) c[pos--] = -h;
    if (pos < 0) break;
    ++c[pos];
  }
  return out;
}

Mat random_unimodular(const Ring& R, int n, int steps) {
  Mat T = mat_identity(R, n);
  for (int s = 0; s < steps; ++s) {
    int i = static_cast<int>(testutil::uniform(0, n - 1));
    int j = static_cast<int>(testutil::uniform(0, n - 1));
    if (i == j) continue;
    RElem q = random_elem(R, 2);
    for (int r = 0; r < n; ++r) T(r, i) = R.add(T(r, i), R.mul(q, T(r, j)));
  }
  return T;
}

Form random_form(const Ring& R, int n) {
  // Random sums of planes and unit diagonal entries, then a random base change.
  std::vector<Form> parts;
  int k = 0;
  while (k < n) {
    if (n - k >= 2 && testutil::uniform(0, 1)) {
      parts.push_back(theta(R, random_elem(R, 2)));
      k += 2;
    } else {
      auto units = R.units_finite() ? R.finite_units() : std::vector<RElem>{R.one(), R.from_int(-1)};
      parts.push_back(diagonal(R, {units[testutil::uniform(0, static_cast<long>(units.size()) - 1)]}));
      k += 1;
    }
  }
  Form M = direct_sum(parts, R);
  Mat T = random_unimodular(R, n, 3 * n);
  return make_form(R, mat_pair(R, T, M.G, T));
}

}  // namespace

TEST_CASE("make_form validates symmetry and non-degeneracy") {
  Ring Z = Ring::integers();
  Form t = make_form(Z, from_ints(Z, {{0, 1}, {1, 1}}));
  CHECK(t == theta(Z, Z.one()));
  try {
    make_form(Z, from_ints(Z, {{2, 0}, {0, 1}}));
    FAIL("degenerate form accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  try {
    make_form(Z, from_ints(Z, {{0, 1}, {2, 1}}));
    FAIL("non-symmetric form accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
  }
  Ring Zi = Ring::quadratic(-1);
  CHECK_NOTHROW(diagonal(Zi, {Zi.one(), Zi.gen()}));
}

TEST_CASE("theta(1) over F2 has parity {0, 1} by enumeration") {
  Ring R = F2();
  Form t = theta(R, R.one());
  std::set<int> vals;
  for (const auto& v : all_vectors(R, 2)) vals.insert(R.mod2().reduce(R, t.value(v)));
  CHECK(vals == std::set<int>{0, 1});
  CHECK(parity(t).elements == std::vector<int>{0, 1});
  CHECK(hyperbolic(R) == theta(R, R.zero()));
}

TEST_CASE("direct sums and restrictions") {
  Ring Z = Ring::integers();
  Form H = hyperbolic(Z);
  CHECK(direct_sum(H, H).rank() == 4);
  try {
    restrict_form(theta(Z, Z.one()), from_ints(Z, {{1}, {0}}));
    FAIL("isotropic line accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  Form d = diagonal(Z, {Z.one(), Z.one(), Z.from_int(-1)});
  SubForm s = restrict_form(d, from_ints(Z, {{1, 0}, {0, 1}, {0, 0}}));
  CHECK(s.form == diagonal(Z, {Z.one(), Z.one()}));
}

TEST_CASE("orthogonal complements") {
  Ring Z = Ring::integers();
  Form H = hyperbolic(Z);
  SubForm c = orthogonal_complement(direct_sum(H, H), from_ints(Z, {{1, 0}, {0, 1}, {0, 0}, {0, 0}}));
  CHECK(c.form.rank() == 2);
  CHECK(parity(c.form).elements == std::vector<int>{0});
  CHECK(mat_det(Z, c.form.G) == Z.from_int(-1));

  SubForm c3 = orthogonal_complement(diagonal(Z, {Z.one(), Z.one(), Z.one()}), from_ints(Z, {{1}, {0}, {0}}));
  CHECK(c3.form.rank() == 2);
  CHECK(signature_z(c3.form) == std::make_pair(2, 0));

  // theta(1), N = <(0,1)>: the brute-force kernel over height 2 is spanned by
  // (1,-1) up to sign, whose value is -1.
  Form t = theta(Z, Z.one());
  Vec n = {Z.zero(), Z.one()};
  std::vector<Vec> kernel;
  for (long x = -2; x <= 2; ++x)
    for (long y = -2; y <= 2; ++y) {
      Vec v = {Z.from_int(x), Z.from_int(y)};
      if ((x || y) && Z.is_zero(t.pair(n, v))) kernel.push_back(v);
    }
  std::set<RElem> vals;
  for (const auto& v : kernel)
    if (Z.is_unit(Z.xgcd(v[0], v[1]).g)) vals.insert(t.value(v));
  CHECK(vals == std::set<RElem>{Z.from_int(-1)});
  SubForm ct = orthogonal_complement(t, from_ints(Z, {{0}, {1}}));
  CHECK(ct.form.G == from_ints(Z, {{-1}}));
}

TEST_CASE("unimodularity via Smith normal form") {
  Ring Z = Ring::integers();
  Form Z2 = diagonal(Z, {Z.one(), Z.one()});
  CHECK(is_unimodular(Z2, from_ints(Z, {{2}, {3}})).unimodular);
  CHECK_FALSE(is_unimodular(Z2, from_ints(Z, {{2}, {4}})).unimodular);

  // theta(1) over F2: exhaustive over pairs confirms the returned duals.
  Ring R = F2();
  Form t = theta(R, R.one());
  Mat seq = mat_identity(R, 2);
  Unimodularity u = is_unimodular(t, seq);
  REQUIRE(u.unimodular);
  int matches = 0;
  for (const auto& w1 : all_vectors(R, 2))
    for (const auto& w2 : all_vectors(R, 2)) {
      Vec e1 = unit_vec(R, 2, 0), e2 = unit_vec(R, 2, 1);
      bool ok = t.pair(e1, w1) == R.one() && t.pair(e2, w1) == R.zero() && t.pair(e1, w2) == R.zero() &&
                t.pair(e2, w2) == R.one();
      if (!ok) continue;
      ++matches;
      CHECK(w1 == column_vec(u.duals, 0));
      CHECK(w2 == column_vec(u.duals, 1));
    }
  CHECK(matches == 1);
}

TEST_CASE("parity and complexity examples") {
  Ring Z = Ring::integers();
  CHECK(parity(hyperbolic(Z)).elements == std::vector<int>{0});
  CHECK(parity(diagonal(Z, {Z.one(), Z.from_int(-1)})).elements == std::vector<int>{0, 1});
  CHECK(complexity(power(hyperbolic(Z), 3)) == 0);

  Ring Zi = Ring::quadratic(-1);
  Form f = direct_sum(theta(Zi, Zi.one()), theta(Zi, Zi.gen()));
  ParitySpace p = parity(f);
  const Mod2Ctx& m = Zi.mod2();
  CHECK(p.dim() == 2);
  CHECK(p.elements.size() == 4u);
  REQUIRE(p.basis.size() == 2u);
  CHECK(m.residues[p.basis[0]] == Zi.one());
  CHECK(m.residues[p.basis[1]] == Zi.gen());
  CHECK(complexity(f) == 2);
  // Brute-force values over a box agree with the generator closure.
  std::set<int> bp = brute_parity(f, 1);
  CHECK(std::vector<int>(bp.begin(), bp.end()) == p.elements);

  Ring F3 = Ring::finite_field(3, {0, 1});
  CHECK(complexity(theta(F3, F3.one())) == 0);
  CHECK(parity(diagonal(F3, {F3.one()})).two_invertible);
}

TEST_CASE("complexity is undefined without the Assumption") {
  Ring R = Ring::quadratic(37);
  try {
    complexity(theta(R, R.one()));
    FAIL("complexity accepted a ring failing the Assumption");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("signature over Z") {
  Ring Z = Ring::integers();
  CHECK(signature_z(diagonal(Z, {Z.one(), Z.from_int(-1)})) == std::make_pair(1, 1));
  CHECK(signature_z(theta(Z, Z.one())) == std::make_pair(1, 1));
  CHECK(signature_z(diagonal(Z, {Z.one(), Z.one(), Z.one()})) == std::make_pair(3, 0));
  CHECK(signature_z(power(hyperbolic(Z), 2)) == std::make_pair(2, 2));
}

TEST_CASE("isometry verification") {
  Ring Z = Ring::integers();
  Form H = hyperbolic(Z);
  CHECK(verify_isometry(mat_identity(Z, 2), H, H));
  // Addition move with r = 0, s = 1: theta(0) (+) theta(1) -> theta(0) (+) theta(1).
  Mat psi = from_ints(Z, {{1, 0, 0, 0}, {0, 1, 0, 1}, {-1, 0, 1, 0}, {0, 0, 0, 1}});
  Form src = direct_sum(theta(Z, Z.zero()), theta(Z, Z.one()));
  CHECK(verify_isometry(psi, src, src));
  Form a = diagonal(Z, {Z.one(), Z.from_int(-1)}), b = diagonal(Z, {Z.from_int(-1), Z.one()});
  CHECK(verify_isometry(from_ints(Z, {{0, 1}, {1, 0}}), a, b));
  CHECK_FALSE(verify_isometry(mat_identity(Z, 2), a, b));
}

TEST_CASE("parity is additive and stable under powers") {
  std::vector<Ring> rings = {Ring::integers(), Ring::quadratic(-1), Ring::quadratic(-2), Ring::quadratic(5),
                             Ring::quadratic(3), F2(), F4()};
  for (const Ring& R : rings) {
    for (int trial = 0; trial < 200; ++trial) {
      Form M = random_form(R, static_cast<int>(testutil::uniform(1, 3)));
      Form N = random_form(R, static_cast<int>(testutil::uniform(1, 3)));
      CHECK(parity(direct_sum(M, N)) == parity_sum(R, parity(M), parity(N)));
      if (trial < 20)
        for (int k = 1; k <= 4; ++k) CHECK(parity(power(M, k)) == parity(M));
    }
  }
}

TEST_CASE("parity matches brute-force values on small Z[i] forms") {
  Ring R = Ring::quadratic(-1);
  for (int trial = 0; trial < 30; ++trial) {
    Form M = random_form(R, 2);
    std::set<int> bp = brute_parity(M, 1);
    CHECK(std::vector<int>(bp.begin(), bp.end()) == parity(M).elements);
  }
}

TEST_CASE("unimodularity agrees between a subform and the ambient form") {
  // Exhaustive over F2: every sequence of length <= 2 in a rank-2 subform of
  // a rank-4 form.
  Ring R = F2();
  Form M = direct_sum(theta(R, R.one()), hyperbolic(R));
  Mat basis = from_ints(R, {{1, 0}, {0, 1}, {1, 0}, {0, 0}});
  SubForm N = restrict_form(M, basis);
  auto vecs = all_vectors(R, 2);
  for (const auto& a : vecs)
    for (const auto& b : vecs) {
      Mat seq = cols_matrix(R, 2, {a, b});
      bool in_n = is_unimodular(N.form, seq).unimodular;
      bool in_m = is_unimodular(M, mat_mul(R, basis, seq)).unimodular;
      CHECK(in_n == in_m);
      Mat one = cols_matrix(R, 2, {a});
      CHECK(is_unimodular(N.form, one).unimodular == is_unimodular(M, mat_mul(R, basis, one)).unimodular);
    }
  // Randomized over Z.
  Ring Z = Ring::integers();
  for (int trial = 0; trial < 100; ++trial) {
    Form big = random_form(Z, 4);
    Form sub = diagonal(Z, {Z.one(), Z.from_int(-1)});
    Form amb = direct_sum(sub, big);
    Mat inc = mat_zero(Z, 6, 2);
    inc(0, 0) = Z.one();
    inc(1, 1) = Z.one();
    Mat seq = testutil::random_mat(Z, 2, static_cast<int>(testutil::uniform(1, 2)), 3);
    CHECK(is_unimodular(sub, seq).unimodular == is_unimodular(amb, mat_mul(Z, inc, seq)).unimodular);
  }
}

TEST_CASE("complement and sum reproduce the form") {
  std::vector<Ring> rings = {Ring::integers(), Ring::quadratic(-1), F2(), F4()};
  for (const Ring& R : rings)
    for (int trial = 0; trial < 40; ++trial) {
      Form M = random_form(R, 4);
      // A non-degenerate rank-1 or rank-2 subform: try random bases.
      Mat B = testutil::random_mat(R, 4, 2, 2);
      SubForm s;
      try {
        s = restrict_form(M, B);
      } catch (const Error&) {
        continue;
      }
      if (!is_unimodular(M, B).unimodular) continue;
      SubForm c = orthogonal_complement(M, B);
      Isometry iso = split_isometry(M, s, c);
      CHECK(verify_isometry(iso.T, iso.source, iso.target));
    }
}

TEST_CASE("signature is a congruence invariant") {
  Ring Z = Ring::integers();
  for (int trial = 0; trial < 100; ++trial) {
    Form M = random_form(Z, static_cast<int>(testutil::uniform(1, 5)));
    Mat T = random_unimodular(Z, M.rank(), 8);
    Form N = make_form(Z, mat_pair(Z, T, M.G, T));
    CHECK(signature_z(N) == signature_z(M));
    auto [p, q] = signature_z(M);
    CHECK(p + q == M.rank());
  }
}
