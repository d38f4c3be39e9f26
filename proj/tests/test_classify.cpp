#include "doctest.h"
#include "sbf/classify.hpp"
#include "sbf/error.hpp"
#include "test_util.hpp"

#include <set>

using namespace sbf;
using testutil::from_ints;
using testutil::random_elem;

namespace {

Ring F2() { return Ring::finite_field(2, {0, 1}); }
Ring F4() { return Ring::finite_field(2, {1, 1, 1}); }
Ring ZI() { return Ring::quadratic(-1); }

RElem gi(const Ring& R, long a, long b) { return R.make({Int(a), Int(b)}); }

void check_iso(const Isometry& f) { CHECK(verify_isometry(f.T, f.source, f.target)); }

Form zdiag(const Ring& R, const std::vector<int>& units) {
  std::vector<RElem> e;
  for (int u : units) e.push_back(u ? R.gen() : R.one());
  return diagonal(R, e);
}

Mat random_unimodular(const Ring& R, int n, int steps) {
  Mat T = mat_identity(R, n);
  for (int s = 0; s < steps; ++s) {
    int i = static_cast<int>(testutil::uniform(0, n - 1));
    int j = static_cast<int>(testutil::uniform(0, n - 1));
    if (i == j) continue;
    RElem q = random_elem(R, 1);
    for (int r = 0; r < n; ++r) T(r, i) = R.add(T(r, i), R.mul(q, T(r, j)));
  }
  return T;
}

Form conjugate(const Form& M, const Mat& T) { return make_form(M.R, mat_pair(M.R, T, M.G, T)); }

// Every symmetric non-degenerate n x n matrix over a finite field.
std::vector<Form> all_forms(const Ring& R, int n) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) slots.push_back({i, j});
  const long q = R.field_order();
  long total = 1;
  for (size_t s = 0; s < slots.size(); ++s) total *= q;
  std::vector<Form> out;
  for (long code = 0; code < total; ++code) {
    Mat G = mat_zero(R, n, n);
    long c = code;
    for (auto [i, j] : slots) {
      G(i, j) = G(j, i) = R.element(c % q);
      c /= q;
    }
    if (!R.is_zero(mat_det(R, G))) out.push_back(Form{R, G});
  }
  return out;
}

}  // namespace

TEST_CASE("explicit odd diagonalizations over Z[i] verify") {
  Ring R = ZI();
  for (int plane = 0; plane < 4; ++plane)
    for (int unit = 0; unit < 2; ++unit) check_iso(zi_odd_diagonalize(R, plane, unit));
  check_iso(zi_theta_to_diagonal(R, false));
  check_iso(zi_theta_to_diagonal(R, true));
  // theta(0) + [1] -> diag(1,1,1) and theta(1+i) + [i] -> diag(1,1,i).
  Isometry psi = zi_odd_diagonalize(R, 0, 0);
  CHECK(psi.target == zdiag(R, {0, 0, 0}));
  CHECK(psi.T(0, 2) == R.gen());
  Isometry phi = zi_odd_diagonalize(R, 3, 1);
  CHECK(phi.target == zdiag(R, {0, 0, 1}));
  CHECK(zi_odd_diagonalize(R, 1, 0).target == zdiag(R, {0, 0, 0}));
}

TEST_CASE("addition move verifies for random classes over Z and Z[i]") {
  for (Ring R : {Ring::integers(), ZI()}) {
    for (int t = 0; t < 50; ++t) {
      RElem r = random_elem(R, 5), s = random_elem(R, 5);
      Form src = theta_sum(R, {r, R.add(s, r)});
      Form dst = theta_sum(R, {r, s});
      CHECK(verify_isometry(move_add(R, 2, 0, 1, r), src, dst));
    }
  }
}

TEST_CASE("Z classification examples") {
  Ring Z = Ring::integers();
  Form a = power(theta(Z, Z.one()), 2);
  Form b = power(diagonal(Z, {Z.one(), Z.from_int(-1)}), 2);
  ZClass ca = classify_z(a), cb = classify_z(b);
  CHECK(ca == cb);
  CHECK(ca.rank == 4);
  CHECK(ca.pos == 2);
  CHECK(ca.odd);
  SearchBudget small;
  small.height = 2;
  auto cert = search_isometry(a, b, small);
  REQUIRE(cert.has_value());
  check_iso(*cert);
  ZVerdict v = z_isometry(a, b);
  CHECK(v.verdict.kind == IsoVerdict::Isometric);
  CHECK(v.exactness == Exactness::Exact);

  ZVerdict d = z_isometry(diagonal(Z, {Z.one(), Z.one()}), hyperbolic(Z));
  CHECK(d.verdict.kind == IsoVerdict::NotIsometric);
  CHECK(d.verdict.reason == "signature");
  // Even definite rank 8 against H^4.
  Mat E8 = from_ints(Z, {{2, -1, 0, 0, 0, 0, 0, 0},
                         {-1, 2, -1, 0, 0, 0, 0, 0},
                         {0, -1, 2, -1, 0, 0, 0, -1},
                         {0, 0, -1, 2, -1, 0, 0, 0},
                         {0, 0, 0, -1, 2, -1, 0, 0},
                         {0, 0, 0, 0, -1, 2, -1, 0},
                         {0, 0, 0, 0, 0, -1, 2, 0},
                         {0, 0, -1, 0, 0, 0, 0, 2}});
  Form e8 = make_form(Z, E8);
  ZClass ce = classify_z(e8);
  CHECK(ce.pos == 8);
  CHECK_FALSE(ce.odd);
  CHECK(z_isometry(e8, power(hyperbolic(Z), 4)).verdict.kind == IsoVerdict::NotIsometric);
  // Indefinite odd, non-metabolic: theorem-backed without a certificate at height 1.
  SearchBudget tiny;
  tiny.height = 1;
  tiny.max_vectors = 10;
  ZVerdict tb = z_isometry(diagonal(Z, {Z.one(), Z.one(), Z.from_int(-1)}),
                           make_form(Z, from_ints(Z, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}})), tiny);
  CHECK(tb.verdict.kind == IsoVerdict::Isometric);
  CHECK(tb.exactness == Exactness::TheoremBacked);
}

TEST_CASE("Z isometry decisions agree with certificates on random conjugates") {
  Ring Z = Ring::integers();
  std::vector<Form> seeds = {diagonal(Z, {Z.one(), Z.one(), Z.from_int(-1)}),
                             direct_sum(hyperbolic(Z), diagonal(Z, {Z.from_int(-1)})),
                             direct_sum(theta(Z, Z.one()), hyperbolic(Z))};
  for (const Form& M : seeds)
    for (int t = 0; t < 5; ++t) {
      Form N = conjugate(M, random_unimodular(Z, M.rank(), 6));
      ZVerdict v = z_isometry(M, N);
      CHECK(v.verdict.kind == IsoVerdict::Isometric);
      if (v.verdict.cert) check_iso(*v.verdict.cert);
    }
}

TEST_CASE("characteristic 2 normal form over F2 rank <= 4 is exhaustive and certified") {
  Ring R = F2();
  for (int n = 1; n <= 4; ++n) {
    std::set<std::pair<bool, int>> classes;
    for (const Form& M : all_forms(R, n)) {
      Char2NF nf = char2_normal_form(M);
      check_iso(nf.cert);
      CHECK(nf.cert.source == M);
      classes.insert({nf.alternating, nf.canonical.rank()});
    }
    CHECK(classes.size() == (n % 2 ? 1u : 2u));
  }
}

TEST_CASE("characteristic 2 normal form over F4") {
  Ring R = F4();
  for (int n = 1; n <= 3; ++n)
    for (const Form& M : all_forms(R, n)) check_iso(char2_normal_form(M).cert);
}

TEST_CASE("Z[i] diagonal normal form") {
  Ring R = ZI();
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 5; ++b) {
      if (a + b == 0) continue;
      ZiDiagonal d = zi_diagonal_normal(R, a, b);
      REQUIRE(d.cert.has_value());
      check_iso(*d.cert);
      CHECK(d.ones + d.is == a + b);
      CHECK(d.is % 2 == (a && b ? b % 2 : d.is % 2));
    }
  // diag(1,1,1,i) and diag(i,i,i,1) share a normal form.
  CHECK(zi_diagonal_normal(R, 3, 1).ones == zi_diagonal_normal(R, 1, 3).ones);
}

TEST_CASE("Z[i] diagonalization") {
  Ring R = ZI();
  Form m = theta_sum(R, {R.one(), R.gen()});
  ZiDiagResult d = zi_diagonalize(m);
  REQUIRE(d.diagonalizable == Tri::Yes);
  check_iso(*d.diag.cert);
  CHECK(d.diag.ones == 2);
  CHECK(d.diag.is == 2);
  // theta(0) + [1] needs the odd diagonalization step.
  ZiDiagResult e = zi_diagonalize(direct_sum(hyperbolic(R), zdiag(R, {0})));
  REQUIRE(e.diagonalizable == Tri::Yes);
  check_iso(*e.diag.cert);
  CHECK(e.diag.ones == 3);
  ZiDiagResult f = zi_diagonalize(direct_sum(theta(R, gi(R, 1, 1)), zdiag(R, {1})));
  REQUIRE(f.diagonalizable == Tri::Yes);
  check_iso(*f.diag.cert);
  CHECK(zi_diagonalize(hyperbolic(R)).diagonalizable == Tri::No);
  CHECK(zi_diagonalize(theta(R, gi(R, 1, 1))).diagonalizable == Tri::No);
  for (int t = 0; t < 10; ++t) {
    Form M = conjugate(zdiag(R, {0, 1, 1}), random_unimodular(R, 3, 5));
    ZiDiagResult r = zi_diagonalize(M);
    REQUIRE(r.diagonalizable == Tri::Yes);
    check_iso(*r.diag.cert);
  }
}

TEST_CASE("g_F over diagonal Z[i] forms matches a certificate search") {
  // F^k (+) N = M for some diagonal N, searched directly for rank <= 4.
  Ring R = ZI();
  SearchBudget b;
  b.height = 1;
  for (int r = 0; r < 2; ++r) {
    RElem f = r ? R.gen() : R.one();
    for (int a = 0; a <= 4; ++a)
      for (int bb = 0; a + bb <= 4; ++bb) {
        if (a + bb == 0) continue;
        std::vector<int> u(a, 0);
        u.insert(u.end(), bb, 1);
        Form M = zdiag(R, u);
        int g = g_F(M, f).value;
        int brute = 0;
        for (int k = 1; 2 * k <= a + bb; ++k) {
          int rest = a + bb - 2 * k;
          bool hit = false;
          for (int ap = 0; ap <= rest && !hit; ++ap) {
            std::vector<int> nu(ap, 0);
            nu.insert(nu.end(), rest - ap, 1);
            Form N = direct_sum(power(theta(R, f), k), rest ? zdiag(R, nu) : zero_form(R));
            ZiDiagResult dn = zi_diagonalize(N);
            if (dn.diagonalizable != Tri::Yes) continue;
            // Same normal form as M.
            ZiDiagonal x = zi_diagonal_normal(R, dn.diag.ones, dn.diag.is);
            ZiDiagonal y = zi_diagonal_normal(R, a, bb);
            if (x.ones == y.ones && x.is == y.is) hit = true;
          }
          if (hit) brute = k;
        }
        CAPTURE(a);
        CAPTURE(bb);
        CAPTURE(r);
        CHECK(g == brute);
      }
  }
}

TEST_CASE("g_F over Z") {
  Ring Z = Ring::integers();
  RElem one = Z.one(), zero = Z.zero();
  Form odd = diagonal(Z, {one, one, Z.from_int(-1), Z.from_int(-1)});
  CHECK(g_F(odd, one).value == 2);
  CHECK(g_F(odd, zero).value == 1);
  CHECK(g_F(power(hyperbolic(Z), 3), zero).value == 3);
  CHECK(g_F(power(hyperbolic(Z), 3), one).value == 0);
  CHECK(g_F(diagonal(Z, {one, one}), one).value == 0);
  CHECK(g_F(diagonal(Z, {one, one, Z.from_int(-1)}), zero).value == 1);
}

TEST_CASE("g_F over fields") {
  Ring R = F2();
  CHECK(g_F(diagonal(R, {R.one(), R.one(), R.one()}), R.one()).value == 1);
  CHECK(g_F(diagonal(R, {R.one(), R.one(), R.one()}), R.zero()).value == 1);
  CHECK(g_F(power(hyperbolic(R), 2), R.zero()).value == 2);
  CHECK(g_F(power(hyperbolic(R), 2), R.one()).value == 0);
  Ring F3 = Ring::finite_field(3, {0, 1});
  // Over F3, -1 is not a square: [1,1] is anisotropic, [1,-1] = H.
  CHECK(g_F(diagonal(F3, {F3.one(), F3.one()}), F3.zero()).value == 0);
  CHECK(g_F(diagonal(F3, {F3.one(), F3.from_int(-1)}), F3.zero()).value == 1);
  CHECK(g_F(diagonal(F3, {F3.one(), F3.one(), F3.one()}), F3.zero()).value == 1);
}

TEST_CASE("g_F over F2 agrees with exhaustive summand search") {
  Ring R = F2();
  for (int n = 1; n <= 4; ++n)
    for (const Form& M : all_forms(R, n))
      for (int fi = 0; fi < 2; ++fi) {
        RElem f = fi ? R.one() : R.zero();
        int brute = 0;
        for (int k = 1; 2 * k <= n; ++k) {
          bool hit = false;
          int rest = n - 2 * k;
          if (rest == 0) {
            hit = search_isometry(power(theta(R, f), k), M).has_value();
          } else {
            for (const Form& N : all_forms(R, rest))
              if (search_isometry(direct_sum(power(theta(R, f), k), N), M)) {
                hit = true;
                break;
              }
          }
          if (hit) brute = k;
        }
        CHECK(g_F(M, f).value == brute);
      }
}

TEST_CASE("groupoid membership examples") {
  Ring Z = Ring::integers();
  Groupoid met = make_groupoid(GroupoidKind::MetF, Z, Z.one());
  CHECK(groupoid_member(met, theta_sum(Z, {Z.one(), Z.zero()})));
  CHECK_FALSE(groupoid_member(met, power(hyperbolic(Z), 2)));
  CHECK(groupoid_member(met, zero_form(Z)));

  Ring R = ZI();
  Groupoid dz = make_groupoid(GroupoidKind::DiagZi, R, R.one());
  CHECK(groupoid_member(dz, zdiag(R, {0, 0, 0, 1})));
  CHECK_FALSE(groupoid_member(dz, zdiag(R, {0, 1})));
  CHECK_FALSE(groupoid_member(dz, hyperbolic(R)));
  // The splitting is witnessed by a certificate.
  SearchBudget b;
  b.height = 1;
  auto cert = search_isometry(direct_sum(theta(R, R.one()), zdiag(R, {0, 1})), zdiag(R, {0, 0, 0, 1}), b);
  REQUIRE(cert.has_value());
  check_iso(*cert);

  Ring F = F2();
  Groupoid full = make_groupoid(GroupoidKind::FullChar2, F, F.one());
  CHECK(groupoid_member(full, diagonal(F, {F.one(), F.one(), F.one()})));
  CHECK(g_F(diagonal(F, {F.one(), F.one(), F.one()}), F.one()).value == 1);

  CHECK_THROWS_AS(make_groupoid(GroupoidKind::DiagZi, Z, Z.one()), Error);
  CHECK_THROWS_AS(make_groupoid(GroupoidKind::DiagZi, R, R.zero()), Error);
  CHECK_THROWS_AS(make_groupoid(GroupoidKind::FullZ, R, R.one()), Error);
  CHECK_THROWS_AS(make_groupoid(GroupoidKind::MetF, Ring::quadratic(37), Ring::quadratic(37).one()), Error);
}

TEST_CASE("groupoid conditions hold on sampled members") {
  // 1: contains 0. 2: closed under sums. 3: closed under isometry.
  // 4: F is a member. 5: cancellation M + F = N + F implies M = N.
  struct Case {
    Groupoid G;
    std::vector<Form> members;
  };
  Ring Z = Ring::integers(), R = ZI(), F = F2();
  std::vector<Case> cases;
  cases.push_back({make_groupoid(GroupoidKind::MetF, Z, Z.one()),
                   {theta(Z, Z.one()), theta_sum(Z, {Z.one(), Z.zero()}), theta_sum(Z, {Z.from_int(3), Z.from_int(2)})}});
  cases.push_back({make_groupoid(GroupoidKind::MetF, R, R.gen()),
                   {theta(R, R.gen()), theta_sum(R, {R.gen(), R.one()}), theta_sum(R, {R.neg(R.gen()), gi(R, 1, 1)})}});
  cases.push_back({make_groupoid(GroupoidKind::DiagZi, R, R.one()),
                   {zdiag(R, {0, 0}), zdiag(R, {0, 0, 0, 1}), zdiag(R, {0, 0, 1, 1, 1})}});
  cases.push_back({make_groupoid(GroupoidKind::FullChar2, F, F.one()),
                   {diagonal(F, {F.one(), F.one()}), diagonal(F, {F.one(), F.one(), F.one()})}});
  cases.push_back({make_groupoid(GroupoidKind::FullZ, Z, Z.one()),
                   {theta(Z, Z.one()), diagonal(Z, {Z.one(), Z.one(), Z.from_int(-1)})}});
  for (const auto& c : cases) {
    CAPTURE(groupoid_name(c.G.kind));
    const Form Fm = theta(c.G.R, c.G.f);
    CHECK(groupoid_member(c.G, zero_form(c.G.R)));
    CHECK(groupoid_member(c.G, Fm));
    for (const Form& M : c.members) {
      CHECK(groupoid_member(c.G, M));
      CHECK(groupoid_member(c.G, conjugate(M, random_unimodular(c.G.R, M.rank(), 5))));
      for (const Form& N : c.members) CHECK(groupoid_member(c.G, direct_sum(M, N)));
    }
  }
  // Cancellation for Met_F: N built so that M + F = N + F.
  Ring ZZ = Ring::integers();
  for (int t = 0; t < 20; ++t) {
    RElem a = random_elem(ZZ, 3), b = random_elem(ZZ, 3);
    Form M = theta_sum(ZZ, {ZZ.one(), a});
    Form N = theta_sum(ZZ, {ZZ.one(), b});
    Form Fm = theta(ZZ, ZZ.one());
    IsoVerdict sum = metabolic_isometry(direct_sum(M, Fm), direct_sum(N, Fm));
    REQUIRE(sum.kind == IsoVerdict::Isometric);
    IsoVerdict can = metabolic_isometry(M, N);
    CHECK(can.kind == IsoVerdict::Isometric);
    if (can.cert) check_iso(*can.cert);
  }
}
