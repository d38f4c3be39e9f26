#include "doctest.h"
#include "sbf/error.hpp"
#include "sbf/posets.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <set>

using namespace sbf;

namespace {

Ring F2() { return Ring::finite_field(2, {0, 1}); }
Ring F4() { return Ring::finite_field(2, {1, 1, 1}); }
Ring F3() { return Ring::finite_field(3, {0, 1}); }

Form H(const Ring& R, int k = 1) { return power(hyperbolic(R), k); }
Form T1(const Ring& R, int k = 1) { return power(theta(R, R.one()), k); }

long unit_code(const CodeSpace& S, int i) {
  long c = 1;
  for (int j = 0; j < i; ++j) c *= S.q();
  return c;
}

Mat seq_matrix(const CodeSpace& S, const Seq& s) { return S.matrix(std::vector<long>(s.begin(), s.end())); }

bool is_witness(const CodeSpace& S, const Seq& v, const Seq& w) {
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) {
      if (S.pair(v[i], w[j]) != (i == j ? 1 : 0)) return false;
      if (i != j && S.pair(w[i], w[j]) != 0) return false;
    }
  return true;
}

// Generic route: witnesses and complement through the form layer.
Form generic_complement(const CodeSpace& S, const Seq& v) {
  WitnessPair wp = witnessing_sequence(S.form(), seq_matrix(S, v));
  REQUIRE(check_witness_pair(S.form(), wp));
  return orthogonal_complement(S.form(), plane_basis(wp)).form;
}

Form complement_of(const CodeSpace& S, const Seq& v, const Seq& w) {
  Seq g = v;
  g.insert(g.end(), w.begin(), w.end());
  return orthogonal_complement(S.form(), seq_matrix(S, g)).form;
}

bool generic_parity_preserving(const CodeSpace& S, const Seq& v) {
  return parity(generic_complement(S, v)) == parity(S.form());
}

bool generic_fully(const CodeSpace& S, const Groupoid& G, const Seq& v) {
  Form N = generic_complement(S, v);
  return parity(N) == parity(S.form()) && N.rank() > 0 && g_F(N, G.f).value >= 1;
}

struct Case {
  Form M;
  Groupoid G;
};

// Forms over F2 (rank <= 6) and F4 (rank <= 4) with the groupoids that contain them.
std::vector<Case> small_cases() {
  std::vector<Case> out;
  for (const Ring& R : {F2(), F4()}) {
    const int max_rank = R.field_order() == 2 ? 6 : 4;
    auto add = [&](const Form& M, GroupoidKind kind, const RElem& f) {
      if (M.rank() <= max_rank) out.push_back({M, make_groupoid(kind, R, f)});
    };
    for (int k = 1; k <= 3; ++k) {
      add(H(R, k), GroupoidKind::MetF, R.zero());
      add(H(R, k), GroupoidKind::FullChar2, R.zero());
      add(T1(R, k), GroupoidKind::MetF, R.one());
      add(T1(R, k), GroupoidKind::FullChar2, R.one());
      add(direct_sum(H(R, k), T1(R)), GroupoidKind::FullChar2, R.one());
      add(direct_sum(H(R, k), T1(R)), GroupoidKind::FullChar2, R.zero());
    }
    add(diagonal(R, {R.one(), R.one(), R.one()}), GroupoidKind::FullChar2, R.one());
  }
  return out;
}

}  // namespace

TEST_CASE("code space agrees with the form layer") {
  Form M = direct_sum(H(F4()), diagonal(F4(), {F4().one(), F4().gen()}));
  CodeSpace S(M);
  CHECK(S.size() == 256);
  for (int t = 0; t < 300; ++t) {
    long x = testutil::uniform(0, S.size() - 1), y = testutil::uniform(0, S.size() - 1);
    CHECK(S.code(S.vec(x)) == x);
    CHECK(S.ring().element(S.pair(x, y)) == M.pair(S.vec(x), S.vec(y)));
    Vec sum = S.vec(x);
    for (int i = 0; i < M.rank(); ++i) sum[i] = M.R.add(sum[i], S.vec(y)[i]);
    CHECK(S.vec(S.add(x, y)) == sum);
  }
  CHECK(S.span({1, 4}).size() == 16);
  CHECK(S.independent({1, 4}));
  CHECK_FALSE(S.independent({1, 4, S.add(1, 4)}));
  CHECK_THROWS_AS(CodeSpace(H(F2(), 12)), Error);
}

TEST_CASE("isotropic unimodular posets over F2") {
  CodeSpace S1(H(F2()));
  SeqPoset P1 = build_IU(S1, 4);
  CHECK(P1.size() == 3);
  CHECK(P1.count_len(1) == 3);
  CHECK(P1.count_len(2) == 0);

  // Every vector of H^2 over F2 is isotropic: 15 nonzero vectors.
  CodeSpace S2(H(F2(), 2));
  SeqPoset P2 = build_IU(S2, 4);
  long iso = 0;
  for (long x = 1; x < S2.size(); ++x)
    if (S2.form().R.is_zero(S2.form().value(S2.vec(x)))) ++iso;
  CHECK(iso == 15);
  CHECK(P2.count_len(1) == 15);
  CHECK(P2.max_len() == 2);
  CHECK(is_downward_closed(P2));

  // Brute force of length-2 vertices.
  long pairs = 0;
  for (long x = 1; x < S2.size(); ++x)
    for (long y = 1; y < S2.size(); ++y)
      if (x != y && S2.pair(x, y) == 0 && S2.independent({x, y})) ++pairs;
  CHECK(P2.count_len(2) == pairs);

  CodeSpace ST(T1(F2()));
  SeqPoset U = build_Uprime(ST, 3);
  REQUIRE(U.size() == 1);
  CHECK(U.verts[0] == Seq{unit_code(ST, 0)});

  // Unimodular sequences in a rank-2 space: ordered partial bases.
  SeqPoset UU = build_U(ST, 3);
  CHECK(UU.count_len(1) == 3);
  CHECK(UU.count_len(2) == 6);

  PosetBudget tiny{5};
  CHECK_THROWS_AS(build_IU(S2, 2, tiny), Error);
}

TEST_CASE("isotropic unimodular posets over F4 and F3 match brute force") {
  for (const Form& M : {direct_sum(H(F4()), T1(F4())), direct_sum(H(F3()), diagonal(F3(), {F3().one()}))}) {
    CodeSpace S(M);
    SeqPoset P = build_IU(S, 3);
    CHECK(is_downward_closed(P));
    long ones = 0;
    for (long x = 1; x < S.size(); ++x)
      if (S.value(x) == 0) ++ones;
    CHECK(P.count_len(1) == ones);
    for (const auto& v : P.verts) {
      Mat V = seq_matrix(S, v);
      CHECK(mat_pair(M.R, V, M.G, V) == mat_zero(M.R, V.cols, V.cols));
      CHECK(S.independent(v));
    }
  }
}

TEST_CASE("complement posets") {
  CodeSpace S2(H(F2(), 2));
  SeqPoset P2 = build_IU(S2, 4);
  const Seq e1 = {unit_code(S2, 0)};
  ComplementCheck c = complement_check(S2, P2, e1, 4);
  CHECK(c.bijective);
  CHECK(c.N.rank() == 2);
  CHECK(c.local.size() == 6);  // IU(H) x span(e1) = 3 x 2
  CHECK(c.comparison.size() == 6);

  // Maximal sequences have empty complement posets.
  for (const auto& v : P2.verts)
    if (static_cast<int>(v.size()) == P2.max_len()) CHECK(complement_poset(P2, v).size() == 0);
  CHECK_THROWS_AS(complement_poset(P2, Seq{0}), Error);

  CodeSpace S3(H(F2(), 3));
  SeqPoset P3 = build_IU(S3, 3);
  const Seq e12 = {unit_code(S3, 0), unit_code(S3, 2)};
  SeqPoset L = complement_poset(P3, e12);
  CHECK(L.count_len(1) == 3 * 4);

  // Exhaustive over x of length <= 2.
  for (const auto& x : P3.verts)
    if (x.size() <= 2) CHECK(complement_check(S3, P3, x, 3).bijective);
}

TEST_CASE("product posets and maps") {
  CodeSpace S(H(F2()));
  SeqPoset P = build_IU(S, 2);
  SeqPoset P1 = product_poset(P, 1);
  CHECK(P1.size() == P.size());
  SeqPoset P2 = product_poset(P, 2);
  CHECK(P2.count_len(1) == 6);

  SeqPoset single = make_seq_poset("one", {{7}});
  CHECK(product_poset(single, 2).size() == 2);
  CHECK(order_of(product_poset(single, 2)).above[0].empty());

  CodeSpace S2(H(F2(), 2));
  SeqPoset Q = build_IU(S2, 2);
  SeqPoset Q3 = product_poset(Q, 3);
  CHECK(Q3.count_len(2) == Q.count_len(2) * 9);
  CHECK(is_downward_closed(Q3));
  auto sec = section_map(Q, Q3, 3, 1);
  auto proj = projection_map(Q3, Q, 3);
  for (int i = 0; i < Q.size(); ++i) CHECK(proj[sec[i]] == i);
  std::set<int> img(sec.begin(), sec.end());
  CHECK(img.size() == sec.size());
}

TEST_CASE("links and fibres") {
  CodeSpace S(H(F2(), 2));
  SeqPoset P = build_IU(S, 2);
  Poset O = order_of(P);
  const int e1 = P.find({unit_code(S, 0)});
  REQUIRE(e1 >= 0);
  std::vector<int> expect;
  for (int j = 0; j < P.size(); ++j)
    if (P.verts[j].size() > 1 && is_subsequence(P.verts[e1], P.verts[j])) expect.push_back(j);
  CHECK(link_plus(O, e1) == expect);
  CHECK(link_minus(O, e1).empty());
  for (int j = 0; j < P.size(); ++j) {
    if (P.verts[j].size() == 2) {
      CHECK(link_plus(O, j).empty());
      CHECK(link_minus(O, j).size() == 2);
    }
  }
  auto lk = link(O, e1);
  CHECK(lk.size() == expect.size());

  // Fibre of the identity over w is the downward closure of w.
  std::vector<int> id(P.size());
  for (int i = 0; i < P.size(); ++i) id[i] = i;
  for (int w = 0; w < P.size(); ++w) {
    auto f = fiber(O, id, w);
    CHECK(static_cast<long>(f.size()) == (1L << P.verts[w].size()) - 1);
  }
  Poset I = induced(O, lk);
  CHECK(I.size == static_cast<int>(lk.size()));
}

TEST_CASE("witnesses") {
  for (const Case& c : small_cases()) {
    CodeSpace S(c.M);
    SeqPoset P = build_IU(S, 2);
    for (const auto& v : P.verts) {
      WitnessCodes wc = witness_codes(S, v);
      CHECK(is_witness(S, v, wc.w));
      auto all = all_witnesses(S, v);
      CHECK(std::find(all.begin(), all.end(), wc.w) != all.end());
      for (const auto& w : all) CHECK(is_witness(S, v, w));
    }
  }
  CodeSpace S3(H(F3()));
  WitnessCodes wc = witness_codes(S3, {unit_code(S3, 0)});
  CHECK(S3.value(wc.w[0]) == 0);
}

TEST_CASE("parity preservation") {
  Ring R = F2();
  {
    CodeSpace S(H(R, 3));
    FLikeOracle O(S, make_groupoid(GroupoidKind::MetF, R, R.zero()));
    for (const auto& v : build_IU(S, 3).verts) CHECK(O.parity_preserving(v));
  }
  {
    CodeSpace S(direct_sum(H(R), T1(R)));
    FLikeOracle O(S, make_groupoid(GroupoidKind::FullChar2, R, R.one()));
    CHECK(O.parity_preserving({unit_code(S, 0)}));
  }
  {
    // theta(1)^2 has an isotropic vector whose complement is hyperbolic.
    CodeSpace S(T1(R, 2));
    FLikeOracle O(S, make_groupoid(GroupoidKind::MetF, R, R.one()));
    long bad = 0;
    for (const auto& v : build_IU(S, 1).verts) {
      bool pp = O.parity_preserving(v);
      CHECK(pp == generic_parity_preserving(S, v));
      if (!pp) {
        ++bad;
        CHECK(parity(generic_complement(S, v)).elements == std::vector<int>{0});
      }
    }
    CHECK(bad > 0);
  }
  for (const Case& c : small_cases()) {
    CodeSpace S(c.M);
    FLikeOracle O(S, c.G);
    for (const auto& v : build_IU(S, 3).verts) CHECK(O.parity_preserving(v) == generic_parity_preserving(S, v));
  }
}

TEST_CASE("fully F-like sequences") {
  Ring R = F2();
  for (bool odd : {false, true}) {
    const RElem f = odd ? R.one() : R.zero();
    CodeSpace S(power(theta(R, f), 2));
    FLikeOracle O(S, make_groupoid(GroupoidKind::MetF, R, f));
    const long f1 = unit_code(S, 0), f2 = unit_code(S, 2);
    CHECK(O.fully_F_like({f1}));
    CHECK(O.fully_F_like({f2}));
    CHECK_FALSE(O.fully_F_like({f1, f2}));
  }
  // A parity preserving sequence whose complement has an H summand.
  {
    Form M = direct_sum(H(R, 2), T1(R));
    CodeSpace S(M);
    FLikeOracle O(S, make_groupoid(GroupoidKind::FullChar2, R, R.one()));
    const Seq v = {unit_code(S, 0)};
    REQUIRE(O.parity_preserving(v));
    CHECK(g_F(generic_complement(S, v), R.zero()).value >= 1);
    CHECK(O.fully_F_like(v));
  }
  for (const Case& c : small_cases()) {
    CodeSpace S(c.M);
    FLikeOracle O(S, c.G);
    for (const auto& v : build_IU(S, 3).verts) CHECK(O.fully_F_like(v) == generic_fully(S, c.G, v));
  }
}

TEST_CASE("five criteria for full F-likeness agree") {
  for (const Case& c : small_cases()) {
    CodeSpace S(c.M);
    FLikeOracle O(S, c.G);
    for (const auto& v : build_IU(S, 3).verts) {
      auto crit = O.realstuff_criteria(v);
      REQUIRE(crit.size() == 5);
      for (int i = 1; i < 5; ++i) CHECK(crit[i] == crit[0]);
      CHECK(crit[0] == O.fully_F_like(v));
    }
  }
}

TEST_CASE("partly F-like repair") {
  for (const Case& c : small_cases()) {
    CodeSpace S(c.M);
    FLikeOracle O(S, c.G);
    for (const auto& v : build_IU(S, 3).verts) {
      auto w = O.create_partly_F_like(v);
      CHECK(w.has_value() == O.parity_preserving(v));
      if (!w) continue;
      CHECK(is_witness(S, v, *w));
      CHECK(O.partly_F_like(*w));
    }
  }
}

TEST_CASE("witness splitting the parity") {
  for (const Case& c : small_cases()) {
    if (complexity(c.M) == 0) continue;
    CodeSpace S(c.M);
    FLikeOracle O(S, c.G);
    const ParitySpace PM = parity(c.M);
    for (const auto& v : build_IU(S, 2).verts) {
      auto w = O.reader_friendly_witness(v);
      REQUIRE(w.has_value());
      CHECK(is_witness(S, v, *w));
      Seq g = v;
      g.insert(g.end(), w->begin(), w->end());
      const ParitySpace Pe = parity(restrict_form(c.M, seq_matrix(S, g)).form);
      const ParitySpace Pc = parity(complement_of(S, v, *w));
      CHECK(parity_sum(c.M.R, Pe, Pc) == PM);
      CHECK(Pe.dim() + Pc.dim() == PM.dim());
      // Subsequences: parity preserving iff the dropped values span P(e).
      const int k = static_cast<int>(v.size());
      for (int mask = 1; mask < (1 << k); ++mask) {
        Seq sub;
        std::vector<int> dropped;
        for (int i = 0; i < k; ++i) {
          if (mask >> i & 1)
            sub.push_back(v[i]);
          else
            dropped.push_back(S.residue(S.value((*w)[i])));
        }
        CHECK(O.parity_preserving(sub) == (parity_from_generators(c.M.R, dropped) == Pe));
      }
    }
  }
}

TEST_CASE("FU and FIU posets") {
  Ring R = F2();
  const Groupoid MetH = make_groupoid(GroupoidKind::MetF, R, R.zero());
  {
    CodeSpace S(H(R));
    FLikeOracle O(S, MetH);
    CHECK(build_FU(O, 2).size() == 0);
    CHECK(count_F_embeddings(O, 1) == 0);
  }
  {
    // Embeddings H -> H^2: |O(H^2)| / |O(H)| = 720 / 6.
    CodeSpace S(H(R, 2));
    FLikeOracle O(S, MetH);
    SeqPoset FU = build_FU(O, 2);
    CHECK(FU.size() == 120);
    CHECK(FU.max_len() == 1);
    CHECK(count_F_embeddings(O, 1) == 120);
    CHECK(is_downward_closed(FU));
  }
  {
    CodeSpace S(H(R, 3));
    FLikeOracle O(S, MetH);
    SeqPoset FIU = build_FIU(O, 3);
    CHECK(FIU.size() > 0);
    CHECK(FIU.max_len() == 2);
    CHECK(is_downward_closed(FIU));
    SeqPoset FU = build_FU(O, 3);
    CHECK(FU.count_len(1) == count_F_embeddings(O, 1));
    CHECK(FU.count_len(2) == count_F_embeddings(O, 2));
    CHECK(FU.count_len(3) == 0);
  }
  {
    CodeSpace S(T1(R, 2));
    FLikeOracle O(S, make_groupoid(GroupoidKind::MetF, R, R.one()));
    CHECK(build_FU(O, 2).size() == count_F_embeddings(O, 1));
  }
}

TEST_CASE("g_v bounds and properties") {
  Ring R = F2();
  {
    CodeSpace S(H(R, 3));
    FLikeOracle O(S, make_groupoid(GroupoidKind::MetF, R, R.zero()));
    GvReport g = g_v(O, {unit_code(S, 0), unit_code(S, 2)});
    CHECK(g.g_v == 0);
    CHECK(g.prop2);
    CHECK(g.prop3);
    CHECK_THROWS_AS(g_v(O, {unit_code(S, 0)}), Error);
  }
  for (int k = 2; k <= 3; ++k) {
    CodeSpace S(H(R, k));
    FLikeOracle O(S, make_groupoid(GroupoidKind::MetF, R, R.zero()));
    Seq f;
    for (int i = 0; i < k; ++i) f.push_back(unit_code(S, 2 * i));
    CHECK(g_v(O, f).g_v == 1);
  }
  for (const Case& c : small_cases()) {
    CodeSpace S(c.M);
    FLikeOracle O(S, c.G);
    for (const auto& v : build_IU(S, 3).verts) {
      if (static_cast<int>(v.size()) < O.complexity() + 2) continue;
      GvReport g = g_v(O, v);
      CHECK(g.bound_ok);
      CHECK(g.prop1);
      CHECK(g.prop2);
      CHECK(g.prop3);
    }
  }
}

TEST_CASE("matroid good faces") {
  Ring R = F2();
  auto v = [&](long a, long b) { return Vec{R.from_int(a), R.from_int(b)}; };
  {
    MatroidComplex X = matroid_good_faces(R, {v(1, 0), v(0, 1)});
    CHECK(X.faces.size() == 1);  // only the empty face
    CHECK(X.facets.size() == 1);
  }
  {
    MatroidComplex X = matroid_good_faces(R, {v(1, 0), v(0, 1), v(1, 1)});
    CHECK(X.facets.size() == 3);
    CHECK(X.faces.size() == 4);
    CHECK(X.exchange_ok);
  }
  {
    MatroidComplex X = matroid_good_faces(R, {v(1, 0), v(0, 1), v(1, 1), v(1, 0)});
    // Edges whose complement is a basis, by brute force.
    long expect = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        std::vector<int> rest;
        for (int t = 0; t < 4; ++t)
          if (t != i && t != j) rest.push_back(t);
        std::vector<Vec> vs = {v(1, 0), v(0, 1), v(1, 1), v(1, 0)};
        if (!(vs[rest[0]] == vs[rest[1]])) ++expect;
      }
    CHECK(static_cast<long>(X.facets.size()) == expect);
    CHECK(X.exchange_ok);
  }
  CHECK_THROWS_AS(matroid_good_faces(R, {v(1, 0), v(1, 0)}), Error);
}
