#include "sbf/classify.hpp"

#include "sbf/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace sbf {

// ---------------------------------------------------------------------------
// Certificate search

namespace {

std::vector<Vec> box_vectors(const Ring& R, int n, long h, long cap) {
  std::vector<Vec> out;
  if (R.is_field()) {
    const long q = R.field_order();
    long total = 1;
    for (int i = 0; i < n; ++i) {
      total *= q;
      if (total > cap) return {};
    }
    for (long code = 0; code < total; ++code) {
      Vec v(n);
      long c = code;
      for (int i = 0; i < n; ++i) {
        v[i] = R.element(c % q);
        c /= q;
      }
      out.push_back(std::move(v));
    }
    return out;
  }
  const int k = R.dim();
  std::vector<long> c(n * k, -h);
  for (;;) {
    if (static_cast<long>(out.size()) >= cap) return {};
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      std::vector<Int> co(k);
      for (int t = 0; t < k; ++t) co[t] = c[i * k + t];
      v[i] = R.make(co);
    }
    out.push_back(std::move(v));
    int pos = n * k - 1;
    while (pos >= 0 && c[pos] == h) c[pos--] = -h;
    if (pos < 0) break;
    ++c[pos];
  }
  return out;
}

RElem dot(const Ring& R, const Vec& a, const Vec& b) {
  RElem s = R.zero();
  for (size_t i = 0; i < a.size(); ++i)
    if (!R.is_zero(a[i]) && !R.is_zero(b[i])) s = R.add(s, R.mul(a[i], b[i]));
  return s;
}

}  // namespace

std::optional<Isometry> search_isometry(const Form& M, const Form& N, const SearchBudget& b) {
  const Ring& R = M.R;
  require(R == N.R, ErrorKind::Input, "isometry search across different rings");
  const int n = M.rank();
  if (N.rank() != n) return std::nullopt;
  if (n == 0) return identity_isometry(M);
  const long hmax = R.is_field() ? 1 : std::max(1L, b.height);
  for (long h = 1; h <= hmax; ++h) {
    std::vector<Vec> box = box_vectors(R, n, h, b.max_vectors);
    if (box.empty()) return std::nullopt;
    // Candidates per column: value matches the source diagonal.
    std::vector<Vec> gx(box.size());
    std::vector<RElem> val(box.size());
    for (size_t i = 0; i < box.size(); ++i) {
      gx[i] = column_vec(mat_mul(R, N.G, cols_matrix(R, n, {box[i]})), 0);
      val[i] = dot(R, box[i], gx[i]);
    }
    std::vector<std::vector<size_t>> cand(n);
    for (int j = 0; j < n; ++j)
      for (size_t i = 0; i < box.size(); ++i)
        if (val[i] == M.G(j, j)) cand[j].push_back(i);
    std::vector<size_t> pick(n);
    long nodes = b.max_vectors;
    std::optional<Isometry> found;
    std::function<bool(int)> dfs = [&](int j) -> bool {
      if (j == n) {
        std::vector<Vec> cols;
        for (int t = 0; t < n; ++t) cols.push_back(box[pick[t]]);
        Mat T = cols_matrix(R, n, cols);
        if (!verify_isometry(T, M, N)) return false;
        found = Isometry{M, N, T};
        return true;
      }
      for (size_t i : cand[j]) {
        if (--nodes < 0) return true;
        bool ok = true;
        for (int t = 0; t < j && ok; ++t) ok = dot(R, box[pick[t]], gx[i]) == M.G(t, j);
        if (!ok) continue;
        pick[j] = i;
        if (dfs(j + 1)) return true;
      }
      return false;
    };
    dfs(0);
    if (found) return found;
    if (nodes < 0) return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Integers

ZClass classify_z(const Form& M) {
  require(M.R.kind() == RingKind::Integers, ErrorKind::Input, "Z classification needs a form over Z");
  ZClass c;
  c.rank = M.rank();
  std::tie(c.pos, c.neg) = signature_z(M);
  for (int i = 0; i < M.rank(); ++i)
    if (M.R.mod2().reduce(M.R, M.G(i, i)) != 0) c.odd = true;
  return c;
}

ZVerdict z_isometry(const Form& M, const Form& N, const SearchBudget& b) {
  ZVerdict out;
  ZClass a = classify_z(M), c = classify_z(N);
  if (!(a == c)) {
    out.verdict.kind = IsoVerdict::NotIsometric;
    out.verdict.reason = a.rank != c.rank ? "rank" : (a.pos != c.pos || a.neg != c.neg) ? "signature" : "parity";
    out.exactness = Exactness::Exact;
    return out;
  }
  if (a.pos == a.neg) {
    // Indefinite with p = q: metabolic, so the normal forms give a certificate.
    out.verdict = metabolic_isometry(M, N, b);
    out.exactness = Exactness::Exact;
    return out;
  }
  if (auto iso = search_isometry(M, N, b)) {
    out.verdict.kind = IsoVerdict::Isometric;
    out.verdict.cert = *iso;
    out.verdict.reason = "certificate search";
    out.exactness = Exactness::Exact;
    return out;
  }
  if (!a.definite()) {
    out.verdict.kind = IsoVerdict::Isometric;
    out.verdict.reason = "indefinite forms with equal rank, signature and parity";
    out.exactness = Exactness::TheoremBacked;
    return out;
  }
  out.verdict.kind = IsoVerdict::Unknown;
  out.verdict.reason = "definite forms: certificate search exhausted";
  out.exactness = Exactness::Unknown;
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic 2 fields

namespace {

RElem field_sqrt_char2(const Ring& R, const RElem& a) {
  // Frobenius is bijective: sqrt(a) = a^(q/2).
  return R.pow(a, static_cast<unsigned long>(R.field_order() / 2));
}

}  // namespace

Char2NF char2_normal_form(const Form& M) {
  const Ring& R = M.R;
  require(R.is_field() && R.characteristic() == 2, ErrorKind::Input, "needs a finite field of characteristic 2");
  const int n = M.rank();
  Char2NF out;
  out.alternating = true;
  for (int i = 0; i < n; ++i)
    if (!R.is_zero(M.G(i, i))) out.alternating = false;
  std::vector<Vec> basis;  // canonical basis vectors in M coordinates
  SubForm cur{M, mat_identity(R, n)};
  auto to_m = [&](const Vec& x) { return column_vec(mat_mul(R, cur.inclusion, cols_matrix(R, cur.form.rank(), {x})), 0); };
  // [1] (+) H -> [1]^3: columns (1,1,1), (1,1,0), (1,0,1) in the orthonormal basis.
  const Mat mix = [&] {
    Mat T = mat_zero(R, 3, 3);
    int e[3][3] = {{1, 1, 1}, {1, 1, 0}, {1, 0, 1}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) T(i, j) = R.from_int(e[i][j]);
    return *mat_inverse(R, T);
  }();
  while (cur.form.rank() > 0) {
    const Form& C = cur.form;
    const int m = C.rank();
    int odd = -1;
    for (int i = 0; i < m && odd < 0; ++i)
      if (!R.is_zero(C.G(i, i))) odd = i;
    if (odd >= 0) {
      Vec x = unit_vec(R, m, odd);
      x[odd] = *R.unit_inverse(field_sqrt_char2(R, C.G(odd, odd)));
      Vec xm = to_m(x);
      basis.push_back(xm);
      SubForm comp = orthogonal_complement(M, cols_matrix(R, n, basis));
      cur = comp;
      continue;
    }
    // Alternating: a hyperbolic pair e, f.
    int pi = 0, pj = -1;
    for (int j = 0; j < m; ++j)
      if (!R.is_zero(C.G(0, j))) {
        pj = j;
        break;
      }
    require(pj >= 0, ErrorKind::Internal, "degenerate alternating block");
    Vec e = unit_vec(R, m, pi), f = unit_vec(R, m, pj);
    f[pj] = *R.unit_inverse(C.G(pi, pj));
    Vec em = to_m(e), fm = to_m(f);
    if (out.alternating) {
      basis.push_back(em);
      basis.push_back(fm);
    } else {
      // Fold the pair into the last orthonormal vector a: (a, e, f) spans
      // [1] (+) H; mix gives three orthonormal vectors.
      Vec a = basis.back();
      basis.pop_back();
      Mat S = cols_matrix(R, n, {a, em, fm});
      Mat O = mat_mul(R, S, mix);
      for (int t = 0; t < 3; ++t) basis.push_back(column_vec(O, t));
    }
    cur = orthogonal_complement(M, cols_matrix(R, n, basis));
  }
  out.canonical = out.alternating ? power(hyperbolic(R), n / 2) : power(diagonal(R, {R.one()}), n);
  Mat X = n ? cols_matrix(R, n, basis) : mat_zero(R, 0, 0);
  out.cert = inverse(make_isometry(out.canonical, M, X));
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian integers

namespace {

void require_zi(const Ring& R) {
  require(R.kind() == RingKind::Quadratic && R.disc() == -1, ErrorKind::Unsupported, "needs Z[i]");
}

Mat zi_mat(const Ring& R, const std::vector<std::vector<std::pair<long, long>>>& rows) {
  Mat T = mat_zero(R, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < T.rows; ++i)
    for (int j = 0; j < T.cols; ++j) T(i, j) = R.make({Int(rows[i][j].first), Int(rows[i][j].second)});
  return T;
}

RElem zi_unit(const Ring& R, int unit) { return unit ? R.gen() : R.one(); }

Form zi_diag(const Ring& R, const std::vector<int>& units) {
  std::vector<RElem> e;
  for (int u : units) e.push_back(zi_unit(R, u));
  return units.empty() ? zero_form(R) : diagonal(R, e);
}

}  // namespace

Isometry zi_theta_to_diagonal(const Ring& R, bool imaginary) {
  require_zi(R);
  if (!imaginary) return make_isometry(theta(R, R.one()), zi_diag(R, {0, 0}), zi_mat(R, {{{1, 0}, {1, 0}}, {{0, 1}, {0, 0}}}));
  return make_isometry(theta(R, R.gen()), zi_diag(R, {1, 1}), zi_mat(R, {{{0, -1}, {1, 0}}, {{1, 0}, {0, 0}}}));
}

Isometry zi_odd_diagonalize(const Ring& R, int plane, int unit) {
  require_zi(R);
  require(plane >= 0 && plane < 4 && (unit == 0 || unit == 1), ErrorKind::Input, "plane in 0..3, unit in {0, 1}");
  const RElem classes[4] = {R.zero(), R.one(), R.gen(), R.add(R.one(), R.gen())};
  Form src = direct_sum(theta(R, classes[plane]), zi_diag(R, {unit}));
  using P = std::pair<long, long>;
  const P o{0, 0}, one{1, 0}, m1{-1, 0}, i{0, 1}, mi{0, -1};
  switch (plane) {
    case 0:
      if (unit == 0)  // (x1 + x2 + i x3, i x1 - x3, i x2 - x3)
        return make_isometry(src, zi_diag(R, {0, 0, 0}), zi_mat(R, {{one, one, i}, {i, o, m1}, {o, i, m1}}));
      // (x1 - i x2 + i x3, i x1 - x3, x2 - x3)
      return make_isometry(src, zi_diag(R, {1, 1, 1}), zi_mat(R, {{one, mi, i}, {i, o, m1}, {o, one, m1}}));
    case 1:
    case 2: {
      Isometry t = zi_theta_to_diagonal(R, plane == 2);
      return iso_sum(t, identity_isometry(zi_diag(R, {unit})));
    }
    default:
      if (unit == 0)  // (x1 - x3, i x1 - x2 - i x3, x2 + x3)
        return make_isometry(src, zi_diag(R, {1, 1, 0}), zi_mat(R, {{one, o, m1}, {i, m1, mi}, {o, one, one}}));
      // (i x1 - x3, x1 + x2 + i x3, x2 - x3)
      return make_isometry(src, zi_diag(R, {0, 0, 1}), zi_mat(R, {{i, o, m1}, {one, one, i}, {o, one, m1}}));
  }
}

namespace {

// Isometry diag(1,1,1,i) -> diag(i,i,i,1) through theta(0) (+) [1] (+) [i].
Isometry zi_exchange(const Ring& R) {
  Isometry a = zi_odd_diagonalize(R, 0, 0);  // theta(0)+[1] -> diag(1,1,1)
  Isometry b = zi_odd_diagonalize(R, 0, 1);  // theta(0)+[i] -> diag(i,i,i)
  // diag(1,1,1,i) -> theta(0)+[1]+[i] -> theta(0)+[i]+[1] -> diag(i,i,i,1)
  Isometry first = iso_sum(inverse(a), identity_isometry(zi_diag(R, {1})));
  Form mid = first.target;
  Mat P = mat_identity(R, 4);
  P(2, 2) = R.zero();
  P(3, 3) = R.zero();
  P(2, 3) = R.one();
  P(3, 2) = R.one();
  Form swapped = direct_sum(theta(R, R.zero()), zi_diag(R, {1, 0}));
  Isometry perm = make_isometry(mid, swapped, P);
  Isometry last = iso_sum(b, identity_isometry(zi_diag(R, {0})));
  return compose(last, compose(perm, first));
}

// Isometry on a diagonal form replacing the entries at idx by the target of
// the block isometry B (whose source matches those entries).
Isometry apply_block(const Form& cur, const std::vector<int>& idx, const Isometry& B) {
  const Ring& R = cur.R;
  Mat T = mat_identity(R, cur.rank());
  Mat G = cur.G;
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t c = 0; c < idx.size(); ++c) {
      T(idx[a], idx[c]) = B.T(a, c);
      G(idx[a], idx[c]) = B.target.G(a, c);
    }
  return make_isometry(cur, Form{R, G}, T);
}

std::vector<int> diag_units(const Form& D) {
  std::vector<int> u;
  for (int i = 0; i < D.rank(); ++i) u.push_back(D.G(i, i) == D.R.one() ? 0 : 1);
  return u;
}

Isometry sort_diag(const Form& D) {
  const Ring& R = D.R;
  std::vector<int> u = diag_units(D);
  std::vector<int> order(u.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return u[a] < u[b]; });
  std::vector<int> su;
  Mat T = mat_zero(R, D.rank(), D.rank());
  for (size_t k = 0; k < order.size(); ++k) {
    su.push_back(u[order[k]]);
    T(static_cast<int>(k), order[k]) = R.one();
  }
  return make_isometry(D, zi_diag(R, su), T);
}

}  // namespace

ZiDiagonal zi_diagonal_normal(const Ring& R, int ones, int is) {
  require_zi(R);
  const int n = ones + is;
  int target_is = is;
  if (ones > 0 && is > 0) target_is = is % 2 ? 1 : 2;
  ZiDiagonal out;
  out.ones = n - target_is;
  out.is = target_is;
  std::vector<int> u(ones, 0);
  u.insert(u.end(), is, 1);
  Form cur = zi_diag(R, u);
  Isometry acc = identity_isometry(cur);
  Isometry ex = zi_exchange(R);
  Isometry exinv = inverse(ex);
  for (;;) {
    std::vector<int> cu = diag_units(acc.target);
    int cis = static_cast<int>(std::count(cu.begin(), cu.end(), 1));
    if (cis == target_is) break;
    std::vector<int> idx;
    if (cis < target_is) {  // three 1's and one i become three i's and one 1
      for (int k = 0; k < n && idx.size() < 3; ++k)
        if (cu[k] == 0) idx.push_back(k);
      for (int k = 0; k < n; ++k)
        if (cu[k] == 1) {
          idx.push_back(k);
          break;
        }
      acc = compose(apply_block(acc.target, idx, ex), acc);
    } else {
      for (int k = 0; k < n && idx.size() < 3; ++k)
        if (cu[k] == 1) idx.push_back(k);
      for (int k = 0; k < n; ++k)
        if (cu[k] == 0) {
          idx.push_back(k);
          break;
        }
      acc = compose(apply_block(acc.target, idx, exinv), acc);
    }
  }
  out.cert = compose(sort_diag(acc.target), acc);
  return out;
}

ZiDiagResult zi_diagonalize(const Form& M, const SearchBudget& b) {
  const Ring& R = M.R;
  require_zi(R);
  const Mod2Ctx& m = R.mod2();
  const int n = M.rank();
  ZiDiagResult out;
  const int r1 = m.reduce(R, R.one()), ri = m.reduce(R, R.gen());
  ParitySpace P = parity(M);
  if (n == 0) {
    out.diagonalizable = Tri::Yes;
    out.diag.cert = identity_isometry(M);
    return out;
  }
  if (!P.contains(r1) && !P.contains(ri)) {
    out.diagonalizable = Tri::No;
    out.reason = "parity contains neither 1 nor i, while every nonzero diagonal form's parity does";
    return out;
  }
  auto unit_class = [&](const RElem& v) -> int {  // 0 for {1,-1}, 1 for {i,-i}, -1 otherwise
    if (v == R.one() || v == R.from_int(-1)) return 0;
    if (v == R.gen() || v == R.neg(R.gen())) return 1;
    return -1;
  };
  std::vector<Vec> basis;
  std::vector<int> units;
  SubForm cur{M, mat_identity(R, n)};
  auto to_m = [&](const SubForm& s, const Vec& x) {
    return column_vec(mat_mul(R, s.inclusion, cols_matrix(R, s.form.rank(), {x})), 0);
  };
  auto add_vec = [&](Vec x) {
    RElem v = M.value(x);
    int uc = unit_class(v);
    if (v == R.from_int(-1) || v == R.neg(R.gen()))
      for (auto& c : x) c = R.mul(c, R.gen());
    basis.push_back(x);
    units.push_back(uc);
  };
  while (cur.form.rank() > 0) {
    const Form& C = cur.form;
    const int k = C.rank();
    // A unit-valued vector, first among basis vectors, then in small boxes.
    std::optional<Vec> x;
    for (int i = 0; i < k && !x; ++i)
      if (unit_class(C.G(i, i)) >= 0) x = unit_vec(R, k, i);
    for (long h = 1; h <= std::min(2L, b.height) && !x; ++h) {
      std::vector<Vec> box = box_vectors(R, k, h, b.max_vectors);
      for (const auto& v : box)
        if (unit_class(C.value(v)) >= 0) {
          x = v;
          break;
        }
    }
    if (x) {
      add_vec(to_m(cur, *x));
      cur = orthogonal_complement(M, cols_matrix(R, n, basis));
      continue;
    }
    ParitySpace PC = parity(C);
    if (PC.contains(r1) || PC.contains(ri) || basis.empty()) {
      out.diagonalizable = Tri::Unknown;
      out.reason = "no unit-valued vector found within the search budget";
      return out;
    }
    // Every value of C is in (1 + i) mod 2: split a plane and fold it into
    // the last diagonal vector with the explicit odd diagonalization.
    IsoSearch iso = find_isotropic_vector(C, b);
    if (iso.outcome != IsoSearch::Found) {
      out.diagonalizable = Tri::Unknown;
      out.reason = "no isotropic vector in an even-type complement: " + iso.reason;
      return out;
    }
    Unimodularity u = is_unimodular(C, cols_matrix(R, k, {iso.v}));
    Vec w = column_vec(u.duals, 0);
    RElem rho = C.value(w);
    int rep = m.reduce(R, rho);
    RElem rep_elem = m.residues[rep];
    int plane = rep == 0 ? 0 : 3;
    require(rep == 0 || rep_elem == R.add(R.one(), R.gen()), ErrorKind::Internal, "unexpected plane class");
    auto move = plane_move_iso(R, rho, rep_elem);  // theta(rho) -> theta(rep)
    require(move.has_value(), ErrorKind::Internal, "plane class move failed");
    Mat Pm = cols_matrix(R, n, {to_m(cur, iso.v), to_m(cur, w)});
    Mat Prep = mat_mul(R, Pm, *mat_inverse(R, move->T));  // basis of theta(rep) in M
    Vec y = basis.back();
    int yu = units.back();
    basis.pop_back();
    units.pop_back();
    Isometry od = zi_odd_diagonalize(R, plane, yu);
    Mat S = mat_hcat(Prep, cols_matrix(R, n, {y}));
    Mat D = mat_mul(R, S, *mat_inverse(R, od.T));
    for (int t = 0; t < 3; ++t) {
      basis.push_back(column_vec(D, t));
      units.push_back(od.target.G(t, t) == R.one() ? 0 : 1);
    }
    cur = orthogonal_complement(M, cols_matrix(R, n, basis));
  }
  Form D = zi_diag(R, units);
  Isometry to_d = inverse(make_isometry(D, M, cols_matrix(R, n, basis)));
  Isometry sorted = compose(sort_diag(D), to_d);
  out.diagonalizable = Tri::Yes;
  out.diag.ones = static_cast<int>(std::count(units.begin(), units.end(), 0));
  out.diag.is = n - out.diag.ones;
  out.diag.cert = sorted;
  return out;
}

// ---------------------------------------------------------------------------
// g_F

namespace {

bool is_metabolic(const Form& M, const SearchBudget& b) {
  if (M.rank() % 2) return false;
  RankReport z = isotropic_rank(M, b);
  if (2 * z.value == M.rank()) return true;
  require(z.exactness == Exactness::Exact || z.exactness == Exactness::TheoremBacked, ErrorKind::Budget,
          "isotropic rank is only a lower bound; metabolicity undecided");
  return false;
}

// g_F for metabolic M from its normal form: with m planes and parity of
// dimension d, F^k (+) N needs N metabolic of m - k planes whose parity
// together with P(F) spans P(M).
GValue g_metabolic(const Form& M, const RElem& f, const SearchBudget& b) {
  const Ring& R = M.R;
  const Mod2Ctx& mc = R.mod2();
  const int planes = M.rank() / 2;
  ParitySpace P = parity(M);
  int fr = mc.two_invertible ? 0 : mc.reduce(R, f);
  GValue g;
  (void)b;
  if (!P.contains(fr)) {
    g.value = 0;
    g.route = "metabolic: class of F outside the parity";
  } else {
    g.value = std::min(planes, planes - P.dim() + (fr != 0 ? 1 : 0));
    g.route = "metabolic normal form: m - dim P + [F odd]";
  }
  return g;
}

// Diagonal Z[i] form [1]^a [i]^b and F = theta(r), r in {1, i}: F^k splits
// off iff [r]^(2k-1) (+) N'' matches M for a diagonal N'' whose parity
// contains r (N'' = N (+) [r]).
int g_zi_diagonal(int a, int b, int r) {
  const int n = a + b;
  int best = 0;
  for (int k = 1; 2 * k <= n; ++k) {
    int mrank = n - 2 * k + 1;
    bool ok = false;
    for (int ap = 0; ap <= mrank && !ok; ++ap) {
      int bp = mrank - ap;
      if ((ap > 0) != (a > 0) || (bp > 0) != (b > 0)) continue;
      if (r == 0 && ap == 0) continue;
      if (r == 1 && bp == 0) continue;
      int shift = r == 1 ? (2 * k - 1) : 0;
      if (((bp + shift) - b) % 2 != 0) continue;
      ok = true;
    }
    if (ok) best = k;
  }
  return best;
}

bool odd_field_square(const Ring& R, const RElem& a) {
  return R.pow(a, static_cast<unsigned long>((R.field_order() - 1) / 2)) == R.one();
}

}  // namespace

GValue g_F(const Form& M, const RElem& f, const SearchBudget& b) {
  const Ring& R = M.R;
  const int n = M.rank();
  GValue g;
  if (n == 0) {
    g.route = "zero form";
    return g;
  }
  const Mod2Ctx& mc = R.mod2();
  if (R.kind() == RingKind::Integers) {
    ZClass c = classify_z(M);
    bool f_odd = mc.reduce(R, f) != 0;
    if (c.definite()) {
      g.route = "definite: no indefinite summand";
    } else if (f_odd) {
      g.value = c.odd ? std::min(c.pos, c.neg) : 0;
      g.route = "F odd: M odd indefinite, complement of any parity";
    } else if (!c.odd) {
      g.value = std::min(c.pos, c.neg);
      g.route = "F = H, M even: even complements exist for every signature = 0 mod 8";
    } else {
      g.value = std::min(c.pos, c.neg) - (c.pos == c.neg ? 1 : 0);
      g.route = "F = H, M odd: the complement must stay odd, so nonzero";
    }
    return g;
  }
  if (R.is_field() && R.characteristic() == 2) {
    Char2NF nf = char2_normal_form(M);
    if (R.is_zero(f)) {
      g.value = nf.alternating ? n / 2 : (n - 1) / 2;
      g.route = nf.alternating ? "alternating: H^(n/2)" : "[1]^n = H^k (+) [1]^(n-2k), n - 2k >= 1";
    } else {
      g.value = nf.alternating ? 0 : n / 2;
      g.route = nf.alternating ? "alternating forms have no odd summand" : "[1]^n = theta(1)^k (+) [1]^(n-2k)";
    }
    return g;
  }
  if (R.is_field()) {
    // 2 invertible: F = H; forms are classified by rank and discriminant.
    RElem disc = mat_det(R, M.G);
    int k = n / 2;
    if (n % 2 == 0) {
      RElem target = (k % 2) ? R.from_int(-1) : R.one();
      if (odd_field_square(R, disc) != odd_field_square(R, target)) --k;
    }
    g.value = k;
    g.route = "odd characteristic: rank and discriminant";
    return g;
  }
  if (R.kind() == RingKind::Quadratic && R.disc() == -1) {
    if (is_metabolic(M, b)) return g_metabolic(M, f, b);
    int fr = mc.reduce(R, f);
    const int r1 = mc.reduce(R, R.one()), ri = mc.reduce(R, R.gen());
    ZiDiagResult d = zi_diagonalize(M, b);
    if (d.diagonalizable == Tri::Yes && (fr == r1 || fr == ri)) {
      g.value = g_zi_diagonal(d.diag.ones, d.diag.is, fr == r1 ? 0 : 1);
      g.route = "diagonal Z[i] form: rank, parity and discriminant";
      return g;
    }
    fail(ErrorKind::Unsupported, "g_F over Z[i] needs a metabolic form, or a diagonal form with F = theta(1) or theta(i)");
  }
  require(mc.assumption, ErrorKind::Unsupported, "g_F needs the Assumption on " + R.name());
  require(is_metabolic(M, b), ErrorKind::Unsupported, "g_F over " + R.name() + " is implemented for metabolic forms only");
  return g_metabolic(M, f, b);
}

// ---------------------------------------------------------------------------
// Groupoids

std::string groupoid_name(GroupoidKind k) {
  switch (k) {
    case GroupoidKind::MetF:
      return "Met_F";
    case GroupoidKind::DiagZi:
      return "D_F";
    case GroupoidKind::FullZ:
      return "Full_Z";
    case GroupoidKind::FullChar2:
      return "Full_GF2k";
  }
  return "?";
}

Groupoid make_groupoid(GroupoidKind kind, const Ring& R, const RElem& f) {
  const Mod2Ctx& m = R.mod2();
  switch (kind) {
    case GroupoidKind::MetF:
      require(m.assumption, ErrorKind::Unsupported, "Met_F needs the Assumption");
      break;
    case GroupoidKind::DiagZi: {
      require(R.kind() == RingKind::Quadratic && R.disc() == -1, ErrorKind::Unsupported, "D_F lives over Z[i]");
      int fr = m.reduce(R, f);
      require(fr == m.reduce(R, R.one()) || fr == m.reduce(R, R.gen()), ErrorKind::Unsupported,
              "D_F needs F = theta(1) or theta(i)");
      break;
    }
    case GroupoidKind::FullZ:
      require(R.kind() == RingKind::Integers, ErrorKind::Unsupported, "Full_Z lives over Z");
      break;
    case GroupoidKind::FullChar2:
      require(R.is_field() && R.characteristic() == 2, ErrorKind::Unsupported,
              "Full_GF2k lives over fields of characteristic 2");
      break;
  }
  return Groupoid{kind, R, f};
}

bool groupoid_member(const Groupoid& G, const Form& M, const SearchBudget& b) {
  require(G.R == M.R, ErrorKind::Unsupported, "groupoid and form over different rings");
  if (M.rank() == 0) return true;
  switch (G.kind) {
    case GroupoidKind::MetF:
      return is_metabolic(M, b) && g_F(M, G.f, b).value >= 1;
    case GroupoidKind::DiagZi: {
      ZiDiagResult d = zi_diagonalize(M, b);
      require(d.diagonalizable != Tri::Unknown, ErrorKind::Budget, "diagonalizability undecided: " + d.reason);
      if (d.diagonalizable == Tri::No) return false;
      const Mod2Ctx& m = G.R.mod2();
      int r = m.reduce(G.R, G.f) == m.reduce(G.R, G.R.one()) ? 0 : 1;
      return g_zi_diagonal(d.diag.ones, d.diag.is, r) >= 1;
    }
    case GroupoidKind::FullZ:
    case GroupoidKind::FullChar2:
      return g_F(M, G.f, b).value >= 1;
  }
  return false;
}

}  // namespace sbf
