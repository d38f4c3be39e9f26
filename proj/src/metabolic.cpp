#include "sbf/metabolic.hpp"

#include "sbf/error.hpp"
#include "sbf/snf.hpp"

#include <algorithm>
#include <functional>

namespace sbf {

std::string exactness_name(Exactness e) {
  switch (e) {
    case Exactness::Exact:
      return "exact";
    case Exactness::LowerBound:
      return "lower-bound";
    case Exactness::TheoremBacked:
      return "theorem-backed";
    case Exactness::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::string verdict_name(IsoVerdict::Kind k) {
  switch (k) {
    case IsoVerdict::Isometric:
      return "isometric";
    case IsoVerdict::NotIsometric:
      return "not-isometric";
    case IsoVerdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Witnessing sequences

namespace {

// w + t v with pair(w, w) moved to its canonical residue mod 2 (to 0 when 2
// is invertible). Keeps every witnessing invariant since v is isotropic and
// orthogonal to the other witnesses.
Vec normalize_witness(const Form& M, const Vec& v, Vec w) {
  const Ring& R = M.R;
  const Mod2Ctx& m = R.mod2();
  RElem val = M.value(w);
  RElem target = m.two_invertible ? R.zero() : m.residues[m.reduce(R, val)];
  RElem diff = R.sub(target, val);
  if (R.is_zero(diff)) return w;
  auto t = R.divide_exact(diff, R.from_int(2));
  require(t.has_value(), ErrorKind::Internal, "witness normalization: residue mismatch");
  for (size_t i = 0; i < w.size(); ++i) w[i] = R.add(w[i], R.mul(*t, v[i]));
  return w;
}

}  // namespace

WitnessPair witnessing_sequence(const Form& M, const Mat& V) {
  const Ring& R = M.R;
  require(is_isotropic_seq(M, V), ErrorKind::Precondition, "sequence is not isotropic");
  Unimodularity u = is_unimodular(M, V);
  require(u.unimodular, ErrorKind::Precondition, "sequence is not unimodular");
  const int k = V.cols;
  // w_j = d_j - sum_{i<j} pair(w_i, d_j) v_i keeps pair(v_i, w_j) = delta_ij
  // because the v's are isotropic, and kills pair(w_i, w_j) for i < j.
  std::vector<Vec> ws;
  for (int j = 0; j < k; ++j) {
    Vec d = column_vec(u.duals, j);
    Vec w = d;
    for (int i = 0; i < j; ++i) {
      RElem c = M.pair(ws[i], d);
      if (R.is_zero(c)) continue;
      for (int t = 0; t < M.rank(); ++t) w[t] = R.sub(w[t], R.mul(c, V(t, i)));
    }
    ws.push_back(normalize_witness(M, column_vec(V, j), w));
  }
  WitnessPair p{V, cols_matrix(R, M.rank(), ws)};
  require(check_witness_pair(M, p), ErrorKind::Internal, "witnessing sequence failed its invariants");
  return p;
}

bool check_witness_pair(const Form& M, const WitnessPair& p) {
  const Ring& R = M.R;
  if (p.V.cols != p.W.cols) return false;
  Mat VV = mat_pair(R, p.V, M.G, p.V);
  Mat VW = mat_pair(R, p.V, M.G, p.W);
  Mat WW = mat_pair(R, p.W, M.G, p.W);
  for (int i = 0; i < p.V.cols; ++i)
    for (int j = 0; j < p.V.cols; ++j) {
      if (!R.is_zero(VV(i, j))) return false;
      if (VW(i, j) != (i == j ? R.one() : R.zero())) return false;
      if (i != j && !R.is_zero(WW(i, j))) return false;
    }
  return true;
}

Mat plane_basis(const WitnessPair& p) {
  Mat B;
  B.rows = p.V.rows;
  B.cols = 2 * p.V.cols;
  B.e.resize(static_cast<size_t>(B.rows) * B.cols);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < p.V.cols; ++j) {
      B(i, 2 * j) = p.V(i, j);
      B(i, 2 * j + 1) = p.W(i, j);
    }
  return B;
}

// ---------------------------------------------------------------------------
// Isotropic vectors

namespace {

bool is_primitive(const Ring& R, const Vec& v) {
  RElem g = R.zero();
  for (const auto& x : v) {
    g = R.xgcd(g, x).g;
    if (R.is_unit(g)) return true;
  }
  return R.is_unit(g);
}

// Calls f on every vector of the height-h box not inside the height-prev
// box; f returns true to stop. Returns false when the count budget ran out.
bool for_each_shell(const Ring& R, int n, long prev, long h, long& budget, const std::function<bool(const Vec&)>& f) {
  const int k = R.dim();
  const int slots = n * k;
  std::vector<long> c(slots, -h);
  for (;;) {
    long mx = 0;
    for (long x : c) mx = std::max(mx, std::labs(x));
    if (mx > prev) {
      if (--budget < 0) return false;
      Vec v(n);
      for (int i = 0; i < n; ++i) {
        std::vector<Int> co(k);
        for (int t = 0; t < k; ++t) co[t] = c[i * k + t];
        v[i] = R.make(co);
      }
      if (f(v)) return true;
    }
    int pos = slots - 1;
    while (pos >= 0 && c[pos] == h) c[pos--] = -h;
    if (pos < 0) return true;
    ++c[pos];
  }
}

// Diagonal Z[i] form: counts of entries in the classes of 1 and i (units up
// to unit squares {1, -1}); nullopt if not diagonal with unit entries.
std::optional<std::pair<int, int>> zi_diagonal_counts(const Form& M) {
  const Ring& R = M.R;
  if (!(R.kind() == RingKind::Quadratic && R.disc() == -1)) return std::nullopt;
  int a = 0, b = 0;
  for (int i = 0; i < M.rank(); ++i)
    for (int j = 0; j < M.rank(); ++j) {
      if (i != j && !R.is_zero(M.G(i, j))) return std::nullopt;
    }
  for (int i = 0; i < M.rank(); ++i) {
    const RElem& d = M.G(i, i);
    if (d == R.one() || d == R.from_int(-1))
      ++a;
    else if (d == R.gen() || d == R.neg(R.gen()))
      ++b;
    else
      return std::nullopt;
  }
  return std::make_pair(a, b);
}

// Block-diagonal sum of 2x2 blocks [[0,1],[1,r]].
bool is_theta_presentation(const Form& M) {
  const Ring& R = M.R;
  if (M.rank() % 2) return false;
  for (int i = 0; i < M.rank(); ++i)
    for (int j = 0; j < M.rank(); ++j) {
      int bi = i / 2, bj = j / 2;
      const RElem& x = M.G(i, j);
      if (bi != bj) {
        if (!R.is_zero(x)) return false;
      } else if (i % 2 == 0 && j % 2 == 0) {
        if (!R.is_zero(x)) return false;
      } else if (i != j) {
        if (x != R.one()) return false;
      }
    }
  return true;
}

}  // namespace

IsoSearch find_isotropic_vector(const Form& M, const SearchBudget& b) {
  const Ring& R = M.R;
  const int n = M.rank();
  IsoSearch out;
  if (n == 0) {
    out.outcome = IsoSearch::NoneProof;
    out.reason = "zero form";
    return out;
  }
  if (n == 1) {
    out.outcome = IsoSearch::NoneProof;
    out.reason = "rank one over a domain: g x^2 = 0 forces x = 0";
    return out;
  }
  if (R.is_field()) {
    // Projective points: first nonzero coordinate 1.
    const long q = R.field_order();
    long total = 1;
    for (int i = 0; i < n; ++i) {
      require(total <= b.max_vectors, ErrorKind::Budget, "finite-field vector enumeration exceeds budget");
      total *= q;
    }
    for (int lead = 0; lead < n; ++lead) {
      long rest = 1;
      for (int i = lead + 1; i < n; ++i) rest *= q;
      for (long code = 0; code < rest; ++code) {
        Vec v(n, R.zero());
        v[lead] = R.one();
        long c = code;
        for (int i = n - 1; i > lead; --i) {
          v[i] = R.element(c % q);
          c /= q;
        }
        if (R.is_zero(M.value(v))) {
          out.outcome = IsoSearch::Found;
          out.v = v;
          out.reason = "exhaustive search";
          return out;
        }
      }
    }
    out.outcome = IsoSearch::NoneProof;
    out.reason = "exhaustive search over all vectors";
    return out;
  }
  if (R.kind() == RingKind::Integers) {
    auto [p, q] = signature_z(M);
    if (p == 0 || q == 0) {
      out.outcome = IsoSearch::NoneProof;
      out.reason = "definite form";
      return out;
    }
  }
  if (auto ab = zi_diagonal_counts(M)) {
    if (ab->first <= 1 && ab->second <= 1) {
      out.outcome = IsoSearch::NoneProof;
      out.reason = "diagonal form [1]^a (+) [i]^b with a, b <= 1 has isotropic rank 0";
      return out;
    }
  }
  long budget = b.max_vectors;
  long prev = 0;
  // Shells of height 1, 2, ..., height, then doubling up to height_cap, so
  // small vectors are found first.
  auto next_height = [&](long h) { return h < b.height ? h + 1 : (h < b.height_cap ? std::min(2 * h, b.height_cap) : h + 1); };
  for (long h = 1; h <= std::max(b.height, b.height_cap); h = next_height(h)) {
    bool found = false;
    bool complete = for_each_shell(R, n, prev, h, budget, [&](const Vec& v) {
      if (!R.is_zero(M.value(v)) || !is_primitive(R, v)) return false;
      out.v = v;
      found = true;
      return true;
    });
    if (found) {
      out.outcome = IsoSearch::Found;
      out.reason = "bounded-height search, height " + std::to_string(h);
      return out;
    }
    if (!complete) break;
    prev = h;
  }
  out.outcome = IsoSearch::Unknown;
  out.reason = "search budget exhausted";
  return out;
}

// ---------------------------------------------------------------------------
// Plane splitting and isotropic rank

PlaneSplit plane_split(const Form& M, const Vec& v, const Vec& w) {
  const Ring& R = M.R;
  require(R.is_zero(M.value(v)), ErrorKind::Precondition, "plane split: v is not isotropic");
  require(M.pair(v, w) == R.one(), ErrorKind::Precondition, "plane split: pair(v, w) != 1");
  Mat N = cols_matrix(R, M.rank(), {v, w});
  SubForm sub = restrict_form(M, N);
  SubForm comp = orthogonal_complement(M, N);
  Isometry iso = split_isometry(M, sub, comp);
  return PlaneSplit{sub.form, comp, iso};
}

namespace {

struct Greedy {
  WitnessPair seq;
  bool decisive = true;  // every step ended in Found or NoneProof
  std::string last_reason;
};

// Greedy extension: split off a plane around each isotropic vector found and
// continue in the complement.
Greedy greedy_isotropic(const Form& M, const SearchBudget& b, int limit) {
  const Ring& R = M.R;
  const int n = M.rank();
  Form cur = M;
  Mat inc = mat_identity(R, n);
  std::vector<Vec> vs, ws;
  Greedy g;
  while (static_cast<int>(vs.size()) < limit) {
    IsoSearch s = find_isotropic_vector(cur, b);
    g.last_reason = s.reason;
    if (s.outcome != IsoSearch::Found) {
      g.decisive = s.outcome == IsoSearch::NoneProof;
      break;
    }
    Mat vm = cols_matrix(R, cur.rank(), {s.v});
    Unimodularity u = is_unimodular(cur, vm);
    require(u.unimodular, ErrorKind::Internal, "primitive isotropic vector not unimodular");
    Vec w = normalize_witness(cur, s.v, column_vec(u.duals, 0));
    PlaneSplit ps = plane_split(cur, s.v, w);
    Mat vw = mat_mul(R, inc, cols_matrix(R, cur.rank(), {s.v, w}));
    vs.push_back(column_vec(vw, 0));
    ws.push_back(column_vec(vw, 1));
    inc = mat_mul(R, inc, ps.complement.inclusion);
    cur = ps.complement.form;
  }
  g.seq.V = cols_matrix(R, n, vs);
  g.seq.W = cols_matrix(R, n, ws);
  if (vs.empty()) {
    g.seq.V = mat_zero(R, n, 0);
    g.seq.W = mat_zero(R, n, 0);
  }
  require(check_witness_pair(M, g.seq), ErrorKind::Internal, "greedy sequence lost the witnessing invariants");
  return g;
}

}  // namespace

RankReport isotropic_rank(const Form& M, const SearchBudget& b) {
  const Ring& R = M.R;
  const int n = M.rank();
  RankReport rep;
  if (is_theta_presentation(M)) {
    std::vector<Vec> vs, ws;
    for (int i = 0; i < n / 2; ++i) {
      vs.push_back(unit_vec(R, n, 2 * i));
      ws.push_back(unit_vec(R, n, 2 * i + 1));
    }
    rep.certificate = {cols_matrix(R, n, vs), cols_matrix(R, n, ws)};
    if (n == 0) rep.certificate = {mat_zero(R, 0, 0), mat_zero(R, 0, 0)};
    rep.value = n / 2;
    rep.exactness = Exactness::Exact;
    rep.route = "sum of metabolic planes: z = rank/2";
    return rep;
  }
  Greedy g = greedy_isotropic(M, b, n / 2);
  rep.certificate = g.seq;
  const int found = g.seq.V.cols;
  if (found == n / 2) {
    rep.value = found;
    rep.exactness = Exactness::Exact;
    rep.route = "search reached the bound rank/2";
    return rep;
  }
  if (R.kind() == RingKind::Integers) {
    auto [p, q] = signature_z(M);
    rep.value = std::min(p, q);
    rep.exactness = found == rep.value ? Exactness::Exact : Exactness::TheoremBacked;
    rep.route = "indefinite unimodular Z-lattices are I(p,q) or II(p,q), of Witt index min(p,q)";
    return rep;
  }
  if (auto ab = zi_diagonal_counts(M)) {
    rep.value = ab->first / 2 + ab->second / 2;
    rep.exactness = found == rep.value ? Exactness::Exact : Exactness::TheoremBacked;
    rep.route = "diagonal Z[i] form: z = floor(a/2) + floor(b/2)";
    return rep;
  }
  rep.value = found;
  rep.exactness = g.decisive ? Exactness::Exact : Exactness::LowerBound;
  rep.route = g.decisive ? "greedy extension (exact by maximal-extension property): " + g.last_reason
                         : "greedy extension stopped: " + g.last_reason;
  return rep;
}

// ---------------------------------------------------------------------------
// Plane decompositions

Form theta_sum(const Ring& R, const std::vector<RElem>& classes) {
  std::vector<Form> parts;
  for (const auto& r : classes) parts.push_back(theta(R, r));
  return direct_sum(parts, R);
}

PlaneDecomp lagrangian_to_planes(const Form& M, const Mat& L) {
  const Ring& R = M.R;
  require(M.rank() % 2 == 0, ErrorKind::Precondition, "not a Lagrangian: odd rank");
  require(L.rows == M.rank(), ErrorKind::Input, "Lagrangian basis has the wrong length");
  require(2 * L.cols == M.rank(), ErrorKind::Precondition, "not a Lagrangian: rank is not half of rank(M)");
  require(is_isotropic_seq(M, L), ErrorKind::Precondition, "not a Lagrangian: not isotropic");
  Snf s = smith(R, L);
  for (int i = 0; i < L.cols; ++i)
    require(i < s.rank && R.is_unit(s.D(i, i)), ErrorKind::Precondition,
            "not a Lagrangian: not a direct summand (elementary divisors not units)");
  // L^perp = L: the kernel of L^T G has rank n/2 and contains L.
  Mat K = kernel_basis(R, mat_mul(R, mat_transpose(L), M.G));
  require(K.cols == L.cols, ErrorKind::Precondition, "not a Lagrangian: L^perp has the wrong rank");
  WitnessPair p = witnessing_sequence(M, L);
  std::vector<RElem> classes;
  for (int i = 0; i < L.cols; ++i) {
    Vec w = column_vec(p.W, i);
    classes.push_back(M.value(w));
  }
  Form src = theta_sum(R, classes);
  return PlaneDecomp{classes, make_isometry(src, M, plane_basis(p))};
}

std::optional<PlaneDecomp> metabolic_planes(const Form& M, const SearchBudget& b) {
  const Ring& R = M.R;
  if (M.rank() % 2) return std::nullopt;
  Greedy g = greedy_isotropic(M, b, M.rank() / 2);
  if (2 * g.seq.V.cols != M.rank()) return std::nullopt;
  std::vector<RElem> classes;
  for (int i = 0; i < g.seq.W.cols; ++i) classes.push_back(M.value(column_vec(g.seq.W, i)));
  return PlaneDecomp{classes, make_isometry(theta_sum(R, classes), M, plane_basis(g.seq))};
}

// ---------------------------------------------------------------------------
// Plane moves

namespace {

void put_block(const Ring& R, Mat& T, int i, int j, const std::vector<std::vector<RElem>>& blk, int bi, int bj) {
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) T(2 * i + a, 2 * j + c) = blk[bi + a][bj + c];
  (void)R;
}

}  // namespace

Mat move_translate(const Ring& R, int planes, int j, const RElem& t) {
  Mat T = mat_identity(R, 2 * planes);
  T(2 * j, 2 * j + 1) = t;
  return T;
}

Mat move_scale(const Ring& R, int planes, int j, const RElem& u) {
  Mat T = mat_identity(R, 2 * planes);
  auto inv = R.unit_inverse(u);
  require(inv.has_value(), ErrorKind::Internal, "scaling move needs a unit");
  // diag(u^-1, u): theta(u^2 r) -> theta(r)
  T(2 * j, 2 * j) = *inv;
  T(2 * j + 1, 2 * j + 1) = u;
  return T;
}

Mat move_add(const Ring& R, int planes, int i, int j, const RElem& ri) {
  require(i != j, ErrorKind::Internal, "addition move on a single plane");
  // theta(r) (+) theta(r + s) -> theta(r) (+) theta(s):
  // (x1, x2, y1, y2) -> (x1, x2 + y2, y1 - x1 - r x2, y2).
  Mat T = mat_identity(R, 2 * planes);
  RElem one = R.one(), zero = R.zero(), m1 = R.from_int(-1);
  std::vector<std::vector<RElem>> psi = {
      {one, zero, zero, zero}, {zero, one, zero, one}, {m1, R.neg(ri), one, zero}, {zero, zero, zero, one}};
  put_block(R, T, i, i, psi, 0, 0);
  put_block(R, T, i, j, psi, 0, 2);
  put_block(R, T, j, i, psi, 2, 0);
  put_block(R, T, j, j, psi, 2, 2);
  return T;
}

Mat move_swap(const Ring& R, int planes, int i, int j) {
  Mat T = mat_identity(R, 2 * planes);
  for (int a = 0; a < 2; ++a) {
    T(2 * i + a, 2 * i + a) = R.zero();
    T(2 * j + a, 2 * j + a) = R.zero();
    T(2 * i + a, 2 * j + a) = R.one();
    T(2 * j + a, 2 * i + a) = R.one();
  }
  return T;
}

MetabolicNF normalize_planes(const PlaneDecomp& d) {
  const Ring& R = d.iso.target.R;
  const Mod2Ctx& m = R.mod2();
  require(m.assumption, ErrorKind::Precondition, "normal form needs the Assumption on " + R.name());
  const int k = static_cast<int>(d.classes.size());
  std::vector<RElem> r = d.classes;
  Mat X = d.iso.T;  // (+) theta(r) -> M
  auto apply = [&](const Mat& B) { X = mat_mul(R, X, B); };
  auto scale = [&](int j, int a) {  // r_j -> a r_j (mod 2), a in U(R)*
    const RElem& u = m.unit_root[a];
    apply(move_scale(R, k, j, u));
    r[j] = R.mul(R.mul(u, u), r[j]);
  };
  std::vector<RElem> target(k, R.zero());
  if (!m.two_invertible) {
    // Reduced row echelon form over U(R) of the plane classes mod 2.
    auto coords = [&](int j) { return m.coords[m.reduce(R, r[j])]; };
    int row = 0;
    for (int col = 0; col < m.u_dim && row < k; ++col) {
      int piv = -1;
      for (int j = row; j < k; ++j)
        if (coords(j)[col] != 0) {
          piv = j;
          break;
        }
      if (piv < 0) continue;
      if (piv != row) {
        apply(move_swap(R, k, piv, row));
        std::swap(r[piv], r[row]);
      }
      int lead = coords(row)[col];
      if (lead != m.one_idx()) scale(row, m.u_inv(lead));
      for (int j = 0; j < k; ++j) {
        if (j == row) continue;
        int f = coords(j)[col];
        if (f == 0) continue;
        // r_j += f r_row (mod 2): scale the pivot plane, add, scale back.
        if (f != m.one_idx()) scale(row, f);
        apply(move_add(R, k, row, j, r[row]));
        r[j] = R.add(r[j], r[row]);
        if (f != m.one_idx()) scale(row, m.u_inv(f));
      }
      ++row;
    }
    for (int j = 0; j < k; ++j) target[j] = m.residues[m.reduce(R, r[j])];
  }
  // Exact representatives by translation r_j -> r_j + 2t.
  const RElem two = R.from_int(2);
  for (int j = 0; j < k; ++j) {
    RElem diff = R.sub(target[j], r[j]);
    if (R.is_zero(diff)) continue;
    auto t = R.divide_exact(diff, two);
    require(t.has_value(), ErrorKind::Internal, "translation move: classes differ mod 2");
    apply(move_translate(R, k, j, *t));
    r[j] = target[j];
  }
  Form nf = theta_sum(R, r);
  Isometry to_m = make_isometry(nf, d.iso.target, X);
  return MetabolicNF{r, inverse(to_m)};
}

MetabolicNF metabolic_nf(const Form& M, const SearchBudget& b) {
  require(M.rank() % 2 == 0, ErrorKind::Precondition, "not metabolic: odd rank");
  require(M.R.mod2().assumption, ErrorKind::Precondition, "normal form needs the Assumption on " + M.R.name());
  auto d = metabolic_planes(M, b);
  if (!d) {
    RankReport z = isotropic_rank(M, b);
    if (z.exactness == Exactness::LowerBound || z.exactness == Exactness::Unknown)
      fail(ErrorKind::Budget, "no Lagrangian found within the search budget");
    fail(ErrorKind::Precondition, "not metabolic: isotropic rank " + std::to_string(z.value) + " < rank/2");
  }
  MetabolicNF nf = normalize_planes(*d);
  // The nonzero classes are the canonical parity basis.
  ParitySpace p = parity(M);
  std::vector<int> got;
  for (const auto& c : nf.classes)
    if (!M.R.is_zero(c)) got.push_back(M.R.mod2().reduce(M.R, c));
  require(got == p.basis, ErrorKind::Internal, "normal form classes disagree with the parity basis");
  return nf;
}

IsoVerdict metabolic_isometry(const Form& M, const Form& N, const SearchBudget& b) {
  IsoVerdict v;
  if (M.rank() != N.rank()) {
    v.kind = IsoVerdict::NotIsometric;
    v.reason = "rank";
    return v;
  }
  MetabolicNF a = metabolic_nf(M, b);
  MetabolicNF c = metabolic_nf(N, b);
  if (a.classes != c.classes) {
    v.kind = IsoVerdict::NotIsometric;
    v.reason = "parity";
    return v;
  }
  v.kind = IsoVerdict::Isometric;
  v.cert = compose(inverse(c.cert), a.cert);
  v.reason = "equal rank and parity";
  return v;
}

std::optional<Isometry> plane_move_iso(const Ring& R, const RElem& r, const RElem& s) {
  const Mod2Ctx& m = R.mod2();
  const RElem two = R.from_int(2);
  Form src = theta(R, r), dst = theta(R, s);
  if (m.two_invertible) {
    // theta(r) -> theta(0) -> theta(s) by translations.
    RElem half = *R.divide_exact(R.one(), two);
    Mat A = move_translate(R, 1, 0, R.mul(half, r));         // theta(r) -> theta(0)
    Mat B = move_translate(R, 1, 0, R.neg(R.mul(half, s)));  // theta(0) -> theta(s)
    return make_isometry(src, dst, mat_mul(R, B, A));
  }
  int rr = m.reduce(R, r), ss = m.reduce(R, s);
  for (int us : m.unit_squares) {
    if (m.mul[us][ss] != rr) continue;
    const RElem& u = m.unit_root[us];
    RElem u2s = R.mul(R.mul(u, u), s);
    auto t = R.divide_exact(R.sub(r, u2s), two);
    require(t.has_value(), ErrorKind::Internal, "unit-square relation does not hold exactly mod 2");
    // translation theta(r) -> theta(u^2 s), then scaling theta(u^2 s) -> theta(s).
    Mat A = move_translate(R, 1, 0, *t);
    Mat B = move_scale(R, 1, 0, u);
    return make_isometry(src, dst, mat_mul(R, B, A));
  }
  return std::nullopt;
}

IsoVerdict plane_isometry_decision(const Ring& R, const RElem& r, const RElem& s, const SearchBudget&) {
  IsoVerdict v;
  const Mod2Ctx& m = R.mod2();
  if (auto iso = plane_move_iso(R, r, s)) {
    v.kind = IsoVerdict::Isometric;
    v.cert = *iso;
    v.reason = m.two_invertible ? "2 invertible: every plane is hyperbolic" : "s = u^2 r (mod 2) for a unit u";
    return v;
  }
  // An isometry theta(r) -> theta(s) sends e1 to a primitive isotropic x of
  // theta(s) and e2 to y with pair(x, y) = 1. Isotropy b(2a + sb) = 0 leaves
  // two lines: e1 (handled above) and the primitive multiple of (-s, 2).
  // Every admissible y is y0 + c x, of value value(y0) + 2c, and rescaling
  // x by a unit w^-1 rescales the value by w^2; so the test below is exact.
  const RElem two = R.from_int(2);
  if (R.is_zero(two)) {
    // Characteristic 2: s b^2 = 0 leaves only the line e1, or s = 0.
    v.kind = IsoVerdict::NotIsometric;
    v.reason = "parity: exactly one of the planes is alternating";
    return v;
  }
  Form src = theta(R, r), dst = theta(R, s);
  RElem g = R.xgcd(s, two).g;
  Vec x = {R.neg(*R.divide_exact(s, g)), *R.divide_exact(two, g)};
  Unimodularity u = is_unimodular(dst, cols_matrix(R, 2, {x}));
  require(u.unimodular, ErrorKind::Internal, "primitive isotropic line is not unimodular");
  Vec y0 = column_vec(u.duals, 0);
  int rho = m.reduce(R, dst.value(y0)), rr = m.reduce(R, r);
  for (int us : m.unit_squares) {
    if (m.mul[us][rho] != rr) continue;
    const RElem& w = m.unit_root[us];
    RElem winv = *R.unit_inverse(w);
    Vec xs = {R.mul(winv, x[0]), R.mul(winv, x[1])};
    Vec ys = {R.mul(w, y0[0]), R.mul(w, y0[1])};
    auto c = R.divide_exact(R.sub(r, dst.value(ys)), two);
    require(c.has_value(), ErrorKind::Internal, "plane isometry: residue mismatch");
    for (int t = 0; t < 2; ++t) ys[t] = R.add(ys[t], R.mul(*c, xs[t]));
    v.kind = IsoVerdict::Isometric;
    v.cert = make_isometry(src, dst, cols_matrix(R, 2, {xs, ys}));
    v.reason = "isotropic line through (-s, 2)";
    return v;
  }
  v.kind = IsoVerdict::NotIsometric;
  v.reason = m.assumption ? "different classes in S(R)"
                          : "unit-square obstruction: neither isotropic line of theta(s) has a dual of value u^2 r (mod 2)";
  return v;
}

// ---------------------------------------------------------------------------
// Cofinality and hyperbolic summands

CofinalityReport cofinality_report(const Ring& R) {
  const Mod2Ctx& m = R.mod2();
  require(m.assumption, ErrorKind::Precondition, "cofinality criterion needs the Assumption on " + R.name());
  CofinalityReport c;
  c.exists = true;
  if (m.two_invertible) {
    c.classes = {R.zero()};
    c.u_dim = 0;
  } else {
    for (int bidx : m.basis) c.classes.push_back(m.residues[bidx]);
    c.u_dim = m.u_dim;
  }
  c.minimal = theta_sum(R, c.classes);
  return c;
}

HyperbolicEmbedding hyperbolic_summands(const Form& M, const SearchBudget& b) {
  const Ring& R = M.R;
  RankReport z = isotropic_rank(M, b);
  require(z.exactness == Exactness::Exact, ErrorKind::Precondition, "hyperbolic summands need an exact isotropic rank");
  int c = complexity(M);
  require(z.value >= c, ErrorKind::Precondition, "z(M) < c(M)");
  const WitnessPair& p = z.certificate;
  Mat E = plane_basis(p);
  std::vector<RElem> classes;
  for (int i = 0; i < p.W.cols; ++i) classes.push_back(M.value(column_vec(p.W, i)));
  Form e = theta_sum(R, classes);
  Isometry e_in_m{e, M, E};  // not square: an embedding, checked below
  require(mat_pair(R, E, M.G, E) == e.G, ErrorKind::Internal, "plane sum embedding is not isometric");
  MetabolicNF nf = normalize_planes(PlaneDecomp{classes, identity_isometry(e)});
  // Trailing zero classes are hyperbolic planes.
  Mat X = inverse(nf.cert).T;  // theta_sum(nf) -> e
  std::vector<Vec> cols;
  int count = 0;
  for (int j = 0; j < static_cast<int>(nf.classes.size()); ++j) {
    if (!R.is_zero(nf.classes[j])) continue;
    ++count;
    Mat pair = mat_mul(R, E, mat_columns(X, 2 * j, 2 * j + 2));
    cols.push_back(column_vec(pair, 0));
    cols.push_back(column_vec(pair, 1));
  }
  HyperbolicEmbedding h;
  h.count = count;
  h.embedding = count ? cols_matrix(R, M.rank(), cols) : mat_zero(R, M.rank(), 0);
  require(count >= z.value - c, ErrorKind::Internal, "fewer hyperbolic planes than z - c");
  h.complement = orthogonal_complement(M, h.embedding);
  SubForm sub = restrict_form(M, h.embedding);
  require(sub.form == power(hyperbolic(R), count), ErrorKind::Internal, "embedded planes are not hyperbolic");
  h.iso = split_isometry(M, sub, h.complement);
  return h;
}

Isometry plane_swap_iso(const Form& M, const Form& F, const Form& Fp, const SearchBudget& b) {
  IsoVerdict v = metabolic_isometry(direct_sum(M, F), direct_sum(M, Fp), b);
  require(v.kind == IsoVerdict::Isometric, ErrorKind::Precondition,
          "M (+) F and M (+) F' are not isometric (" + v.reason + ")");
  return *v.cert;
}

}  // namespace sbf
