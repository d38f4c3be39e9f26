#include "sbf/stability.hpp"

#include "sbf/error.hpp"
#include "sbf/metabolic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace sbf {

namespace {

constexpr std::uint64_t kGeneratorSeed = 0x5eed5eedULL;

// q^e, or nullopt past 2^62.
std::optional<std::uint64_t> checked_pow(std::uint64_t q, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / q) return std::nullopt;
    r *= q;
  }
  return r;
}

long floordiv2(long a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

// Subgroup generated by gens, as marks over element indices.
long closure(const FiniteGroup& G, const std::vector<GKey>& gens, std::vector<char>& mark) {
  mark.assign(static_cast<size_t>(G.order()), 0);
  std::vector<long> queue{G.index_of(G.identity())};
  mark[queue[0]] = 1;
  for (size_t h = 0; h < queue.size(); ++h) {
    const GKey x = G.elements()[queue[h]];
    for (GKey s : gens) {
      const long y = G.index_of(G.mul(x, s));
      require(y >= 0, ErrorKind::Internal, "group not closed under a generator");
      if (!mark[y]) {
        mark[y] = 1;
        queue.push_back(y);
      }
    }
  }
  return static_cast<long>(queue.size());
}

}  // namespace

FiniteGroup::FiniteGroup(const Form& M, std::vector<GKey> elements) : M_(M), n_(M.rank()), elements_(std::move(elements)) {
  const Ring& R = M.R;
  require(R.is_field(), ErrorKind::Precondition, "isometry groups need a finite field");
  q_ = static_cast<int>(R.field_order());
  require(n_ <= 8 && checked_pow(q_, n_ * n_).has_value(), ErrorKind::Budget, "matrices do not fit a 64-bit key");
  vsize_ = static_cast<long>(*checked_pow(q_, n_));
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  for (int a = 0; a < q_; ++a)
    for (int b = 0; b < q_; ++b) {
      add_[a * q_ + b] = static_cast<int>(R.index_of(R.add(R.element(a), R.element(b))));
      mul_[a * q_ + b] = static_cast<int>(R.index_of(R.mul(R.element(a), R.element(b))));
    }
  g_.resize(n_ * n_);
  ginv_.resize(n_ * n_);
  std::optional<Mat> Gi = mat_inverse(R, M.G);
  require(Gi.has_value(), ErrorKind::Precondition, "degenerate form");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      g_[i * n_ + j] = static_cast<int>(R.index_of(M.G(i, j)));
      ginv_[i * n_ + j] = static_cast<int>(R.index_of((*Gi)(i, j)));
    }
  id_ = pack(mat_identity(R, n_));
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

long FiniteGroup::index_of(GKey g) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
  return it != elements_.end() && *it == g ? it - elements_.begin() : -1;
}

long FiniteGroup::column(GKey g, int j) const {
  for (int k = 0; k < j; ++k) g /= static_cast<GKey>(vsize_);
  return static_cast<long>(g % static_cast<GKey>(vsize_));
}

GKey FiniteGroup::mul(GKey a, GKey b) const {
  int A[64], B[64];
  for (int p = 0; p < n_ * n_; ++p) {
    A[p] = static_cast<int>(a % q_);
    a /= q_;
    B[p] = static_cast<int>(b % q_);
    b /= q_;
  }
  GKey out = 0, w = 1;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      int s = 0;
      for (int k = 0; k < n_; ++k) s = add_[s * q_ + mul_[A[k * n_ + i] * q_ + B[j * n_ + k]]];
      out += w * static_cast<GKey>(s);
      w *= q_;
    }
  return out;
}

// T^{-1} = G^{-1} T^T G for an isometry T.
GKey FiniteGroup::inv(GKey a) const {
  int T[64], X[64];
  for (int p = 0; p < n_ * n_; ++p) {
    T[p] = static_cast<int>(a % q_);
    a /= q_;
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      int s = 0;
      for (int k = 0; k < n_; ++k) s = add_[s * q_ + mul_[T[i * n_ + k] * q_ + g_[k * n_ + j]]];
      X[i * n_ + j] = s;
    }
  GKey out = 0, w = 1;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      int s = 0;
      for (int k = 0; k < n_; ++k) s = add_[s * q_ + mul_[ginv_[i * n_ + k] * q_ + X[k * n_ + j]]];
      out += w * static_cast<GKey>(s);
      w *= q_;
    }
  return out;
}

GKey FiniteGroup::pack(const Mat& T) const {
  require(T.rows == n_ && T.cols == n_, ErrorKind::Input, "matrix size does not match the form");
  GKey out = 0, w = 1;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      out += w * static_cast<GKey>(M_.R.index_of(T(i, j)));
      w *= q_;
    }
  return out;
}

Mat FiniteGroup::matrix(GKey g) const {
  Mat T = mat_zero(M_.R, n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      T(i, j) = M_.R.element(static_cast<long>(g % q_));
      g /= q_;
    }
  return T;
}

const std::vector<GKey>& FiniteGroup::generators() const {
  if (!gens_.empty() || order() == 1) return gens_;
  std::vector<GKey> shuffled = elements_;
  std::mt19937_64 rng(kGeneratorSeed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<char> mark(static_cast<size_t>(order()), 0);
  mark[index_of(id_)] = 1;
  long have = 1;
  for (GKey g : shuffled) {
    if (have == order()) break;
    if (mark[index_of(g)]) continue;
    gens_.push_back(g);
    have = closure(*this, gens_, mark);
  }
  return gens_;
}

FiniteGroup orthogonal_group(const Form& M, const GroupBudget& b, const std::optional<Mat>& quadratic) {
  const Ring& R = M.R;
  require(R.is_field(), ErrorKind::Precondition, "isometry groups need a finite field");
  const int n = M.rank();
  if (n == 0) return FiniteGroup(M, {0});
  CodeSpace S(M);
  std::vector<int> G(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i * n + j] = S.element_index(M.G(i, j));

  std::vector<int> qv;
  std::vector<int> qtarget(n, 0);
  if (quadratic) {
    const Mat& U = *quadratic;
    require(R.characteristic() == 2, ErrorKind::Precondition, "quadratic refinements are for characteristic 2");
    require(U.rows == n && U.cols == n, ErrorKind::Input, "refinement size does not match the form");
    for (int i = 0; i < n; ++i) {
      require(G[i * n + i] == 0, ErrorKind::Precondition, "a quadratic refinement needs an alternating form");
      for (int j = 0; j < n; ++j) {
        if (j < i) require(R.is_zero(U(i, j)), ErrorKind::Input, "refinement must be upper triangular");
        if (j > i) require(U(i, j) == M.G(i, j), ErrorKind::Input, "refinement must polarize to the form");
      }
      qtarget[i] = S.element_index(U(i, i));
    }
    qv.resize(S.size());
    for (long x = 0; x < S.size(); ++x) {
      int s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const int u = S.element_index(U(i, j));
          s = S.add_el(s, S.mul_el(u, S.mul_el(S.digit(x, i), S.digit(x, j))));
        }
      qv[x] = s;
    }
  }

  std::vector<std::vector<long>> by_value(S.q());
  for (long x = 1; x < S.size(); ++x)
    by_value[S.value(x)].push_back(x);

  std::vector<GKey> out;
  std::vector<long> cols(n);
  const GKey vsize = static_cast<GKey>(S.size());
  auto rec = [&](auto&& self, int j, GKey key, GKey weight) -> void {
    if (j == n) {
      out.push_back(key);
      require(static_cast<long>(out.size()) <= b.max_order, ErrorKind::Budget, "isometry group exceeds the order budget");
      return;
    }
    for (long x : by_value[G[j * n + j]]) {
      if (quadratic && qv[x] != qtarget[j]) continue;
      bool ok = true;
      for (int i = 0; i < j && ok; ++i) ok = S.pair(cols[i], x) == G[i * n + j];
      if (!ok) continue;
      cols[j] = x;
      self(self, j + 1, key + weight * static_cast<GKey>(x), weight * vsize);
    }
  };
  rec(rec, 0, 0, 1);
  return FiniteGroup(M, std::move(out));
}

long orthogonal_order_brute_force(const Form& M, long max_matrices) {
  const Ring& R = M.R;
  require(R.is_field(), ErrorKind::Precondition, "isometry groups need a finite field");
  const int n = M.rank();
  const long q = R.field_order();
  auto total = checked_pow(q, n * n);
  require(total && static_cast<long>(*total) <= max_matrices, ErrorKind::Budget, "too many matrices for brute force");
  long count = 0;
  for (long idx = 0; idx < static_cast<long>(*total); ++idx) {
    Mat T = mat_zero(R, n, n);
    long c = idx;
    for (auto& e : T.e) {
      e = R.element(c % q);
      c /= q;
    }
    if (mat_pair(R, T, M.G, T) == M.G) ++count;
  }
  return count;
}

bool verify_group(const FiniteGroup& G) {
  const long N = G.order();
  if (G.index_of(G.identity()) < 0) return false;
  const auto& gens = G.generators();
  std::vector<char> mark;
  if (closure(G, gens, mark) != N) return false;
  // G^{-1} T^T G T = 1 iff T^T G T = G, so the packed inverse test is a full
  // Gram scan; the generic certificate check runs on every element for small
  // groups and on an even stride plus the generators otherwise.
  const long stride = N <= 50000 ? 1 : N / 5000;
  const Mat& Gram = G.form().G;
  const Ring& R = G.form().R;
  for (long i = 0; i < N; ++i) {
    const GKey a = G.elements()[i];
    const GKey ai = G.inv(a);
    if (G.mul(a, ai) != G.identity() || !G.contains(ai)) return false;
    if (G.mul(ai, a) != G.identity()) return false;
    if (i % stride == 0 && !verify_isometry(G.matrix(a), G.form(), G.form())) return false;
  }
  for (GKey s : gens)
    if (mat_pair(R, G.matrix(s), Gram, G.matrix(s)) != Gram) return false;
  return true;
}

GKey stab_map(const FiniteGroup& small, const FiniteGroup& big, GKey g) {
  const int n1 = small.rank(), n2 = big.rank();
  const GKey q = static_cast<GKey>(big.q());
  const GKey S = *checked_pow(q, n2);
  GKey out = 0, w = 1, unit = 1;
  for (int j = 0; j < n2; ++j) {
    const GKey col = j < n1 ? static_cast<GKey>(small.column(g, j)) : unit;
    out += w * col;
    w *= S;
    unit *= q;
  }
  return out;
}

StabCheck check_stab_map(const FiniteGroup& small, const FiniteGroup& big) {
  StabCheck r;
  require(small.q() == big.q() && small.rank() <= big.rank(), ErrorKind::Precondition, "incompatible groups");
  std::vector<GKey> img;
  img.reserve(small.order());
  r.into = true;
  for (GKey g : small.elements()) {
    const GKey h = stab_map(small, big, g);
    r.into = r.into && big.contains(h);
    img.push_back(h);
  }
  std::sort(img.begin(), img.end());
  r.injective = std::adjacent_find(img.begin(), img.end()) == img.end();
  r.identity_ok = stab_map(small, big, small.identity()) == big.identity();
  r.homomorphism = true;
  for (GKey g : small.elements())
    for (GKey s : small.generators())
      if (stab_map(small, big, small.mul(g, s)) != big.mul(stab_map(small, big, g), stab_map(small, big, s))) {
        r.homomorphism = false;
        return r;
      }
  return r;
}

std::vector<long> invariant_factors_from_orders(const std::vector<long>& orders) {
  const long m = static_cast<long>(orders.size());
  require(m >= 1, ErrorKind::Input, "empty group");
  std::vector<std::vector<int>> exps;  // per prime, exponents descending
  std::vector<long> primes;
  long rest = m;
  for (long p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    // s_k = log_p #{x : ord(x) | p^k}; the number of cyclic factors of
    // exponent >= k is s_k - s_{k-1}.
    std::vector<int> s{0};
    long pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      long cnt = 0;
      for (long o : orders) cnt += pk % o == 0;
      int lg = 0;
      long c = cnt;
      while (c % p == 0 && c > 1) {
        c /= p;
        ++lg;
      }
      require(c == 1, ErrorKind::Internal, "element-order counts are not those of an abelian group");
      s.push_back(lg);
    }
    require(s.back() == e, ErrorKind::Internal, "element-order counts are not those of an abelian group");
    std::vector<int> ge;  // ge[k] = #factors with exponent >= k
    for (int k = 1; k <= e; ++k) ge.push_back(s[k] - s[k - 1]);
    std::vector<int> ex;
    for (int k = 1; k <= e; ++k) {
      const int here = ge[k - 1] - (k < e ? ge[k] : 0);
      require(here >= 0, ErrorKind::Internal, "element-order counts are not those of an abelian group");
      for (int t = 0; t < here; ++t) ex.push_back(k);
    }
    std::sort(ex.rbegin(), ex.rend());
    primes.push_back(p);
    exps.push_back(ex);
  }
  size_t len = 0;
  for (const auto& e : exps) len = std::max(len, e.size());
  std::vector<long> f(len, 1);  // f[0] largest
  for (size_t i = 0; i < primes.size(); ++i)
    for (size_t t = 0; t < exps[i].size(); ++t)
      for (int k = 0; k < exps[i][t]; ++k) f[t] *= primes[i];
  std::reverse(f.begin(), f.end());
  return f;
}

std::string Abelianization::describe() const {
  if (factors.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < factors.size(); ++i) s += (i ? " + Z/" : "Z/") + std::to_string(factors[i]);
  return s;
}

Abelianization abelianization(const FiniteGroup& G, const GroupBudget& b) {
  require(G.order() <= b.max_order, ErrorKind::Budget, "group exceeds the order budget");
  const auto& gens = G.generators();
  std::vector<GKey> dgens;
  auto comm = [&](GKey x, GKey y) { return G.mul(G.mul(G.inv(x), G.inv(y)), G.mul(x, y)); };
  for (GKey x : gens)
    for (GKey y : gens) {
      const GKey c = comm(x, y);
      if (c != G.identity()) dgens.push_back(c);
    }
  // Normal closure: the commutator subgroup is the normal closure of the
  // commutators of generators; conjugating its generators by the group
  // generators stays inside once it is normal.
  std::vector<char> mark;
  long dsize = closure(G, dgens, mark);
  for (bool grew = true; grew;) {
    grew = false;
    for (size_t i = 0; i < dgens.size() && dsize < G.order(); ++i)
      for (GKey s : gens) {
        const GKey c = G.mul(G.mul(G.inv(s), dgens[i]), s);
        if (!mark[G.index_of(c)]) {
          dgens.push_back(c);
          dsize = closure(G, dgens, mark);
          grew = true;
        }
      }
  }
  Abelianization A;
  A.derived_order = dsize;
  std::vector<GKey> D;
  for (long i = 0; i < G.order(); ++i)
    if (mark[i]) D.push_back(G.elements()[i]);
  A.coset.assign(static_cast<size_t>(G.order()), -1);
  auto claim = [&](GKey rep) {
    const int id = static_cast<int>(A.reps.size());
    A.reps.push_back(rep);
    for (GKey d : D) {
      const long k = G.index_of(G.mul(rep, d));
      require(A.coset[k] < 0, ErrorKind::Internal, "cosets overlap");
      A.coset[k] = id;
    }
  };
  claim(G.identity());
  for (long i = 0; i < G.order(); ++i)
    if (A.coset[i] < 0) claim(G.elements()[i]);
  std::vector<long> orders;
  for (GKey r : A.reps) {
    long o = 1;
    GKey x = r;
    while (!mark[G.index_of(x)]) {
      x = G.mul(x, r);
      ++o;
    }
    orders.push_back(o);
  }
  A.factors = invariant_factors_from_orders(orders);
  A.factors.erase(std::remove(A.factors.begin(), A.factors.end(), 1L), A.factors.end());
  return A;
}

std::string InducedMap::kind() const {
  if (injective && surjective) return "iso";
  if (surjective) return "epi";
  if (injective) return "mono";
  if (std::all_of(image.begin(), image.end(), [](int c) { return c == 0; })) return "zero";
  return "neither";
}

InducedMap induced_map(const FiniteGroup& A, const Abelianization& Aab, const FiniteGroup& B,
                       const Abelianization& Bab, const std::function<GKey(GKey)>& f) {
  InducedMap m;
  const long na = Aab.order(), nb = Bab.order();
  m.image.assign(static_cast<size_t>(na), -1);
  bool well_defined = true;
  for (long i = 0; i < A.order(); ++i) {
    const long j = B.index_of(f(A.elements()[i]));
    require(j >= 0, ErrorKind::Precondition, "map leaves the target group");
    int& slot = m.image[Aab.coset[i]];
    const int c = Bab.coset[j];
    if (slot < 0) slot = c;
    well_defined = well_defined && slot == c;
  }
  m.homomorphism = well_defined;
  for (long x = 0; x < na && m.homomorphism; ++x)
    for (long y = 0; y < na && m.homomorphism; ++y) {
      const int xy = Aab.coset[A.index_of(A.mul(Aab.reps[x], Aab.reps[y]))];
      const int ixy = Bab.coset[B.index_of(B.mul(Bab.reps[m.image[x]], Bab.reps[m.image[y]]))];
      m.homomorphism = m.image[xy] == ixy;
    }
  std::vector<int> sorted = m.image;
  std::sort(sorted.begin(), sorted.end());
  m.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  m.surjective = std::unique(sorted.begin(), sorted.end()) - sorted.begin() == nb;
  return m;
}

long range_bound(const RangeQuery& q) {
  const long base = static_cast<long>(q.z) - 3L * q.c;
  switch (q.kind) {
    case RangeKind::MainlEpi: return floordiv2(base - 5);
    case RangeKind::MainlIso: return floordiv2(base - 6);
    case RangeKind::MainlSplitEpi: return floordiv2(base - 5 - q.r);
    case RangeKind::MainlSplitIso: return floordiv2(base - 7 - q.r);
    case RangeKind::MainlGeneralEpi: return floordiv2(base - 5 - 2L * q.r);
    case RangeKind::MainlGeneralIso: return floordiv2(base - 7 - 2L * q.r);
    case RangeKind::Homstab:
      return q.cR != 0 ? floordiv2((q.n - 3L) * q.cR - 6) : floordiv2(q.n - 6L);
    case RangeKind::Useintro: return floordiv2(q.n - 12L);
  }
  fail(ErrorKind::Input, "unknown range kind");
}

namespace {
const std::vector<std::pair<std::string, RangeKind>>& range_names() {
  static const std::vector<std::pair<std::string, RangeKind>> names = {
      {"mainl-epi", RangeKind::MainlEpi},
      {"mainl-iso", RangeKind::MainlIso},
      {"mainl-split-epi", RangeKind::MainlSplitEpi},
      {"mainl-split-iso", RangeKind::MainlSplitIso},
      {"mainl-general-epi", RangeKind::MainlGeneralEpi},
      {"mainl-general-iso", RangeKind::MainlGeneralIso},
      {"homstab", RangeKind::Homstab},
      {"useintro", RangeKind::Useintro},
  };
  return names;
}
}  // namespace

RangeKind parse_range_kind(const std::string& s) {
  for (const auto& [name, k] : range_names())
    if (name == s) return k;
  fail(ErrorKind::Input, "unknown range kind: " + s);
}

std::string range_kind_name(RangeKind k) {
  for (const auto& [name, kind] : range_names())
    if (kind == k) return name;
  fail(ErrorKind::Internal, "unnamed range kind");
}

std::vector<StabilityRow> h1_stability_table(const Form& M0, const Form& F, int n_from, int n_to,
                                             const GroupBudget& b, int cofinal_cR) {
  require(n_from >= 0 && n_from <= n_to, ErrorKind::Input, "empty range of summand counts");
  require(F.rank() >= 1 && F.R == M0.R, ErrorKind::Input, "stabilizing form must be nonzero over the same ring");
  auto form_at = [&](int n) {
    Form Fn = n == 0 ? zero_form(F.R) : power(F, n);
    return M0.rank() == 0 ? Fn : (n == 0 ? M0 : direct_sum(M0, Fn));
  };
  std::vector<FiniteGroup> groups;
  std::vector<Abelianization> abs;
  std::vector<StabilityRow> rows;
  for (int n = n_from; n <= n_to; ++n) {
    Form M = form_at(n);
    groups.push_back(orthogonal_group(M, b));
    abs.push_back(abelianization(groups.back(), b));
    StabilityRow r;
    r.n = n;
    r.order = groups.back().order();
    r.h1 = abs.back().factors;
    r.z = M.rank() == 0 ? 0 : isotropic_rank(M).value;
    r.c = M.rank() == 0 ? 0 : complexity(M);
    r.iso_bound = range_bound({RangeKind::MainlIso, r.z, r.c, 0, 0, 0});
    bool proven = r.iso_bound >= 1;
    if (cofinal_cR >= 0) {
      r.homstab = range_bound({RangeKind::Homstab, 0, 0, 0, n, cofinal_cR});
      proven = proven || *r.homstab >= 1;
    }
    r.label = proven ? "proven-range" : "observed";
    rows.push_back(r);
  }
  for (size_t k = 0; k + 1 < rows.size(); ++k) {
    const FiniteGroup &A = groups[k], &B = groups[k + 1];
    InducedMap m = induced_map(A, abs[k], B, abs[k + 1], [&](GKey g) { return stab_map(A, B, g); });
    require(m.homomorphism, ErrorKind::Internal, "induced map on abelianizations is not a homomorphism");
    rows[k].map_kind = m.kind();
    rows[k].map_image = m.image;
  }
  return rows;
}

std::string stability_tsv(const std::vector<StabilityRow>& rows) {
  std::ostringstream os;
  os << "n\torder\tH1\tmap_to_next\tz\tc\tiso_bound\thomstab_bound\tlabel\n";
  for (const auto& r : rows) {
    std::string h1 = "0";
    if (!r.h1.empty()) {
      h1.clear();
      for (size_t i = 0; i < r.h1.size(); ++i) h1 += (i ? "+Z/" : "Z/") + std::to_string(r.h1[i]);
    }
    os << r.n << '\t' << r.order << '\t' << h1 << '\t' << (r.map_kind.empty() ? "-" : r.map_kind) << '\t' << r.z
       << '\t' << r.c << '\t' << r.iso_bound << '\t' << (r.homstab ? std::to_string(*r.homstab) : "-") << '\t'
       << r.label << '\n';
  }
  return os.str();
}

}  // namespace sbf
